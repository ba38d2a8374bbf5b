"""Verification suite: exact identities and calibrated convergence checks.

Each check returns a :class:`CheckResult`; :func:`run_suite` runs the quick
tier (exact identities at small degree) or the full tier (every check, large
degree tables included).  The CLI ``verify`` command and the acceptance tests
share these functions.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb
from typing import Callable

from gmpy2 import mpq

from . import asymptotics as asy
from . import connection as con
from . import laguerre as lag
from . import zeros as zr
from .polynomial import Polynomial
from .scalar import default_precision, real_context, to_real
from .sobolev import (
    SobolevSpec,
    OrthoSequence,
    build_fourier,
    build_gram,
    build_holed,
    build_recursive,
    build_sequence,
    shifted_moment,
    sobolev_inner,
)
from .tables import errors, strictly_decreasing

ALPHAS = (mpq(0), mpq(1, 2), mpq(1), mpq(-1, 2))
MASS_VALUES = (mpq(1), mpq(1, 10))
SHAPES = ((0,), (0, 1), (0, 1, 2), (0, 2), (0, 3), (0, 1, 3), (2,))
MH_POINTS = (mpq(1, 2), mpq(1), mpq(2), mpq(4))
HERMITE_MUS = (mpq(1, 2),)
N_MH = (50, 100, 200)
N_DERIV = (50, 100, 200, 300)
TIME_BUDGET = 30 * 60


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.name} ({self.seconds:.1f}s): {self.detail}"


def grid_specs() -> list:
    """The acceptance grid: every alpha, mass value and support shape."""
    return [
        SobolevSpec.laguerre(a, {i: m for i in shape})
        for a in ALPHAS
        for m in MASS_VALUES
        for shape in SHAPES
    ]


def calibration_specs() -> list:
    """Unit masses at ``alpha = 0`` over every support shape: the slice the tolerances were frozen on."""
    return [SobolevSpec.laguerre(0, {i: 1 for i in shape}) for shape in SHAPES]


class SequenceCache:
    """Builds each spec once, up to the largest degree requested so far."""

    def __init__(self):
        self._store: dict = {}

    def get(self, spec: SobolevSpec, n: int) -> OrthoSequence:
        seq = self._store.get(spec)
        if seq is None or seq.n_max < n:
            seq = build_sequence(spec, n)
            self._store[spec] = seq
        return seq


def _fmt(x) -> str:
    return f"{float(x):.3g}"


# exact identities ----------------------------------------------------------------


def check_oracles(n_max: int = 25, specs=None) -> CheckResult:
    failures = []
    for spec in specs or grid_specs():
        gram = build_gram(spec, n_max)
        direct = build_recursive(spec, n_max) if spec.no_holes() is not None else build_holed(spec, n_max)
        fourier = build_fourier(spec, n_max)
        for n in range(n_max + 1):
            if not (gram[n] == direct[n] == fourier[n]):
                failures.append((spec.describe(), n))
    return CheckResult(1, "construction routes agree exactly", not failures, f"{len(failures)} mismatches, n<={n_max}", failures=failures)


def check_orthogonality(n_max: int = 25, specs=None, cache=None) -> CheckResult:
    cache = cache or SequenceCache()
    failures = []
    for spec in specs or grid_specs():
        seq = cache.get(spec, n_max)
        order = spec.quasi_order()
        for n in range(1, n_max + 1):
            q = seq[n]
            for m in range(n):
                if sobolev_inner(spec, q, Polynomial.monomial(m)) != 0:
                    failures.append((spec.describe(), n, "inner", m))
            for m in range(n - order - 1):
                if shifted_moment(spec, q, m) != 0:
                    failures.append((spec.describe(), n, "moment", m))
            try:
                con.expand_shifted(seq, n)
            except ArithmeticError:
                failures.append((spec.describe(), n, "expansion", None))
    return CheckResult(2, "orthogonality and quasi-orthogonality", not failures, f"{len(failures)} violations, n<={n_max}", failures=failures)


def check_kernels(m_max: int = 40, k_max: int = 6) -> CheckResult:
    failures = []
    for a in ALPHAS:
        for m in range(m_max + 1):
            for s in range(k_max + 1):
                if lag.kernel_x0_closed(a, m, s) != lag.kernel_x0_poly(a, m, s):
                    failures.append((a, m, "x0", s))
                for k in range(k_max + 1):
                    direct = lag.kernel_deriv00(a, m, k, s)
                    if lag.kernel_deriv00_closed(a, m, k, s) != direct or lag.kernel_deriv00_taylor(a, m, k, s) != direct:
                        failures.append((a, m, k, s))
                if lag.kernel_deriv00_s0_closed(a, m, s) != lag.kernel_deriv00(a, m, s, 0):
                    failures.append((a, m, s, "s0"))
    return CheckResult(3, "kernel closed forms", not failures, f"{len(failures)} mismatches, m<={m_max}, k,s<={k_max}", failures=failures)


def check_ratio_recursion(n_max: int = 25, specs=None, cache=None) -> CheckResult:
    cache = cache or SequenceCache()
    failures = []
    for spec in specs or grid_specs():
        seq = cache.get(spec, n_max)
        for n in range(1, n_max + 1):
            for k in range(n):
                if con.ratio_recursion_residual(seq, n, k) != 0:
                    failures.append((spec.describe(), n, k))
    return CheckResult(4, "derivative-ratio recursion residual", not failures, f"{len(failures)} nonzero residuals, n<={n_max}", failures=failures)


# convergence tables -----------------------------------------------------------------


def check_connection_limit(cache=None) -> CheckResult:
    cache = cache or SequenceCache()
    spec = SobolevSpec.laguerre(0, {0: 1, 1: 1})
    seq = cache.get(spec, max(N_MH))
    failures, parts = [], []
    for j in (1, 2):
        rows = con.connection_ratio_table(spec, j, N_MH, seq)
        err = errors(rows)
        ok = err[-1] < comb(2, j) / 10 and err[-1] < err[0]
        parts.append(f"j={j} err " + "->".join(_fmt(e) for e in err))
        if not ok:
            failures.append(j)
    return CheckResult(5, "connection coefficients a^j/n^j", not failures, "; ".join(parts), failures=failures)


def _derivative_orders(spec) -> list:
    r = spec.no_holes()
    if r is not None:
        return [r + 1, r + 2, r + 3]
    r, s = spec.holed()
    return [k for k in range(r + 1, s + 2) if k != s]


def check_derivative_limits(specs=None, cache=None) -> CheckResult:
    cache = cache or SequenceCache()
    failures = []
    worst = 0
    for spec in specs or calibration_specs():
        seq = cache.get(spec, max(N_DERIV))
        for k in _derivative_orders(spec):
            rows = asy.derivative_table(spec, k, N_DERIV, seq)
            err = errors(rows)
            rel = err[-1] / abs(rows[-1].target)
            worst = max(worst, rel)
            if not (rel <= 0.05 and strictly_decreasing(err)):
                failures.append((spec.describe(), k, [_fmt(e) for e in err]))
    return CheckResult(6, "derivative ratios at 0", not failures, f"worst relative error at n=300 {_fmt(worst)}; {len(failures)} failures", failures=failures)


def check_norm_ratios(specs=None, cache=None) -> CheckResult:
    cache = cache or SequenceCache()
    failures = []
    worst = 0
    for spec in specs or calibration_specs():
        rows = con.norm_ratio_table(spec, N_DERIV, cache.get(spec, max(N_DERIV)))
        err = errors(rows)
        worst = max(worst, err[-1])
        if not (err[-1] <= 0.05 and strictly_decreasing(err)):
            failures.append((spec.describe(), [_fmt(e) for e in err]))
    return CheckResult(7, "norm ratios", not failures, f"worst error at n=300 {_fmt(worst)}; {len(failures)} failures", failures=failures)


def check_uniform_bound(specs=None, cache=None) -> CheckResult:
    cache = cache or SequenceCache()
    failures = []
    worst = 0
    for spec in specs or grid_specs():
        if spec.no_holes() is None:
            continue
        peak, bound, bad = con.lemma4_monitor(spec, 50, 200, cache.get(spec, 200))
        worst = max(worst, peak / bound)
        if bad:
            failures.append((spec.describe(), bad[:5]))
    return CheckResult(8, "uniform derivative bound", not failures, f"largest ratio/bound {_fmt(worst)}", failures=failures)


def _classical_specs() -> list:
    return [SobolevSpec.laguerre(a) for a in ALPHAS]


def _hermite_specs() -> list:
    return [SobolevSpec.hermite(mu, {0: 1, 1: 1}) for mu in HERMITE_MUS]


def _mh_ok(err) -> bool:
    return strictly_decreasing(err) and err[-1] <= err[0] / 2


def check_mehler_heine(specs=None, hermite=None, cache=None, precision=None) -> CheckResult:
    precision = precision or default_precision()
    cache = cache or SequenceCache()
    failures = []
    if specs is None:
        specs = calibration_specs() + _classical_specs()
        hermite = _hermite_specs() if hermite is None else hermite
    specs, hermite = list(specs), list(hermite or [])
    for spec in specs:
        seq = cache.get(spec, max(N_MH))
        for x in MH_POINTS:
            for j in (0, 7):
                err = errors(asy.mh_table(seq, N_MH, x, j, precision))
                if not _mh_ok(err):
                    failures.append((spec.describe(), x, j, [_fmt(e) for e in err]))
    for spec in hermite:
        seq = cache.get(spec, 2 * max(N_MH) + 1)
        for parity in ("even", "odd"):
            for x in MH_POINTS:
                for j in (0, 7):
                    err = errors(asy.hermite_mh_table(seq, N_MH, x, j, parity, precision))
                    if not _mh_ok(err):
                        failures.append((spec.describe(), parity, x, j, [_fmt(e) for e in err]))
    count = len(specs) + len(hermite)
    detail = f"{count} specs x {len(MH_POINTS)} points x j in (0, 7); {len(failures)} failures"
    return CheckResult(9, "Mehler-Heine limits", not failures, detail, failures=failures)


def j_shift_gap(seq: OrthoSequence, x, n: int = 200, j: int = 7, precision=None) -> tuple:
    """``(|value(j) - value(0)|, error(0))`` at degree ``n``: the shift in ``j`` moves the value by ``O(j/n)``."""
    precision = precision or default_precision()
    target = asy.mh_limit_for(seq.spec, x, precision)
    v0 = asy.mh_scaled(seq, n, 0, x, precision)
    vj = asy.mh_scaled(seq, n, j, x, precision)
    return abs(vj - v0), abs(v0 - target)


def check_function_identities(precision: int = 128) -> CheckResult:
    ctx = real_context(precision)
    tol = ctx.ldexp(1, -120)
    worst = {"recurrence": ctx.zero, "half-integer": ctx.zero, "length-one": ctx.zero, "length-one (corrected)": ctx.zero}
    xs = [mpq(i, 2) for i in range(0, 41)]
    for a in (mpq(1, 2), mpq(1), mpq(2)):
        for x in xs:
            xv = to_real(x, precision)
            d = asy.phi(a - 1, x, precision) + xv * asy.phi(a + 1, x, precision) - to_real(a, precision) * asy.phi(a, x, precision)
            worst["recurrence"] = max(worst["recurrence"], abs(d))
    for x in xs[1:]:
        xv = to_real(x, precision)
        root = ctx.sqrt(xv)
        d1 = asy.phi(mpq(1, 2), x, precision) - ctx.sin(2 * root) / (ctx.sqrt(ctx.pi) * root)
        d2 = asy.phi(mpq(-1, 2), x, precision) - ctx.cos(2 * root) / ctx.sqrt(ctx.pi)
        worst["half-integer"] = max(worst["half-integer"], abs(d1), abs(d2))
    for a in ALPHAS:
        for r in (-1, 0, 1):
            for x in xs[:21]:
                series = asy.mh_limit(a, r, r + 2, x, precision)
                worst["length-one"] = max(worst["length-one"], abs(series - asy.mh_limit_length_one(a, r, x, precision)))
                worst["length-one (corrected)"] = max(
                    worst["length-one (corrected)"], abs(series - asy.mh_limit_length_one_exact(a, r, x, precision))
                )
    gating = ("recurrence", "half-integer", "length-one")
    failures = [k for k in gating if worst[k] > tol]
    detail = ", ".join(f"{k} {_fmt(v)}" for k, v in worst.items())
    return CheckResult(10, "scaled Bessel identities", not failures, detail + " (tol 2^-120)", failures=failures)


def check_bessel_zeros(precision: int = 128) -> CheckResult:
    ctx = real_context(precision)
    e1 = abs(zr.phi_zero(mpq(1, 2), 1, precision) - ctx.pi**2 / 4)
    e2 = abs(zr.phi_zero(mpq(-1, 2), 1, precision) - ctx.pi**2 / 16)
    tol = ctx.ldexp(1, -100)
    return CheckResult(11, "zeros of phi", e1 <= tol and e2 <= tol, f"errors {_fmt(e1)}, {_fmt(e2)} (tol 2^-100)")


def _zero_rows(spec, cache, precision):
    r, _ = asy.limit_shape(spec)
    seq = cache.get(spec, max(N_MH))
    return r, zr.zero_scaling_table(seq, N_MH, r + 2, precision)


def check_zero_acceleration(specs=None, cache=None, precision=None) -> CheckResult:
    precision = precision or default_precision()
    cache = cache or SequenceCache()
    failures = []
    outer = {}
    specs = list(specs) if specs is not None else grid_specs()
    for spec in specs:
        r, rows = _zero_rows(spec, cache, precision)
        for k in range(1, r + 2):
            vals = [row.observed for row in rows if row.k == k]
            if not (strictly_decreasing(vals) and vals[-1] < 0.2 * vals[0]):
                failures.append((spec.describe(), k, [_fmt(v) for v in vals]))
        last = [row for row in rows if row.k == r + 2]
        err = last[-1].abs_error / last[-1].target
        outer[spec] = last[-1]
        if not err <= 0.05:
            failures.append((spec.describe(), r + 2, f"rel err {_fmt(err)}"))
    # holes must not change the targets: compare with the spec without the hole
    for spec, row in outer.items():
        shape = spec.holed()
        if shape is None or shape[0] < 0:
            continue
        base = spec.restricted(range(shape[0] + 1))
        if base not in outer:
            continue
        ref = outer[base]
        if not abs(row.observed - ref.observed) < max(row.abs_error, ref.abs_error):
            failures.append((spec.describe(), "vs", base.describe(), _fmt(row.observed), _fmt(ref.observed)))
    return CheckResult(12, "zero acceleration", not failures, f"{len(specs)} specs; {len(failures)} failures", failures=failures)


def check_relative_asymptotics(specs=None, cache=None, precision=None) -> CheckResult:
    precision = precision or default_precision()
    cache = cache or SequenceCache()
    ctx = real_context(precision)
    points = (mpq(-1), mpq(-4), ctx.mpc(-1, 2))
    failures = []
    specs = list(specs) if specs is not None else calibration_specs()
    for spec in specs:
        seq = cache.get(spec, max(N_MH))
        for x in points:
            err = errors(asy.relative_table(seq, N_MH, x, precision))
            if not strictly_decreasing(err):
                failures.append((spec.describe(), str(x), [_fmt(e) for e in err]))
    return CheckResult(13, "relative asymptotics", not failures, f"{len(specs)} specs x 3 points; {len(failures)} failures", failures=failures)


# suite -----------------------------------------------------------------------------


def _timed(fn: Callable, *args, **kwargs) -> CheckResult:
    start = time.perf_counter()
    res = fn(*args, **kwargs)
    res.seconds = time.perf_counter() - start
    return res


def quick_checks() -> list:
    """Exact identities at small degree plus the function identities (well under a minute)."""
    cache = SequenceCache()
    return [
        (check_oracles, dict(n_max=10)),
        (check_orthogonality, dict(n_max=10, cache=cache)),
        (check_kernels, dict(m_max=10, k_max=4)),
        (check_ratio_recursion, dict(n_max=10, cache=cache)),
        (check_function_identities, {}),
        (check_bessel_zeros, {}),
    ]


def full_checks() -> list:
    cache = SequenceCache()
    return [
        (check_oracles, {}),
        (check_orthogonality, dict(cache=cache)),
        (check_kernels, {}),
        (check_ratio_recursion, dict(cache=cache)),
        (check_connection_limit, dict(cache=cache)),
        (check_derivative_limits, dict(cache=cache)),
        (check_norm_ratios, dict(cache=cache)),
        (check_uniform_bound, dict(cache=cache)),
        (check_mehler_heine, dict(cache=cache)),
        (check_function_identities, {}),
        (check_bessel_zeros, {}),
        (check_zero_acceleration, dict(cache=cache)),
        (check_relative_asymptotics, dict(cache=cache)),
    ]


def run_suite(quick: bool = False, report: Callable[[CheckResult], None] | None = None) -> list:
    """Run a tier; the full tier appends the wall-clock budget check as number 14."""
    start = time.perf_counter()
    results = []
    for fn, kwargs in quick_checks() if quick else full_checks():
        res = _timed(fn, **kwargs)
        results.append(res)
        if report:
            report(res)
    if not quick:
        total = time.perf_counter() - start
        res = CheckResult(14, "full suite time budget", total < TIME_BUDGET, f"{total:.0f}s of {TIME_BUDGET}s", total)
        results.append(res)
        if report:
            report(res)
    return results
