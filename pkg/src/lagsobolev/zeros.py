"""Certified real zeros of rational polynomials, zeros of ``phi_a`` and zero-scaling tables.

Isolation uses Arb's certified complex root finder (via python-flint) on the
integer polynomial obtained by clearing denominators.  Every real root is then
re-certified independently: the rational endpoints of its interval are checked
to give opposite signs of the square-free part under exact evaluation, and the
interval is bisected exactly until it meets the requested width.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

import flint
from gmpy2 import mpq

from .asymptotics import limit_shape, mh_limit, phi
from .polynomial import Polynomial
from .scalar import default_precision, exact, real_context, to_real
from .sobolev import OrthoSequence
from .tables import ConvergenceRow


@dataclass(frozen=True)
class RootList:
    """Real roots in ascending order with exact isolating intervals.

    ``intervals[i] = (lo, hi)`` are rationals with ``lo < root_i < hi`` (or
    ``lo == hi == root_i`` for an exactly located root).  ``multiplicities``
    follows the same order.  Non-real roots are only counted; ``nonreal`` holds
    low-precision approximations used to rank roots by modulus.
    """

    roots: tuple
    intervals: tuple
    multiplicities: tuple
    degree: int
    nonreal: tuple = field(default=())

    @property
    def count_positive(self) -> int:
        return sum(1 for lo, _ in self.intervals if lo >= 0 and not (lo == 0 and self._is_zero_root(lo)))

    def _is_zero_root(self, lo) -> bool:
        return any(a == b == 0 for a, b in self.intervals if a == lo)

    @property
    def sign_changes_positive(self) -> int:
        """Positive roots of odd multiplicity, i.e. sign changes on ``(0, inf)``."""
        return sum(1 for (lo, hi), m in zip(self.intervals, self.multiplicities) if lo >= 0 and hi > 0 and m % 2)

    @property
    def nonreal_count(self) -> int:
        return self.degree - sum(self.multiplicities)

    def positive(self) -> list:
        return [r for r, (lo, hi) in zip(self.roots, self.intervals) if lo >= 0 and hi > 0]


def _integer_poly(p: Polynomial) -> flint.fmpz_poly:
    den = 1
    for c in p.coeffs:
        den = lcm(den, int(c.denominator))
    return flint.fmpz_poly([int(c * den) for c in p.coeffs])


def _arb_to_mpq(x) -> mpq:
    man, exp = x.man_exp()
    return mpq(int(man)) * mpq(2) ** int(exp)


def _sign(f: flint.fmpz_poly, x: mpq) -> int:
    v = f(flint.fmpq(int(x.numerator), int(x.denominator)))
    return (v > 0) - (v < 0)


def _descartes_variations(coeffs) -> int:
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def real_roots(p: Polynomial, precision: int | None = None) -> RootList:
    """Isolate and refine every real root of ``p`` to relative width ``2^-(precision-4)``."""
    precision = precision or default_precision()
    if p.degree < 0:
        raise ValueError("the zero polynomial has no isolated roots")
    f = _integer_poly(p)
    # square-free part: its sign changes at each distinct real root
    g = f // f.gcd(f.derivative()) if p.degree > 0 else f
    old = flint.ctx.prec
    flint.ctx.prec = precision + 32
    try:
        found = f.complex_roots()
    finally:
        flint.ctx.prec = old
    reals, nonreal = [], []
    for c, mult in found:
        if c.imag == 0:
            reals.append((c.real, mult))
        else:
            nonreal.extend([complex(c)] * mult)
    items = []
    for r, mult in reals:
        mid = _arb_to_mpq(r.mid())
        rad = _arb_to_mpq(r.rad())
        if rad == 0:
            if _sign(g, mid) != 0:
                raise ArithmeticError("exact root reported where the polynomial does not vanish")
            items.append((mid, mid, mult))
            continue
        lo, hi = mid - 2 * rad, mid + 2 * rad
        if _sign(g, mid) == 0:
            items.append((mid, mid, mult))
            continue
        items.append(_refine(g, lo, hi, precision) + (mult,))
    items.sort(key=lambda t: t[0])
    for (_, hi_a, _), (lo_b, _, _) in zip(items, items[1:]):
        if not hi_a < lo_b:
            raise ArithmeticError("isolating intervals overlap")
    positive = sum(m for lo, hi, m in items if lo > 0)
    variations = _descartes_variations(p.coeffs)
    if positive > variations or (variations - positive) % 2:
        raise ArithmeticError("positive root count contradicts Descartes' rule of signs")
    roots = tuple(to_real((lo + hi) / 2, precision) for lo, hi, _ in items)
    return RootList(
        roots=roots,
        intervals=tuple((lo, hi) for lo, hi, _ in items),
        multiplicities=tuple(m for _, _, m in items),
        degree=p.degree,
        nonreal=tuple(nonreal),
    )


def _refine(g, lo: mpq, hi: mpq, precision: int) -> tuple:
    slo, shi = _sign(g, lo), _sign(g, hi)
    if slo == 0 or shi == 0 or slo == shi:
        raise ArithmeticError(f"no certified sign change on [{lo}, {hi}]")
    tol = mpq(1, 2 ** (precision - 4))
    while hi - lo > tol * max(abs(lo), abs(hi)) / 2:
        mid = (lo + hi) / 2
        sm = _sign(g, mid)
        if sm == 0:
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def sign_change_count(seq: OrthoSequence, n: int, precision: int | None = None) -> int:
    """Number of sign changes of the ``n``-th polynomial on ``(0, inf)``."""
    return real_roots(seq[n], precision).sign_changes_positive


def interlaces(inner: RootList, outer: RootList) -> bool:
    """``outer_1 < inner_1 < outer_2 < ...`` checked on the isolating intervals."""
    if len(outer.intervals) != len(inner.intervals) + 1:
        return False
    for i, (lo, hi) in enumerate(inner.intervals):
        if not (outer.intervals[i][1] < lo and hi < outer.intervals[i + 1][0]):
            return False
    return True


# zeros of phi --------------------------------------------------------------------


def _phi_sign(order, x: mpq, precision: int) -> int:
    """Sign of ``phi_order(x)``, or 0 when the value is below the series accuracy."""
    v = phi(order, x, precision + 16)
    if abs(v) <= real_context(precision).ldexp(1, -(precision + 4)) * (1 + abs(x)):
        return 0
    return 1 if v > 0 else -1


def phi_zero(order, k: int, precision: int | None = None):
    """``k``-th positive zero ``z_k`` of ``phi_order``; the Bessel zero is ``j_{order,k} = 2 sqrt(z_k)``."""
    precision = precision or default_precision()
    a = exact(order)
    if a <= -1:
        raise ValueError(f"order must be > -1, got {a}")
    if k < 1:
        raise ValueError("k must be a positive integer")
    brackets = _phi_brackets(a, k, precision)
    lo, hi = brackets[k - 1]
    return _phi_bisect(a, lo, hi, precision)


def _phi_brackets(a: mpq, k: int, precision: int, bound: int = 10**6) -> list:
    # step outward; zeros of phi_a are separated by gaps that grow with k
    brackets = []
    step = mpq(1, 2)
    x = mpq(0)
    prev = _phi_sign(a, x, precision)
    last_zero = None
    while len(brackets) < k:
        if x > bound:
            raise ArithmeticError(f"scan passed x={bound} before finding {k} zeros")
        nxt = x + step
        s = _phi_sign(a, nxt, precision)
        while s == 0:
            nxt += step / 7
            s = _phi_sign(a, nxt, precision)
        if s != prev:
            brackets.append((x, nxt))
            if last_zero is not None:
                step = max(mpq(1, 2), (nxt - last_zero) / 2)
            last_zero = nxt
            prev = s
        x = nxt
    return brackets


def _phi_bisect(a: mpq, lo: mpq, hi: mpq, precision: int):
    slo = _phi_sign(a, lo, precision)
    tol = mpq(1, 2 ** (precision - 4))
    while hi - lo > tol * hi:
        mid = (lo + hi) / 2
        sm = _phi_sign(a, mid, precision)
        if sm == 0:
            return to_real(mid, precision)
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return to_real((lo + hi) / 2, precision)


def function_zero(func, k: int, precision: int, step=mpq(1, 4), bound: int = 10**4):
    """``k``-th positive sign change of a real function given as ``func(x: mpq) -> real``."""
    eps = real_context(precision).ldexp(1, -(precision - 16))

    def sign(x):
        v = func(x)
        return 0 if abs(v) <= eps else (1 if v > 0 else -1)

    x = step
    prev = sign(x)
    found = 0
    while x < bound:
        nxt = x + step
        s = sign(nxt)
        if s and prev and s != prev:
            found += 1
            if found == k:
                lo, hi = x, nxt
                tol = mpq(1, 2 ** (precision - 8))
                while hi - lo > tol * hi:
                    mid = (lo + hi) / 2
                    sm = sign(mid)
                    if sm == 0:
                        return to_real(mid, precision)
                    if sm == prev:
                        lo = mid
                    else:
                        hi = mid
                return to_real((lo + hi) / 2, precision)
        if s:
            prev = s
        x = nxt
    raise ArithmeticError(f"fewer than {k} sign changes below {bound}")


def limit_function_zero(spec, k: int, precision: int | None = None):
    """``k``-th positive zero of the actual Mehler-Heine limit of ``spec`` (after removing ``x^{r+1}``)."""
    precision = precision or default_precision()
    r, s = limit_shape(spec)
    if s is None:
        return phi_zero(spec.alpha + 2 * r + 2, k, precision)
    return function_zero(lambda x: mh_limit(spec.alpha, r, s, x, precision), k, precision)


# zero-scaling tables ---------------------------------------------------------------


def scaled_zeros(seq: OrthoSequence, n: int, precision: int | None = None) -> tuple:
    """``(collapsing, outer)`` for the ``n``-th polynomial.

    ``collapsing`` are the ``r + 1`` zeros of smallest modulus (real or not),
    scaled by ``n`` and reported by modulus; ``outer`` are the remaining
    positive real zeros, scaled by ``n`` and ascending.
    """
    precision = precision or default_precision()
    r, _ = limit_shape(seq.spec)
    rl = real_roots(seq[n], precision)
    ctx = real_context(precision)
    pool = [(abs(complex(z)), ("c", i)) for i, z in enumerate(rl.nonreal)]
    for i, (root, m) in enumerate(zip(rl.roots, rl.multiplicities)):
        pool.extend([(abs(float(root)), ("r", i))] * m)
    pool.sort(key=lambda t: t[0])
    taken = pool[: r + 1]
    collapsing = []
    used_real = set()
    for _, (kind, i) in taken:
        if kind == "r":
            collapsing.append(n * abs(rl.roots[i]))
            used_real.add(i)
        else:
            collapsing.append(n * ctx.mpf(abs(complex(rl.nonreal[i]))))
    outer = [n * rl.roots[i] for i in range(len(rl.roots)) if i not in used_real and rl.intervals[i][0] > 0]
    return collapsing, outer


def zero_scaling_table(seq: OrthoSequence, n_list, k_max: int, precision: int | None = None) -> list:
    """Rows ``(n, k, n * zero_k, target)``.

    ``k <= r + 1``: modulus of the ``k``-th collapsing zero, target 0.
    ``k >= r + 2``: the ``(k - r - 1)``-th remaining positive zero, target the
    zero ``z_{k-r-1}`` of ``phi_{alpha+2r+2}``, with or without a hole.
    """
    precision = precision or default_precision()
    r, _ = limit_shape(seq.spec)
    alpha = seq.spec.alpha
    zero = real_context(precision).zero
    targets = {}
    rows = []
    for n in n_list:
        collapsing, outer = scaled_zeros(seq, n, precision)
        for k in range(1, k_max + 1):
            if k <= r + 1:
                rows.append(ConvergenceRow.make(n, collapsing[k - 1], zero, k, "|n zero|"))
            else:
                i = k - r - 1
                if i not in targets:
                    targets[i] = phi_zero(alpha + 2 * r + 2, i, precision)
                rows.append(ConvergenceRow.make(n, outer[i - 1], targets[i], k, "n zero"))
    return rows
