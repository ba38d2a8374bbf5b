"""Expansion in the shifted Laguerre basis and the derivative-at-zero machinery.

A Sobolev polynomial whose highest mass sits on derivative order ``R`` is
quasi-orthogonal of order ``R + 1`` for the weight ``x^{alpha+R+1} e^{-x}``, so
its expansion in ``L_m^{alpha+R+1}`` has only ``R + 2`` nonzero terms.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

from gmpy2 import mpq

from .laguerre import laguerre_deriv_at0, laguerre_monic
from .polynomial import Polynomial
from .scalar import default_precision, factorial, falling, gamma_ratio, real_context, to_real
from .sobolev import OrthoSequence, SobolevSpec, build_sequence
from .tables import ConvergenceRow, stabilizes


@dataclass(frozen=True)
class ConnectionExpansion:
    """``P_n = sum_{j=0}^{R+1} a^j L_{n-j}^{alpha+R+1}`` with ``a^0 = 1``."""

    n: int
    order: int
    beta: mpq
    coeffs: tuple

    def reconstruct(self) -> Polynomial:
        out = Polynomial()
        for j, a in enumerate(self.coeffs):
            out = out.axpy(a, laguerre_monic(self.beta, self.n - j))
        return out


def connection_coefficients(poly: Polynomial, beta) -> list:
    """All ``c_m`` with ``poly = sum_m c_m L_m^beta`` (exact triangular back-substitution)."""
    work = list(poly.coeffs)
    out = [mpq(0)] * len(work)
    for m in range(len(work) - 1, -1, -1):
        c = work[m]
        if c:
            out[m] = c
            for k, lc in enumerate(laguerre_monic(beta, m).coeffs):
                work[k] -= c * lc
    return out


def expand_shifted(seq: OrthoSequence, n: int) -> ConnectionExpansion:
    """Connection coefficients of ``P_n`` over ``L^{alpha+R+1}``, ``R`` the highest mass order.

    Raises ``ArithmeticError`` if a coefficient below index ``n - (R + 1)`` is
    nonzero, which would contradict quasi-orthogonality.
    """
    spec = seq.spec
    order = spec.quasi_order()
    beta = spec.alpha + order + 1
    full = connection_coefficients(seq[n], beta)
    cutoff = n - (order + 1)
    for m in range(max(cutoff, 0)):
        if full[m] != 0:
            raise ArithmeticError(
                f"coefficient of L_{m} is {full[m]} for n={n}: quasi-orthogonality of order {order + 1} violated"
            )
    coeffs = tuple(full[n - j] for j in range(min(order + 1, n) + 1))
    return ConnectionExpansion(n, order, beta, coeffs)


def a_quantities(exp: ConnectionExpansion) -> list:
    """``A^i = sum_{j=i}^{R+1} j!/(j-i)! a^j L_{n-j}^{alpha+R+1}(0)`` for ``i = 0..R+1``."""
    out = []
    for i in range(exp.order + 2):
        total = mpq(0)
        for j in range(i, len(exp.coeffs)):
            total += falling(j, i) * exp.coeffs[j] * laguerre_deriv_at0(exp.beta, exp.n - j, 0)
        out.append(total)
    return out


def derivative_ratio(alpha, poly: Polynomial, n: int, k: int) -> mpq:
    """``P_n^{(k)}(0) / (L_n^alpha)^{(k)}(0)``; the ``k!`` factors cancel."""
    return poly.coeff(k) / laguerre_monic(alpha, n).coeffs[k]


def ratio_recursion_residual(seq: OrthoSequence, n: int, k: int) -> mpq:
    """Left minus right side of the identity linking the order ``k+1`` and ``k`` derivative ratios.

    ``rho_{k+1} = (alpha+k+1)/(alpha+R+k+2) rho_k
    + Gamma(alpha+R+2)/Gamma(alpha+R+k+3) sum_{i=1}^{k+1} C(k, i-1) Gamma(alpha+k+2)/Gamma(alpha+i+1) A^i / L_n^{(i)}(0)``
    with ``rho_k = P_n^{(k)}(0)/L_n^{(k)}(0)``.  Exactly zero for a correct sequence.
    """
    if n < 1 or not 0 <= k <= n - 1:
        raise ValueError(f"need n >= 1 and 0 <= k <= n - 1, got n={n}, k={k}")
    spec = seq.spec
    a = spec.alpha
    order = spec.quasi_order()
    poly = seq[n]
    exp = expand_shifted(seq, n)
    big_a = a_quantities(exp)
    lhs = derivative_ratio(a, poly, n, k + 1)
    rhs = (a + k + 1) / (a + order + k + 2) * derivative_ratio(a, poly, n, k)
    acc = mpq(0)
    for i in range(1, k + 2):
        if i > order + 1:
            break
        acc += comb(k, i - 1) * gamma_ratio(a + i, k + 1 - i) * big_a[i] / laguerre_deriv_at0(a, n, i)
    rhs += acc / gamma_ratio(a + order + 1, k + 1)
    return lhs - rhs


# tables -----------------------------------------------------------------------


def _sequence_for(spec: SobolevSpec, n_list, seq: OrthoSequence | None) -> OrthoSequence:
    need = max(n_list)
    if seq is not None and seq.n_max >= need:
        return seq
    return build_sequence(spec, need)


def connection_ratio_table(spec: SobolevSpec, j: int, n_list, seq=None, precision=None) -> list:
    """Rows ``(n, a^j / n^j, C(r+1, j), error)``."""
    r = spec.no_holes()
    if r is None:
        raise ValueError("connection_ratio_table needs a spec without holes")
    if not 0 <= j <= r + 1:
        raise ValueError(f"j must lie in 0..{r + 1}")
    precision = precision or default_precision()
    seq = _sequence_for(spec, n_list, seq)
    rows = []
    for n in n_list:
        exp = expand_shifted(seq, n)
        observed = to_real(exp.coeffs[j] / mpq(n) ** j, precision)
        rows.append(ConvergenceRow.make(n, observed, to_real(comb(r + 1, j), precision), j, f"a^{j}/n^{j}"))
    return rows


def derivative_limit(alpha, r: int, k: int) -> mpq:
    """``k!/(k-(r+1))! Gamma(alpha+k+1)/Gamma(alpha+r+k+2)`` for ``k >= r + 1``."""
    return mpq(falling(k, r + 1)) / gamma_ratio(alpha + k, r + 1)


def scaled_derivative_ratio(alpha, poly, n, k, precision):
    """``n^{alpha+2k+1} P_n^{(k)}(0) / L_n^{(k)}(0)`` as a real."""
    ctx = real_context(precision + 16)
    scale = ctx.power(ctx.mpf(n), to_real(alpha + 2 * k + 1, precision + 16))
    return +real_context(precision).mpf(scale * to_real(derivative_ratio(alpha, poly, n, k), precision + 16))


def derivative_ratio_table(spec: SobolevSpec, k: int, n_list, seq=None, precision=None) -> list:
    """Derivative-at-zero ratios against the classical ones.

    For ``k >= r + 1`` the target is the explicit limit; for ``k <= r`` the
    observed column is ``n^{alpha+2k+1}`` times the ratio and the target is
    its value at the largest ``n`` (the stabilized constant estimate).
    """
    r = spec.no_holes()
    if r is None:
        raise ValueError("derivative_ratio_table needs a spec without holes (see holed_derivative_ratio_table)")
    precision = precision or default_precision()
    seq = _sequence_for(spec, n_list, seq)
    a = spec.alpha
    if k >= r + 1:
        target = to_real(derivative_limit(a, r, k), precision)
        return [
            ConvergenceRow.make(n, to_real(derivative_ratio(a, seq[n], n, k), precision), target, k, "ratio")
            for n in n_list
        ]
    scaled = [scaled_derivative_ratio(a, seq[n], n, k, precision) for n in n_list]
    return [ConvergenceRow.make(n, v, scaled[-1], k, "scaled ratio") for n, v in zip(n_list, scaled)]


def stabilized_constant(spec: SobolevSpec, k: int, n_list=(50, 100, 200), seq=None, precision=None):
    """Estimate of the nonzero constant in ``ratio ~ C / n^{alpha+2k+1}`` and whether it stabilized."""
    precision = precision or default_precision()
    seq = _sequence_for(spec, n_list, seq)
    values = [scaled_derivative_ratio(spec.alpha, seq[n], n, k, precision) for n in n_list]
    return values[-1], stabilizes(values)


def lemma4_monitor(spec: SobolevSpec, n_min: int = 50, n_max: int = 200, seq=None):
    """Largest ``|P_n^{(k)}(0) / L_n^{(k)}(0)|`` over ``n_min <= n <= n_max``, ``0 <= k <= n``.

    Returns ``(max_ratio, bound, violations)`` with ``bound = 2(r+1)`` and
    ``violations`` the ``(n, k)`` pairs exceeding it.
    """
    r = spec.no_holes()
    if r is None:
        raise ValueError("the uniform bound is stated for specs without holes")
    seq = _sequence_for(spec, [n_max], seq)
    bound = mpq(2 * (r + 1)) if r >= 0 else mpq(1)
    worst = mpq(0)
    violations = []
    a = spec.alpha
    for n in range(n_min, n_max + 1):
        lag = laguerre_monic(a, n).coeffs
        for k, c in enumerate(seq[n].coeffs):
            ratio = abs(c / lag[k])
            if ratio > worst:
                worst = ratio
            if ratio > bound:
                violations.append((n, k))
    return worst, bound, violations


def a_quantity_table(spec: SobolevSpec, i: int, n_list, seq=None, precision=None) -> list:
    """Rows of ``A^i / L_n^{(i)}(0)``; target 0 for ``i <= r`` and ``(r+1)!`` for ``i = r + 1``."""
    r = spec.no_holes()
    if r is None or not 0 <= i <= r + 1:
        raise ValueError("a_quantity_table needs a spec without holes and 0 <= i <= r + 1")
    precision = precision or default_precision()
    seq = _sequence_for(spec, n_list, seq)
    target = to_real(factorial(r + 1) if i == r + 1 else 0, precision)
    rows = []
    for n in n_list:
        val = a_quantities(expand_shifted(seq, n))[i] / laguerre_deriv_at0(spec.alpha, n, i)
        rows.append(ConvergenceRow.make(n, to_real(val, precision), target, i, f"A^{i}/L^({i})(0)"))
    return rows


def norm_ratio_table(spec: SobolevSpec, n_list, seq=None, precision=None) -> list:
    """Rows of ``(P_n, P_n) / ||L_n||^2`` against 1 (Laguerre specs, any support)."""
    from .laguerre import laguerre_norm_sq

    precision = precision or default_precision()
    seq = _sequence_for(spec, n_list, seq)
    one = to_real(1, precision)
    return [
        ConvergenceRow.make(n, to_real(seq.norms[n] / laguerre_norm_sq(spec.alpha, n), precision), one, None, "norm ratio")
        for n in n_list
    ]
