"""Monic Laguerre polynomials, their kernels, and the closed kernel formulas.

Everything is exact for rational ``alpha``; the normalized Laguerre measure
``x**alpha * exp(-x) / Gamma(alpha + 1)`` has the rational moments
``gamma_ratio(alpha, k)``, so inner products never touch quadrature.
"""
from __future__ import annotations

from functools import lru_cache

from gmpy2 import mpq

from .polynomial import Polynomial
from .scalar import exact, factorial, falling, gamma_ratio


def _check_alpha(alpha) -> mpq:
    a = exact(alpha)
    if a <= -1:
        raise ValueError(f"alpha must be > -1, got {a}")
    return a


@lru_cache(maxsize=4096)
def _monic(alpha: mpq, n: int) -> Polynomial:
    top = gamma_ratio(alpha, n)
    coeffs = []
    binom = 1
    for k in range(n + 1):
        # binom == C(n, k)
        c = mpq(binom) * top / gamma_ratio(alpha, k)
        coeffs.append(c if (n + k) % 2 == 0 else -c)
        binom = binom * (n - k) // (k + 1)
    return Polynomial._raw(coeffs)


def laguerre_monic(alpha, n: int) -> Polynomial:
    """Monic Laguerre polynomial ``L_n^alpha``.

    The coefficient of ``x**k`` is ``(-1)**(n+k) C(n, k) Gamma(n+alpha+1)/Gamma(k+alpha+1)``,
    which is the explicit binomial sum rewritten through gamma ratios.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return _monic(_check_alpha(alpha), n)


def laguerre_norm_sq(alpha, n: int) -> mpq:
    """Squared norm of ``L_n^alpha`` under the normalized measure."""
    return gamma_ratio(_check_alpha(alpha), n) * factorial(n)


def laguerre_deriv_at0(alpha, n: int, k: int) -> mpq:
    """``(L_n^alpha)^{(k)}(0)``."""
    a = _check_alpha(alpha)
    if k < 0 or k > n:
        raise ValueError(f"derivative order must satisfy 0 <= k <= n, got k={k}, n={n}")
    val = mpq(falling(n, k)) * gamma_ratio(a, n) / gamma_ratio(a, k)
    return val if (n + k) % 2 == 0 else -val


def moment(alpha, k: int) -> mpq:
    """``k``-th moment of the normalized Laguerre measure."""
    return gamma_ratio(alpha, k)


def integrate(alpha, p: Polynomial) -> mpq:
    """Integral of ``p`` against the normalized Laguerre measure."""
    a = _check_alpha(alpha)
    total = mpq(0)
    for k, c in enumerate(p.coeffs):
        if c:
            total += c * gamma_ratio(a, k)
    return total


def laguerre_inner(alpha, p: Polynomial, q: Polynomial) -> mpq:
    return integrate(alpha, p * q)


def taylor_truncate(f: Polynomial, s: int) -> Polynomial:
    """The ``s``-th Taylor polynomial of ``f`` at 0."""
    if s < 0:
        return Polynomial()
    return f.truncate(s)


# kernels ------------------------------------------------------------------


def kernel_x0_poly(alpha, m: int, s: int) -> Polynomial:
    """``K_m^{(0,s)}(x, 0) = sum_{i<=m} L_i^{(s)}(0) L_i(x) / ||L_i||^2`` by direct summation."""
    a = _check_alpha(alpha)
    out = Polynomial()
    for i in range(s, m + 1):
        out = out.axpy(laguerre_deriv_at0(a, i, s) / laguerre_norm_sq(a, i), laguerre_monic(a, i))
    return out


def kernel_x0_closed(alpha, m: int, s: int) -> Polynomial:
    """Christoffel-Darboux form of ``K_m^{(0,s)}(x, 0)``.

    ``s! / (||L_m||^2 x^{s+1}) [P_s(L_m) L_{m+1} - P_s(L_{m+1}) L_m]``, with the
    division by ``x^{s+1}`` carried out exactly.
    """
    a = _check_alpha(alpha)
    lm, lm1 = laguerre_monic(a, m), laguerre_monic(a, m + 1)
    bracket = taylor_truncate(lm, s) * lm1 - taylor_truncate(lm1, s) * lm
    try:
        reduced = bracket.shift_down(s + 1)
    except ArithmeticError as exc:
        raise ArithmeticError(
            f"Christoffel-Darboux bracket not divisible by x^{s + 1} (m={m}, s={s})"
        ) from exc
    return reduced * (mpq(factorial(s)) / laguerre_norm_sq(a, m))


def kernel_deriv00(alpha, m: int, k: int, s: int) -> mpq:
    """``K_m^{(k,s)}(0, 0)`` by direct summation."""
    a = _check_alpha(alpha)
    total = mpq(0)
    for i in range(max(k, s), m + 1):
        total += laguerre_deriv_at0(a, i, k) * laguerre_deriv_at0(a, i, s) / laguerre_norm_sq(a, i)
    return total


def kernel_deriv00_closed(alpha, m: int, k: int, s: int) -> mpq:
    """Closed form of ``K_m^{(k,s)}(0,0)`` with ``n = m + 1``.

    ``k! s!/||L_{n-1}||^2 sum_{j<=s} (k+s+1-2j)/(n-j) L_{n-1}^{(j)}(0) L_n^{(k+s+1-j)}(0) / (j!(k+s+1-j)!)``
    """
    a = _check_alpha(alpha)
    if m < max(k, s):
        # the kernel has degree m in each variable
        return mpq(0)
    n = m + 1
    total = mpq(0)
    for j in range(s + 1):
        t = k + s + 1 - j
        if t > n:
            continue
        total += (
            mpq(k + s + 1 - 2 * j, n - j)
            * laguerre_deriv_at0(a, n - 1, j)
            * laguerre_deriv_at0(a, n, t)
            / (factorial(j) * factorial(t))
        )
    return total * factorial(k) * factorial(s) / laguerre_norm_sq(a, n - 1)


def kernel_deriv00_taylor(alpha, m: int, k: int, s: int) -> mpq:
    """``K_m^{(k,s)}(0,0)`` as ``k!`` times the ``x**k`` coefficient of the Christoffel-Darboux form."""
    a = _check_alpha(alpha)
    n = m + 1
    total = mpq(0)
    for j in range(s + 1):
        t = k + s + 1 - j
        lo = laguerre_deriv_at0(a, n - 1, j) if j <= n - 1 else 0
        hi = laguerre_deriv_at0(a, n, t) if t <= n else 0
        lo2 = laguerre_deriv_at0(a, n, j) if j <= n else 0
        hi2 = laguerre_deriv_at0(a, n - 1, t) if t <= n - 1 else 0
        total += (lo * hi - lo2 * hi2) / (factorial(j) * factorial(t))
    return total * factorial(k) * factorial(s) / laguerre_norm_sq(a, n - 1)


def kernel_deriv00_s0_closed(alpha, m: int, k: int) -> mpq:
    """``K_m^{(k,0)}(0,0) = (-1)^k Gamma(alpha+n+1) / ((n-k-1)! Gamma(alpha+k+2))`` with ``n = m + 1``."""
    a = _check_alpha(alpha)
    n = m + 1
    if k > m:
        return mpq(0)
    val = gamma_ratio(a, n) / (factorial(n - k - 1) * gamma_ratio(a, k + 1))
    return val if k % 2 == 0 else -val
