"""Scaled Bessel function, Mehler-Heine limits and relative asymptotics.

Every Bessel-type limit is written through the entire function

    phi_a(x) = x^{-a/2} J_a(2 sqrt(x)) = sum_k (-x)^k / (k! Gamma(k + a + 1)),

so no square roots or branch cuts enter the limit formulas.
"""
from __future__ import annotations

import math

from gmpy2 import mpq

from .connection import derivative_ratio, derivative_ratio_table, scaled_derivative_ratio, _sequence_for
from .laguerre import laguerre_monic, laguerre_norm_sq
from .scalar import (
    default_precision,
    exact,
    factorial,
    falling,
    gamma_ratio,
    is_exact,
    real,
    real_context,
    rgamma_real,
    to_real,
)
from .sobolev import HERMITE, OrthoSequence, SobolevSpec
from .tables import ConvergenceRow

_HALF = mpq(1, 2)


def _magnitude(x) -> float:
    if is_exact(x):
        return abs(float(x))
    return float(abs(x))


def _bessel_series(x, base, precision: int, weight=None):
    """``sum_m (-x)^m / (m! Gamma(base + 1 + m)) * weight(m)`` at ``precision`` bits.

    Terms are generated by their ratio; the sum stops once three consecutive
    terms fall below ``2^-(precision+8)`` times ``max(1, |sum|)``.  Working
    precision is raised by the bits that the alternating terms can cancel.
    """
    b = exact(base)
    if b <= -1:
        raise ValueError(f"order must be > -1, got {b}")
    mag = _magnitude(x)
    guard = 24 + int(2.0 * math.sqrt(mag) / math.log(2))
    wp = precision + guard
    ctx = real_context(wp)
    xv = real(x, wp)
    bv = to_real(b, wp)
    term = ctx.one
    total = term * (weight(0) if weight else 1)
    eps = ctx.ldexp(ctx.one, -(precision + 8))
    cap = 10 * (int(mag) + precision) + 20
    quiet = 0
    m = 0
    while m < cap:
        m += 1
        term = term * (-xv) / (m * (bv + m))
        contrib = term * weight(m) if weight else term
        total += contrib
        if abs(contrib) < eps * max(1, abs(total)) and m > mag:
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
    return real(total * rgamma_real(b + 1, wp), precision)


def phi(order, x, precision: int | None = None):
    """``phi_order(x) = x^{-order/2} J_order(2 sqrt(x))``, entire in ``x``; ``phi(a, 0) = 1/Gamma(a+1)``."""
    precision = precision or default_precision()
    return _bessel_series(x, order, precision)


def bessel_j(order, z, precision: int | None = None):
    """``J_order(z) = (z/2)^order phi_order(z^2/4)`` for real ``z > 0`` (test helper)."""
    precision = precision or default_precision()
    ctx = real_context(precision + 16)
    zv = real(z, precision + 16)
    half = zv / 2
    val = ctx.power(half, to_real(order, precision + 16)) * phi(order, half * half, precision + 16)
    return real(val, precision)


# Mehler-Heine ----------------------------------------------------------------


def mh_limit(alpha, r: int, hole_s: int | None, x, precision: int | None = None):
    """Limit of ``(-1)^n / (n! n^alpha) P_n(x/(n+j))``.

    No hole: ``(-1)^{r+1} x^{r+1} phi_{alpha+2r+2}(x)``.  With a hole at ``s``
    the series
    ``sum_{k>=r+1} (-1)^k (alpha+2s+1) / ((alpha+k+s+1) Gamma(alpha+k+r+2)) x^k/(k-(r+1))!``
    is subtracted.  ``r = -1`` gives the classical limit ``phi_alpha``.
    """
    precision = precision or default_precision()
    a = exact(alpha)
    if a <= -1:
        raise ValueError(f"alpha must be > -1, got {a}")
    wp = precision + 16
    ctx = real_context(wp)
    xv = real(x, wp)
    sign = -1 if (r + 1) % 2 else 1
    lead = sign * xv ** (r + 1)
    base = a + 2 * r + 2
    value = lead * phi(base, x, wp)
    if hole_s is not None:
        s = hole_s
        if s < r + 2:
            raise ValueError(f"hole position s={s} must be >= r + 2 = {r + 2}")
        shift = a + r + s + 2
        series = _bessel_series(x, base, wp, weight=lambda m: 1 / (shift + m))
        value -= lead * to_real(a + 2 * s + 1, wp) * series
    return real(value, precision)


def mh_limit_length_one(alpha, r: int, x, precision: int | None = None):
    """Closed form of the limit for a hole of length one (``s = r + 2``).

    ``(-1)^{r+1} x^{-alpha/2} [-J_{a+2r+2}/(a+2r+4) - J_{a+2r+4} - J_{a+2r+6}/(a+2r+4)](2 sqrt x)``.
    """
    precision = precision or default_precision()
    a = exact(alpha)
    wp = precision + 16
    xv = real(x, wp)
    c = to_real(a + 2 * r + 4, wp)
    sign = -1 if (r + 1) % 2 else 1
    inner = (
        -xv ** (r + 1) * phi(a + 2 * r + 2, x, wp) / c
        - xv ** (r + 2) * phi(a + 2 * r + 4, x, wp)
        - xv ** (r + 3) * phi(a + 2 * r + 6, x, wp) / c
    )
    return real(sign * inner, precision)


def mh_limit_length_one_exact(alpha, r: int, x, precision: int | None = None):
    """Closed form that the hole series actually sums to when ``s = r + 2``.

    ``(-1)^{r+1} x^{r+1} [phi_{a+2r+2} - (a+2r+5)(phi_{a+2r+3} - phi_{a+2r+4})]``,
    from ``1/((c+m) Gamma(c+m)) = 1/Gamma(c+m+1) - 1/Gamma(c+m+2)`` with ``c = a+2r+3``.
    It differs from :func:`mh_limit_length_one` beyond the leading order in ``x``.
    """
    precision = precision or default_precision()
    a = exact(alpha)
    wp = precision + 16
    xv = real(x, wp)
    sign = -1 if (r + 1) % 2 else 1
    inner = phi(a + 2 * r + 2, x, wp) - to_real(a + 2 * r + 5, wp) * (
        phi(a + 2 * r + 3, x, wp) - phi(a + 2 * r + 4, x, wp)
    )
    return real(sign * xv ** (r + 1) * inner, precision)


def limit_shape(spec: SobolevSpec) -> tuple:
    """``(r, hole_s)`` describing which Mehler-Heine limit applies to a Laguerre spec."""
    r = spec.no_holes()
    if r is not None:
        return r, None
    shape = spec.holed()
    if shape is None:
        raise ValueError(f"no Mehler-Heine limit is available for support {spec.support}")
    return shape


def mh_limit_for(spec: SobolevSpec, x, precision: int | None = None):
    r, s = limit_shape(spec)
    return mh_limit(spec.alpha, r, s, x, precision)


def mh_scaled(seq: OrthoSequence, n: int, j: int, x, precision: int | None = None):
    """``(-1)^n / (n! n^alpha) P_n(x / (n + j))``; exact evaluation when ``x`` is rational."""
    precision = precision or default_precision()
    alpha = seq.spec.alpha
    wp = precision + 32
    ctx = real_context(wp)
    poly = seq[n]
    if is_exact(x):
        val = to_real(poly.eval_exact(exact(x) / (n + j)) / factorial(n), wp)
    else:
        y = real(x, wp) / (n + j)
        val = poly.eval_real(y, wp) / factorial(n)
    val = val / ctx.power(ctx.mpf(n), to_real(alpha, wp))
    return real(val if n % 2 == 0 else -val, precision)


def mh_table(seq: OrthoSequence, n_list, x, j: int = 0, precision: int | None = None, k: int | None = None) -> list:
    precision = precision or default_precision()
    target = mh_limit_for(seq.spec, x, precision)
    return [ConvergenceRow.make(n, mh_scaled(seq, n, j, x, precision), target, k, f"MH x={x} j={j}") for n in n_list]


# relative asymptotics ----------------------------------------------------------


def _off_support(x) -> bool:
    if is_exact(x):
        return x < 0
    z = complex(x)
    return z.imag != 0 or z.real < 0


def relative_ratio(seq: OrthoSequence, n: int, x, precision: int | None = None):
    """``P_n(x) / L_n^alpha(x)`` for ``x`` off ``[0, inf)``."""
    precision = precision or default_precision()
    if not _off_support(x):
        raise ValueError(f"x={x} lies on [0, inf); the ratio is only studied off the support")
    lag = laguerre_monic(seq.spec.alpha, n)
    if is_exact(x):
        return to_real(seq[n].eval_exact(x) / lag.eval_exact(x), precision)
    wp = precision + 16
    return real(seq[n].eval_real(x, wp) / lag.eval_real(x, wp), precision)


def relative_table(seq: OrthoSequence, n_list, x, precision: int | None = None, k: int | None = None) -> list:
    precision = precision or default_precision()
    one = to_real(1, precision)
    return [ConvergenceRow.make(n, relative_ratio(seq, n, x, precision), one, k, f"ratio x={x}") for n in n_list]


def classical_limit_checks(alpha, n_list, x, precision: int | None = None) -> list:
    """Classical Laguerre limits; ``k`` indexes the law.

    ``k=0``: ``n L_{n-1}(x) / L_n(x) -> -1``;
    ``k=1``: ``sqrt(n) L_n^alpha(x) / L_n^{alpha+1}(x) -> sqrt(-x)``;
    ``k=2``: ``L_n(0)^2 / (||L_n||^2 n^alpha) -> 1/Gamma(alpha+1)``.
    """
    precision = precision or default_precision()
    a = exact(alpha)
    if not _off_support(x):
        raise ValueError(f"x={x} lies on [0, inf)")
    wp = precision + 16
    ctx = real_context(wp)
    xv = real(x, wp)
    rows = []
    for n in n_list:
        ln, lm = laguerre_monic(a, n), laguerre_monic(a, n - 1)
        ln1 = laguerre_monic(a + 1, n)
        if is_exact(x):
            r0 = to_real(n * lm.eval_exact(x) / ln.eval_exact(x), wp)
            r1 = ctx.sqrt(n) * to_real(ln.eval_exact(x) / ln1.eval_exact(x), wp)
        else:
            r0 = n * lm.eval_real(x, wp) / ln.eval_real(x, wp)
            r1 = ctx.sqrt(n) * ln.eval_real(x, wp) / ln1.eval_real(x, wp)
        rows.append(ConvergenceRow.make(n, real(r0, precision), real(-1, precision), 0, "n L_{n-1}/L_n"))
        rows.append(ConvergenceRow.make(n, real(r1, precision), real(ctx.sqrt(-xv), precision), 1, "sqrt(n) L_n^a/L_n^{a+1}"))
        l0 = ln.coeffs[0]
        est = to_real(l0 * l0 / laguerre_norm_sq(a, n), wp) / ctx.power(n, to_real(a, wp))
        rows.append(ConvergenceRow.make(n, real(est, precision), rgamma_real(a + 1, precision), 2, "L_n(0)^2/(||L_n||^2 n^a)"))
    return rows


# generalized Hermite ----------------------------------------------------------


def hermite_mh_limit(mu, r: int, x, parity: str = "even", precision: int | None = None):
    """``(-1)^{r+1} (x/2)^{-mu+1/2} J_{mu+2r+3/2}(x)`` (even) or ``J_{mu+2r+5/2}`` (odd), through phi.

    With ``X = x^2/4`` these are ``(-1)^{r+1} X^{r+1} phi_{mu+2r+3/2}(X)`` and
    ``(x/2) (-1)^{r+1} X^{r+1} phi_{mu+2r+5/2}(X)``.
    """
    precision = precision or default_precision()
    m = exact(mu)
    wp = precision + 16
    if is_exact(x):
        big_x = exact(x) ** 2 / 4
        half = to_real(exact(x) / 2, wp)
    else:
        xv = real(x, wp)
        big_x = xv * xv / 4
        half = xv / 2
    sign = -1 if (r + 1) % 2 else 1
    xr = real(big_x, wp)
    if parity == "even":
        val = sign * xr ** (r + 1) * phi(m + 2 * r + mpq(3, 2), big_x, wp)
    elif parity == "odd":
        val = half * sign * xr ** (r + 1) * phi(m + 2 * r + mpq(5, 2), big_x, wp)
    else:
        raise ValueError("parity must be 'even' or 'odd'")
    return real(val, precision)


def hermite_mh_scaled(seq: OrthoSequence, n: int, j: int, x, precision: int | None = None, parity: str = "even"):
    """``(-1)^n sqrt(n) / (n! n^mu) S_{2n}(x / (2 sqrt(n+j)))`` or ``(-1)^n / (n! n^mu) S_{2n+1}(...)``."""
    precision = precision or default_precision()
    if seq.spec.kind != HERMITE:
        raise ValueError("hermite_mh_scaled needs a generalized Hermite sequence")
    mu = seq.spec.mu
    deg = 2 * n if parity == "even" else 2 * n + 1
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    poly = seq[deg]
    wp = precision + 32
    ctx = real_context(wp)
    inner = poly.coeffs[deg % 2 :: 2]
    if is_exact(x):
        y2 = exact(x) ** 2 / (4 * (n + j))
        acc = mpq(0)
        for c in reversed(inner):
            acc = acc * y2 + c
        val = to_real(acc / factorial(n), wp)
    else:
        yv = real(x, wp) / (2 * ctx.sqrt(n + j))
        y2 = yv * yv
        acc = ctx.zero
        for c in reversed(inner):
            acc = acc * y2 + to_real(c, wp)
        val = acc / factorial(n)
    if parity == "odd":
        val = val * real(x, wp) / (2 * ctx.sqrt(n + j))
    else:
        val = val * ctx.sqrt(n)
    val = val / ctx.power(ctx.mpf(n), to_real(mu, wp))
    return real(val if n % 2 == 0 else -val, precision)


def hermite_mh_table(seq: OrthoSequence, n_list, x, j: int = 0, parity: str = "even", precision=None, k=None) -> list:
    precision = precision or default_precision()
    r = seq.spec.hermite_r()
    if r is None:
        raise ValueError("Hermite Mehler-Heine limits need support {0..2r+1}")
    target = hermite_mh_limit(seq.spec.mu, r, x, parity, precision)
    return [
        ConvergenceRow.make(n, hermite_mh_scaled(seq, n, j, x, precision, parity), target, k, f"MH-{parity} x={x}")
        for n in n_list
    ]


def hermite_relative_ratio(seq: OrthoSequence, n: int, x, precision: int | None = None):
    """``S_n(x) / H_n^mu(x)`` for non-real ``x``; the classical family is the massless Hermite sequence."""
    from .sobolev import build_sequence

    precision = precision or default_precision()
    if complex(x).imag == 0:
        raise ValueError("x must be non-real")
    classical = build_sequence(SobolevSpec.hermite(seq.spec.mu), n)
    wp = precision + 16
    return real(seq[n].eval_real(x, wp) / classical[n].eval_real(x, wp), precision)


# holes -------------------------------------------------------------------------


def holed_derivative_limit(alpha, r: int, s: int, k: int) -> mpq:
    """``k!/(k-(r+1))! (k-s)/(alpha+s+k+1) Gamma(alpha+k+1)/Gamma(alpha+r+k+2)`` for ``k >= r+1``, ``k != s``."""
    a = exact(alpha)
    return mpq(falling(k, r + 1)) * mpq(k - s) / (a + s + k + 1) / gamma_ratio(a + k, r + 1)


def holed_derivative_ratio_table(spec: SobolevSpec, k: int, n_list, seq=None, precision=None) -> list:
    """Derivative ratios for a holed spec: explicit limit for ``k >= r+1, k != s``, else scaled stabilization."""
    precision = precision or default_precision()
    shape = spec.holed()
    if shape is None:
        raise ValueError(f"spec has no hole: {spec.describe()}")
    r, s = shape
    seq = _sequence_for(spec, n_list, seq)
    a = spec.alpha
    if k >= r + 1 and k != s:
        target = to_real(holed_derivative_limit(a, r, s, k), precision)
        return [
            ConvergenceRow.make(n, to_real(derivative_ratio(a, seq[n], n, k), precision), target, k, "ratio")
            for n in n_list
        ]
    scaled = [scaled_derivative_ratio(a, seq[n], n, k, precision) for n in n_list]
    return [ConvergenceRow.make(n, v, scaled[-1], k, "scaled ratio") for n, v in zip(n_list, scaled)]


def derivative_table(spec: SobolevSpec, k: int, n_list, seq=None, precision=None) -> list:
    """Dispatch to the no-hole or holed derivative-ratio table."""
    if spec.no_holes() is not None:
        return derivative_ratio_table(spec, k, n_list, seq, precision)
    return holed_derivative_ratio_table(spec, k, n_list, seq, precision)
