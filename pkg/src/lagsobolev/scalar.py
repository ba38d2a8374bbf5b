"""Two-tier number system: exact rationals and arbitrary-precision reals.

Exact values are ``gmpy2.mpq``.  Real values live in a private mpmath context
per precision, so evaluating at one precision never disturbs another caller's
working precision (mpmath's global ``mp`` is left untouched).
"""
from __future__ import annotations

import math
import os
import threading
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath
from gmpy2 import mpq
from mpmath.libmp import from_rational

DEFAULT_PRECISION = 128
PRECISION_ENV = "LAGSOBOLEV_PRECISION"

ExactScalar = mpq


def default_precision() -> int:
    """Default evaluation precision in bits, overridable through the environment."""
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return DEFAULT_PRECISION
    value = int(raw)
    if value < 16:
        raise ValueError(f"{PRECISION_ENV} must be >= 16, got {value}")
    return value


def exact(value) -> mpq:
    """Coerce ints, fractions, ``"p/q"`` strings and mpq to an exact rational.

    Floats are rejected: a binary float almost never denotes the rational the
    caller had in mind.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Rational)) or type(value) is type(mpq(0)):
        if isinstance(value, Fraction):
            return mpq(value.numerator, value.denominator)
        return mpq(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        if "/" in text:
            num, den = text.split("/", 1)
            return mpq(int(num), int(den))
        if any(ch in text for ch in ".eE"):
            return mpq(Fraction(text))
        return mpq(int(text))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def is_exact(value) -> bool:
    return isinstance(value, (int, Rational)) or type(value) is type(mpq(0))


_contexts: dict[int, mpmath.ctx_mp.MPContext] = {}
_contexts_lock = threading.Lock()


def real_context(precision: int) -> mpmath.ctx_mp.MPContext:
    """Return the (shared, fixed-precision) mpmath context for ``precision`` bits."""
    if precision < 16:
        raise ValueError(f"precision must be >= 16 bits, got {precision}")
    ctx = _contexts.get(precision)
    if ctx is None:
        with _contexts_lock:
            ctx = _contexts.get(precision)
            if ctx is None:
                ctx = mpmath.MPContext()
                ctx.prec = precision
                _contexts[precision] = ctx
    return ctx


def to_real(x, precision: int | None = None):
    """Correctly rounded conversion of an exact rational to a ``precision``-bit real."""
    precision = default_precision() if precision is None else precision
    ctx = real_context(precision)
    q = exact(x)
    return ctx.make_mpf(from_rational(int(q.numerator), int(q.denominator), precision, "n"))


def real(x, precision: int):
    """Convert any supported number (exact, mpmath real/complex, float) into ``precision`` bits."""
    ctx = real_context(precision)
    if is_exact(x):
        return to_real(x, precision)
    if isinstance(x, (complex, mpmath.mpc)) or getattr(x, "_mpc_", None) is not None:
        return ctx.mpc(x)
    return ctx.mpf(x)


# gamma ratios -----------------------------------------------------------

_ratio_tables: dict[mpq, list[mpq]] = {}
_ratio_lock = threading.Lock()


def gamma_ratio(alpha, k: int) -> mpq:
    """Exact ``Gamma(alpha + k + 1) / Gamma(alpha + 1)``, the rising product ``prod_{j=1..k} (alpha + j)``."""
    a = exact(alpha)
    if a <= -1:
        raise ValueError(f"gamma_ratio needs alpha > -1, got {a}")
    if k < 0:
        raise ValueError(f"gamma_ratio needs k >= 0, got {k}")
    table = _ratio_tables.get(a)
    if table is None or len(table) <= k:
        with _ratio_lock:
            table = _ratio_tables.setdefault(a, [mpq(1)])
            while len(table) <= k:
                table.append(table[-1] * (a + len(table)))
    return table[k]


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    return math.factorial(n)


def falling(n: int, k: int) -> int:
    """``n! / (n - k)!`` (zero when ``k > n``)."""
    if k > n:
        return 0
    return math.perm(n, k)


def gamma_real(a, precision: int):
    """``Gamma(a)`` at ``precision`` bits for a rational ``a``."""
    ctx = real_context(precision)
    return ctx.gamma(to_real(a, precision + 16))


def rgamma_real(a, precision: int):
    """``1 / Gamma(a)``; zero at the non-positive integers."""
    ctx = real_context(precision)
    return ctx.rgamma(to_real(a, precision + 16))
