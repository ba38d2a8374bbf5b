"""Dense univariate polynomials with exact rational coefficients."""
from __future__ import annotations

from gmpy2 import mpq

from .scalar import exact, factorial, is_exact, real, real_context

_ZERO = mpq(0)
_ONE = mpq(1)


class Polynomial:
    """Immutable polynomial; ``coeffs[k]`` is the coefficient of ``x**k``.

    Trailing zeros are stripped, so the zero polynomial has no coefficients
    and degree ``-1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if type(c) is type(_ZERO) else exact(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def _raw(cls, coeffs: list) -> "Polynomial":
        # trusted constructor: coeffs are already mpq
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", tuple(coeffs))
        return p

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        return cls._raw([_ZERO] * k + [exact(c)])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls.monomial(1)

    # basic properties ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> mpq:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> mpq:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _ZERO

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if is_exact(other):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"({c}){mono}" if mono else str(c))
        return " + ".join(terms).replace("+ -", "- ")

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([exact(other)])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([exact(other)])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Polynomial()
            out = [_ZERO] * (len(a) + len(b) - 1)
            for i, ca in enumerate(a):
                if ca == 0:
                    continue
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
            return Polynomial._raw(out)
        c = exact(other)
        return Polynomial._raw([c * v for v in self.coeffs])

    __rmul__ = __mul__

    def axpy(self, scale, other: "Polynomial") -> "Polynomial":
        """Return ``self + scale * other`` without an intermediate polynomial."""
        c = exact(scale)
        out = list(self.coeffs)
        if len(out) < len(other.coeffs):
            out.extend([_ZERO] * (len(other.coeffs) - len(out)))
        for i, v in enumerate(other.coeffs):
            out[i] += c * v
        return Polynomial._raw(out)

    # calculus and structure ---------------------------------------------

    def derivative(self, k: int = 1) -> "Polynomial":
        cs = self.coeffs
        return Polynomial._raw(
            [cs[i] * _falling_int(i, k) for i in range(k, len(cs))]
        )

    def deriv_at0(self, k: int) -> mpq:
        """``p^{(k)}(0) = k! * [x^k] p``."""
        return self.coeff(k) * factorial(k)

    def truncate(self, s: int) -> "Polynomial":
        """Terms of degree <= s (the s-th Taylor polynomial at 0)."""
        return Polynomial._raw(list(self.coeffs[: s + 1]))

    def shift_down(self, m: int) -> "Polynomial":
        """Exact division by ``x**m``; raises if the low-order coefficients are nonzero."""
        if any(c != 0 for c in self.coeffs[:m]):
            raise ArithmeticError(f"polynomial is not divisible by x^{m}")
        return Polynomial._raw(list(self.coeffs[m:]))

    def compose_square(self) -> "Polynomial":
        """``q(x**2)``."""
        out = []
        for c in self.coeffs:
            out.extend([c, _ZERO])
        return Polynomial._raw(out[:-1] if out else out)

    def times_x(self, m: int = 1) -> "Polynomial":
        return Polynomial._raw([_ZERO] * m + list(self.coeffs)) if self.coeffs else self

    def even_part_in_square(self) -> "Polynomial":
        """For an even polynomial ``p(x) = q(x**2)``, return ``q``."""
        if any(c != 0 for c in self.coeffs[1::2]):
            raise ArithmeticError("polynomial is not even")
        return Polynomial._raw(list(self.coeffs[0::2]))

    def reflect(self) -> "Polynomial":
        """``p(-x)``."""
        return Polynomial._raw([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)])

    # evaluation ---------------------------------------------------------

    def __call__(self, x):
        if is_exact(x):
            return self.eval_exact(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_exact(self, x) -> mpq:
        x = exact(x)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_real(self, x, precision: int, guard: int = 32):
        """Evaluate at a real or complex point with ``precision`` significant bits.

        Horner runs with ``guard`` extra bits; if the term magnitudes show that
        cancellation consumed more than the guard, the evaluation is repeated
        with a wider working precision.
        """
        if is_exact(x):
            return real(self.eval_exact(x), precision)
        while True:
            wp = precision + guard
            ctx = real_context(wp)
            xv = real(x, wp)
            ax = ctx.fabs(xv)
            acc = ctx.zero
            bound = ctx.zero
            for c in reversed(self.coeffs):
                cv = real(c, wp)
                acc = acc * xv + cv
                bound = bound * ax + ctx.fabs(cv)
            if bound == 0:
                return real(acc, precision)
            mag = ctx.fabs(acc)
            lost = int(ctx.log(bound, 2) - ctx.log(mag, 2)) if mag != 0 else wp
            if lost <= guard - 8 or guard > 8 * precision + 4096:
                return real(acc, precision)
            guard = max(lost + 16, 2 * guard)


def _falling_int(i: int, k: int) -> int:
    out = 1
    for t in range(k):
        out *= i - t
    return out


ONE = Polynomial([1])
ZERO = Polynomial()
X = Polynomial.x()
