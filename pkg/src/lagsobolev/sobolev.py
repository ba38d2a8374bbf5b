"""Sobolev-type orthogonal polynomials with point masses on derivatives at 0.

Four constructions are provided and are expected to agree exactly:

* :func:`build_gram` solves the monic orthogonality conditions from the Gram
  matrix of monomials.  It knows nothing about Laguerre structure and serves
  as the oracle.
* :func:`build_recursive` adds the masses ``M_0, M_1, ...`` one derivative
  order at a time, each step correcting with a Sobolev kernel of the previous
  level.
* :func:`build_holed` adds a single mass after a hole on top of the
  no-hole sequence.
* :func:`build_fourier` expands in the classical Laguerre basis and only
  needs classical kernels plus a small linear solve per degree.  It is the
  route used for large degrees and handles any mass support, including the
  generalized Hermite case through symmetrization.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from gmpy2 import mpq

from .laguerre import laguerre_monic, laguerre_norm_sq
from .polynomial import Polynomial
from .scalar import exact, factorial, gamma_ratio

LAGUERRE = "laguerre"
HERMITE = "hermite"

_HALF = mpq(1, 2)


@dataclass(frozen=True)
class SobolevSpec:
    """Measure parameter plus a diagonal discrete part at 0.

    ``parameter`` is ``alpha`` for the Laguerre kind and ``mu`` for the
    generalized Hermite kind.  ``masses`` maps derivative order to mass;
    zero masses are dropped on construction.
    """

    parameter: mpq
    masses: tuple = ()
    kind: str = LAGUERRE

    def __post_init__(self):
        param = exact(self.parameter)
        if self.kind == LAGUERRE:
            if param <= -1:
                raise ValueError(f"alpha must be > -1, got {param}")
        elif self.kind == HERMITE:
            if param <= -_HALF:
                raise ValueError(f"mu must be > -1/2, got {param}")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")
        items = self.masses.items() if isinstance(self.masses, Mapping) else self.masses
        clean = {}
        for order, value in items:
            order = int(order)
            value = exact(value)
            if order < 0:
                raise ValueError(f"derivative order must be >= 0, got {order}")
            if value < 0:
                raise ValueError(f"mass for order {order} must be >= 0, got {value}")
            if order in clean:
                raise ValueError(f"duplicate mass for order {order}")
            if value > 0:
                clean[order] = value
        object.__setattr__(self, "parameter", param)
        object.__setattr__(self, "masses", tuple(sorted(clean.items())))

    @classmethod
    def laguerre(cls, alpha, masses=None) -> "SobolevSpec":
        return cls(alpha, masses or {}, LAGUERRE)

    @classmethod
    def hermite(cls, mu, masses=None) -> "SobolevSpec":
        return cls(mu, masses or {}, HERMITE)

    @property
    def alpha(self) -> mpq:
        if self.kind != LAGUERRE:
            raise AttributeError("generalized Hermite specs have mu, not alpha")
        return self.parameter

    @property
    def mu(self) -> mpq:
        if self.kind != HERMITE:
            raise AttributeError("Laguerre specs have alpha, not mu")
        return self.parameter

    @property
    def support(self) -> tuple:
        return tuple(order for order, _ in self.masses)

    def mass(self, order: int) -> mpq:
        return dict(self.masses).get(order, mpq(0))

    def no_holes(self) -> int | None:
        """``r`` when the support is exactly ``{0..r}`` (``-1`` for no masses), else None."""
        sup = self.support
        if sup == tuple(range(len(sup))):
            return len(sup) - 1
        return None

    def holed(self) -> tuple | None:
        """``(r, s)`` for support ``{0..r} + {s}`` with ``s >= r + 2``; ``r = -1`` means ``{s}`` alone."""
        sup = self.support
        if not sup or self.no_holes() is not None:
            return None
        head, s = sup[:-1], sup[-1]
        if head != tuple(range(len(head))):
            return None
        return len(head) - 1, s

    def hermite_r(self) -> int | None:
        """``r`` when a Hermite spec has support exactly ``{0..2r+1}`` (``-1`` for no masses)."""
        sup = self.support
        if sup == tuple(range(len(sup))) and len(sup) % 2 == 0:
            return len(sup) // 2 - 1
        return None

    def quasi_order(self) -> int:
        """Highest derivative order carrying a mass (``-1`` when there is none).

        ``Q_n`` is orthogonal to polynomials of degree ``<= n - order - 2`` with
        respect to ``x^{order+1}`` times the base measure.
        """
        sup = self.support
        return sup[-1] if sup else -1

    def restricted(self, orders) -> "SobolevSpec":
        keep = set(orders)
        return SobolevSpec(self.parameter, {o: m for o, m in self.masses if o in keep}, self.kind)

    def describe(self) -> str:
        name = "alpha" if self.kind == LAGUERRE else "mu"
        masses = ",".join(f"{o}:{m}" for o, m in self.masses) or "none"
        return f"{self.kind}({name}={self.parameter}; masses={masses})"


# inner product ----------------------------------------------------------------


def continuous_moment(spec: SobolevSpec, k: int) -> mpq:
    if spec.kind == LAGUERRE:
        return gamma_ratio(spec.parameter, k)
    if k % 2:
        return mpq(0)
    return gamma_ratio(spec.parameter - _HALF, k // 2)


def sobolev_inner(spec: SobolevSpec, p: Polynomial, q: Polynomial) -> mpq:
    """Continuous part by exact moments plus ``sum M_i p^{(i)}(0) q^{(i)}(0)``."""
    prod = p * q
    total = mpq(0)
    for k, c in enumerate(prod.coeffs):
        if c:
            total += c * continuous_moment(spec, k)
    for order, mass in spec.masses:
        total += mass * p.deriv_at0(order) * q.deriv_at0(order)
    return total


# sequences --------------------------------------------------------------------


@dataclass(frozen=True)
class OrthoSequence:
    """Monic Sobolev-orthogonal ``P_0..P_n`` with their squared Sobolev norms."""

    spec: SobolevSpec
    polys: tuple
    norms: tuple
    _kernel_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, n):
        return self.polys[n]

    @property
    def n_max(self) -> int:
        return len(self.polys) - 1

    def kernel_deriv(self, m: int, k: int, s: int) -> mpq:
        return sobolev_kernel_deriv(self, m, k, s)

    def kernel_x0(self, m: int, s: int) -> Polynomial:
        return sobolev_kernel_x0(self, m, s)


def sobolev_kernel_deriv(seq: OrthoSequence, m: int, k: int, s: int) -> mpq:
    """``K_m^{(k,s)}(0,0) = sum_{j<=m} P_j^{(k)}(0) P_j^{(s)}(0) / (P_j, P_j)``."""
    if m >= len(seq):
        raise IndexError(f"kernel index {m} beyond sequence of length {len(seq)}")
    total = mpq(0)
    for j in range(max(k, s), m + 1):
        p = seq.polys[j]
        total += p.deriv_at0(k) * p.deriv_at0(s) / seq.norms[j]
    return total


def sobolev_kernel_x0(seq: OrthoSequence, m: int, s: int) -> Polynomial:
    """``K_m^{(0,s)}(x, 0)`` as a polynomial in ``x``."""
    if m >= len(seq):
        raise IndexError(f"kernel index {m} beyond sequence of length {len(seq)}")
    out = Polynomial()
    for j in range(s, m + 1):
        p = seq.polys[j]
        out = out.axpy(p.deriv_at0(s) / seq.norms[j], p)
    return out


# Gram oracle ------------------------------------------------------------------


def _solve(matrix: list, rhs: list) -> list:
    """Exact Gaussian elimination; raises on a singular system."""
    n = len(rhs)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular Gram system: the inner product is not positive definite")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col]
            if f:
                f *= inv
                row_r, row_c = a[r], a[col]
                for c in range(col, n + 1):
                    row_r[c] -= f * row_c[c]
    out = [mpq(0)] * n
    for r in range(n - 1, -1, -1):
        acc = a[r][n]
        for c in range(r + 1, n):
            acc -= a[r][c] * out[c]
        out[r] = acc / a[r][r]
    return out


def gram_matrix(spec: SobolevSpec, n: int) -> list:
    """``(x^i, x^j)`` for ``0 <= i, j <= n``."""
    g = [[continuous_moment(spec, i + j) for j in range(n + 1)] for i in range(n + 1)]
    for order, mass in spec.masses:
        if order <= n:
            g[order][order] += mass * factorial(order) ** 2
    return g


def build_gram(spec: SobolevSpec, n: int) -> OrthoSequence:
    """Monic orthogonal ``P_0..P_n`` from the leading ``j x j`` Gram systems."""
    g = gram_matrix(spec, n)
    polys, norms = [], []
    for j in range(n + 1):
        if j == 0:
            c = []
        else:
            c = _solve([row[:j] for row in g[:j]], [-g[m][j] for m in range(j)])
        poly = Polynomial._raw(c + [mpq(1)])
        norm = g[j][j] + sum((c[m] * g[m][j] for m in range(j)), mpq(0))
        if norm <= 0:
            raise ValueError(f"non-positive norm at degree {j}: {spec.describe()}")
        polys.append(poly)
        norms.append(norm)
    return OrthoSequence(spec, tuple(polys), tuple(norms))


# mass-by-mass construction ----------------------------------------------------


def classical_sequence(spec: SobolevSpec, n: int) -> OrthoSequence:
    base = spec.restricted(())
    if spec.kind != LAGUERRE:
        raise ValueError("classical_sequence is defined for the Laguerre kind")
    a = spec.parameter
    polys = tuple(laguerre_monic(a, j) for j in range(n + 1))
    norms = tuple(laguerre_norm_sq(a, j) for j in range(n + 1))
    return OrthoSequence(base, polys, norms)


def add_mass(seq: OrthoSequence, order: int, mass, spec: SobolevSpec) -> OrthoSequence:
    """Orthogonalize ``seq`` for the product plus ``mass * p^{(order)}(0) q^{(order)}(0)``.

    ``P_n - [M P_n^{(d)}(0) / (1 + M K_{n-1}^{(d,d)}(0,0))] K_{n-1}^{(0,d)}(x, 0)``
    with kernels summed over ``seq``; the norm gains ``M P_n^{(d)}(0)^2 / (1 + M K)``.
    """
    m = exact(mass)
    d = order
    fd = factorial(d)
    kernel = Polynomial()
    polys, norms = [], []
    for j, (p, nrm) in enumerate(zip(seq.polys, seq.norms)):
        pd = p.deriv_at0(d)
        k_dd = kernel.coeff(d) * fd
        denom = 1 + m * k_dd
        polys.append(p.axpy(-m * pd / denom, kernel) if pd else p)
        norms.append(nrm + m * pd * pd / denom)
        if pd:
            kernel = kernel.axpy(pd / nrm, p)
    return OrthoSequence(spec, tuple(polys), tuple(norms))


def build_recursive(spec: SobolevSpec, n: int) -> OrthoSequence:
    """Sequence for support ``{0..r}``: classical Laguerre, then masses ``M_0..M_r`` in turn."""
    r = spec.no_holes() if spec.kind == LAGUERRE else None
    if r is None:
        raise ValueError(f"build_recursive needs a Laguerre spec with support {{0..r}}: {spec.describe()}")
    seq = classical_sequence(spec, n)
    for t in range(r + 1):
        seq = add_mass(seq, t, spec.mass(t), spec.restricted(range(t + 1)))
    return seq


def build_holed(spec: SobolevSpec, n: int) -> OrthoSequence:
    """Sequence for support ``{0..r} + {s}`` (or ``{s}``): the hole mass on top of the no-hole sequence."""
    shape = spec.holed() if spec.kind == LAGUERRE else None
    if shape is None:
        raise ValueError(
            f"build_holed needs support {{0..r}} + {{s}} with s >= r + 2, or {{s}}: {spec.describe()}"
        )
    r, s = shape
    base = build_recursive(spec.restricted(range(r + 1)), n)
    return add_mass(base, s, spec.mass(s), spec)


def build_hermite(mu, masses, n: int) -> OrthoSequence:
    """Generalized Hermite-Sobolev ``S_0..S_n`` from the Gram oracle (measure normalized by ``Gamma(mu+1/2)``)."""
    spec = SobolevSpec.hermite(mu, masses)
    seq = build_gram(spec, n)
    for j, p in enumerate(seq.polys):
        if p.reflect() != (p if j % 2 == 0 else -p):
            raise ArithmeticError(f"S_{j} lost its parity")
    return seq


# Laguerre-basis route ---------------------------------------------------------


def iter_fourier(spec: SobolevSpec, n_max: int) -> Iterator[tuple]:
    """Yield ``(n, P_n, (P_n, P_n))`` for ``n = 0..n_max``.

    Laguerre kind: ``P_n = L_n - sum_i M_i P_n^{(i)}(0) K_{n-1}^{(0,i)}(x, 0)`` with
    classical kernels, where the values ``P_n^{(i)}(0)`` solve a linear system
    of size ``len(support)``.  Hermite kind: even and odd degrees come from two
    Laguerre-type families in ``x**2`` (see :func:`symmetrized_specs`).
    """
    if spec.kind == HERMITE:
        yield from _iter_hermite(spec, n_max)
        return
    a = spec.parameter
    support = spec.support
    masses = [spec.mass(i) for i in support]
    facts = [factorial(i) for i in support]
    kernels = [[] for _ in support]
    zero = mpq(0)
    for n in range(n_max + 1):
        lag = laguerre_monic(a, n)
        lnorm = laguerre_norm_sq(a, n)
        ell = [lag.deriv_at0(i) if i <= n else zero for i in support]
        if support:
            size = len(support)
            mat = [
                [
                    (1 if row == col else 0)
                    + masses[col] * (kernels[col][support[row]] * facts[row]
                                     if support[row] < len(kernels[col]) else zero)
                    for col in range(size)
                ]
                for row in range(size)
            ]
            vals = _solve(mat, ell)
            coeffs = list(lag.coeffs)
            norm = lnorm
            for col in range(size):
                w = masses[col] * vals[col]
                if w:
                    norm += w * ell[col]
                    for k, kc in enumerate(kernels[col]):
                        coeffs[k] -= w * kc
            poly = Polynomial._raw(coeffs)
        else:
            poly, norm = lag, lnorm
        yield n, poly, norm
        for col, i in enumerate(support):
            if i <= n:
                w = ell[col] / lnorm
                ker = kernels[col]
                ker.extend([zero] * (n + 1 - len(ker)))
                for k, lc in enumerate(lag.coeffs):
                    ker[k] += w * lc


def symmetrized_specs(spec: SobolevSpec) -> tuple:
    """Laguerre-type specs whose polynomials give ``S_{2m}(x) = q_m(x^2)`` and ``S_{2m+1}(x) = x q_m(x^2)``.

    Even side: ``alpha = mu - 1/2`` with masses ``M_{2i} ((2i)!/i!)^2``.
    Odd side: ``alpha = mu + 1/2`` with masses ``M_{2i+1} ((2i+1)!/i!)^2 / (mu + 1/2)``;
    the odd product equals ``(mu + 1/2)`` times this one.
    """
    if spec.kind != HERMITE:
        raise ValueError("symmetrization applies to generalized Hermite specs")
    mu = spec.parameter
    even, odd = {}, {}
    for order, mass in spec.masses:
        i = order // 2
        scale = mpq(factorial(order), factorial(i)) ** 2
        if order % 2 == 0:
            even[i] = mass * scale
        else:
            odd[i] = mass * scale / (mu + _HALF)
    return SobolevSpec.laguerre(mu - _HALF, even), SobolevSpec.laguerre(mu + _HALF, odd)


def _iter_hermite(spec: SobolevSpec, n_max: int) -> Iterator[tuple]:
    even_spec, odd_spec = symmetrized_specs(spec)
    scale = spec.parameter + _HALF
    evens = iter_fourier(even_spec, n_max // 2)
    odds = iter_fourier(odd_spec, (n_max - 1) // 2) if n_max >= 1 else iter(())
    for n in range(n_max + 1):
        if n % 2 == 0:
            _, q, nrm = next(evens)
            yield n, q.compose_square(), nrm
        else:
            _, q, nrm = next(odds)
            yield n, q.compose_square().times_x(), scale * nrm


def build_fourier(spec: SobolevSpec, n: int) -> OrthoSequence:
    polys, norms = [], []
    for _, p, nrm in iter_fourier(spec, n):
        polys.append(p)
        norms.append(nrm)
    return OrthoSequence(spec, tuple(polys), tuple(norms))


def build_sequence(spec: SobolevSpec, n: int) -> OrthoSequence:
    """Default builder for any spec and degree."""
    return build_fourier(spec, n)


# quasi-orthogonality ----------------------------------------------------------


def shifted_moment(spec: SobolevSpec, poly: Polynomial, m: int, order: int | None = None) -> mpq:
    """``int x^m P(x) x^{alpha+order+1} e^{-x} dx / Gamma(alpha+1)`` for a Laguerre spec."""
    if spec.kind != LAGUERRE:
        raise ValueError("shifted moments are defined for the Laguerre kind")
    order = spec.quasi_order() if order is None else order
    a = spec.parameter
    total = mpq(0)
    for k, c in enumerate(poly.coeffs):
        if c:
            total += c * gamma_ratio(a, order + 1 + m + k)
    return total
