import pytest
from gmpy2 import mpq

from lagsobolev.asymptotics import holed_derivative_limit
from lagsobolev.connection import (
    a_quantities,
    a_quantity_table,
    connection_coefficients,
    connection_ratio_table,
    derivative_limit,
    derivative_ratio_table,
    expand_shifted,
    lemma4_monitor,
    norm_ratio_table,
    ratio_recursion_residual,
)
from lagsobolev.laguerre import laguerre_monic
from lagsobolev.polynomial import Polynomial
from lagsobolev.sobolev import SobolevSpec, build_sequence

SPECS = [
    SobolevSpec.laguerre(0, {0: 1}),
    SobolevSpec.laguerre("1/2", {0: 1, 1: 1}),
    SobolevSpec.laguerre("-1/2", {0: "1/10", 2: "1/10"}),
]


def test_first_expansion():
    seq = build_sequence(SobolevSpec.laguerre(0, {0: 1}), 2)
    # x - 1/2 = L_1^(1) + 3/2
    assert expand_shifted(seq, 1).coeffs == (1, mpq(3, 2))
    assert expand_shifted(seq, 2).coeffs == (1, mpq(8, 3))


def test_connection_coefficients_roundtrip():
    p = Polynomial([3, "-1/2", 7, 1])
    cs = connection_coefficients(p, mpq(5, 2))
    total = Polynomial()
    for m, c in enumerate(cs):
        total = total.axpy(c, laguerre_monic(mpq(5, 2), m))
    assert total == p


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.describe())
def test_expansion_reconstructs(spec):
    seq = build_sequence(spec, 15)
    for n in range(1, 16):
        exp = expand_shifted(seq, n)
        assert exp.reconstruct() == seq[n]
        assert exp.coeffs[0] == 1


def test_expansion_rejects_non_quasi_orthogonal():
    seq = build_sequence(SobolevSpec.laguerre(0, {0: 1}), 6)
    broken = type(seq)(seq.spec, seq.polys[:6] + (laguerre_monic(0, 6) + Polynomial([1]),), seq.norms)
    with pytest.raises(ArithmeticError):
        expand_shifted(broken, 6)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.describe())
def test_ratio_recursion_is_exact(spec):
    seq = build_sequence(spec, 14)
    for n in range(1, 15):
        for k in range(n):
            assert ratio_recursion_residual(seq, n, k) == 0


def test_ratio_recursion_domain():
    seq = build_sequence(SobolevSpec.laguerre(0, {0: 1}), 3)
    with pytest.raises(ValueError):
        ratio_recursion_residual(seq, 3, 3)


def test_a_quantities_top_index():
    # A^{R+1} L-normalized tends to (r+1)!; A^0 equals P_n(0)
    spec = SobolevSpec.laguerre(0, {0: 1, 1: 1})
    seq = build_sequence(spec, 10)
    assert a_quantities(expand_shifted(seq, 10))[0] == seq[10].coeff(0)
    rows = a_quantity_table(spec, 2, [20, 40, 80])
    errs = [float(r.abs_error) for r in rows]
    assert errs[2] < errs[1] < errs[0] < 0.5


def test_limit_constants():
    assert derivative_limit(0, 0, 1) == mpq(1, 2)
    assert derivative_limit(0, 1, 2) == mpq(2, 12)
    assert holed_derivative_limit(0, 0, 2, 1) == mpq(-1, 8)
    assert holed_derivative_limit(0, -1, 2, 0) == mpq(-2, 3)
    assert holed_derivative_limit(0, 0, 2, 2) == 0


def test_derivative_and_connection_tables_converge():
    spec = SobolevSpec.laguerre(0, {0: 1})
    seq = build_sequence(spec, 80)
    rows = derivative_ratio_table(spec, 1, [20, 40, 80], seq=seq)
    errs = [float(r.abs_error) for r in rows]
    assert errs[0] > errs[1] > errs[2]
    assert abs(float(rows[-1].target) - 0.5) < 1e-30
    conn = connection_ratio_table(spec, 1, [20, 40, 80], seq=seq)
    assert float(conn[-1].abs_error) < float(conn[0].abs_error)
    norms = norm_ratio_table(spec, [20, 40, 80], seq=seq)
    assert float(norms[-1].abs_error) < float(norms[0].abs_error)


def test_uniform_bound_small_range():
    worst, bound, violations = lemma4_monitor(SobolevSpec.laguerre(0, {0: 1, 1: 1}), 5, 30)
    assert bound == 4 and worst <= bound and not violations
    with pytest.raises(ValueError):
        lemma4_monitor(SobolevSpec.laguerre(0, {0: 1, 2: 1}))
