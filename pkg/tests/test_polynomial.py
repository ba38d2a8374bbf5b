import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from lagsobolev.polynomial import ONE, X, Polynomial
from lagsobolev.scalar import real_context

coeff_lists = st.lists(st.fractions(max_denominator=20, min_value=-10, max_value=10), max_size=7)


def test_trailing_zeros_stripped_and_degree():
    p = Polynomial([1, 2, 0, 0])
    assert p.coeffs == (1, 2)
    assert p.degree == 1
    assert Polynomial().degree == -1


def test_arithmetic_and_evaluation():
    p = (X - 1) * (X - 2)
    assert p == Polynomial([2, -3, 1])
    assert p.eval_exact(mpq(3)) == 2
    assert p.is_monic()
    assert (p - p).is_zero()


@given(coeff_lists, coeff_lists)
def test_product_evaluates_pointwise(a, b):
    p, q = Polynomial(a), Polynomial(b)
    x = mpq(3, 7)
    assert (p * q).eval_exact(x) == p.eval_exact(x) * q.eval_exact(x)


@given(coeff_lists, st.integers(0, 4))
def test_deriv_at0_is_taylor_coefficient(a, k):
    p = Polynomial(a)
    d = p
    for _ in range(k):
        d = d.derivative()
    assert p.deriv_at0(k) == d.eval_exact(mpq(0))


def test_shift_down_requires_divisibility():
    p = Polynomial([0, 0, 3, 1])
    assert p.shift_down(2) == Polynomial([3, 1])
    with pytest.raises(ArithmeticError):
        p.shift_down(3)


def test_square_composition_and_parity():
    q = Polynomial([1, 2])
    assert q.compose_square() == Polynomial([1, 0, 2])
    assert q.compose_square().times_x().reflect() == -q.compose_square().times_x()


def test_eval_real_cancellation_heavy():
    # (x-1)^20 near 1: naive double Horner loses everything, the adaptive guard does not
    p = ONE
    for _ in range(20):
        p = p * (X - 1)
    ctx = real_context(64)
    x = ctx.mpf(1) + ctx.mpf(2) ** -10
    v = p.eval_real(x, 64)
    assert abs(v - ctx.mpf(2) ** -200) < ctx.mpf(2) ** -255


def test_eval_real_exact_zero_terminates():
    p = Polynomial([-1, 1])
    assert p.eval_real(real_context(64).mpf(1), 64) == 0
