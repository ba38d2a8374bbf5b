import pytest
from gmpy2 import mpq

from lagsobolev.laguerre import (
    integrate,
    kernel_deriv00,
    kernel_deriv00_closed,
    kernel_deriv00_s0_closed,
    kernel_deriv00_taylor,
    kernel_x0_closed,
    kernel_x0_poly,
    laguerre_deriv_at0,
    laguerre_inner,
    laguerre_monic,
    laguerre_norm_sq,
)
from lagsobolev.polynomial import Polynomial

ALPHAS = [mpq(0), mpq(1, 2), mpq(1), mpq(-1, 2)]


def test_low_degree_monic_laguerre():
    assert laguerre_monic(0, 1) == Polynomial([-1, 1])
    assert laguerre_monic(0, 2) == Polynomial([2, -4, 1])
    assert laguerre_monic(1, 2) == Polynomial([6, -6, 1])


@pytest.mark.parametrize("alpha", ALPHAS)
def test_orthogonality_and_norms(alpha):
    for m in range(8):
        for n in range(m + 1):
            val = laguerre_inner(alpha, laguerre_monic(alpha, m), laguerre_monic(alpha, n))
            assert val == (laguerre_norm_sq(alpha, n) if m == n else 0)


def test_moments_normalized():
    assert integrate(mpq(1, 2), Polynomial([1])) == 1
    assert integrate(0, Polynomial([0, 0, 1])) == 2


def test_derivative_at_zero():
    lag = laguerre_monic(mpq(1, 2), 6)
    for k in range(7):
        assert laguerre_deriv_at0(mpq(1, 2), 6, k) == lag.deriv_at0(k)
    with pytest.raises(ValueError):
        laguerre_deriv_at0(0, 3, 4)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_kernel_closed_forms_small(alpha):
    for m in range(12):
        for s in range(4):
            assert kernel_x0_closed(alpha, m, s) == kernel_x0_poly(alpha, m, s)
            for k in range(4):
                direct = kernel_deriv00(alpha, m, k, s)
                assert kernel_deriv00_closed(alpha, m, k, s) == direct
                assert kernel_deriv00_taylor(alpha, m, k, s) == direct
            assert kernel_deriv00_s0_closed(alpha, m, s) == kernel_deriv00(alpha, m, s, 0)


def test_closed_form_guard_below_support():
    # the kernel vanishes identically when m < s
    assert kernel_deriv00(0, 1, 0, 2) == 0
    assert kernel_deriv00_closed(0, 1, 0, 2) == 0


def test_alpha_domain():
    with pytest.raises(ValueError):
        laguerre_monic(-1, 2)
