import mpmath
import pytest
from gmpy2 import mpq

from lagsobolev.asymptotics import mh_limit
from lagsobolev.polynomial import Polynomial, X
from lagsobolev.scalar import real_context
from lagsobolev.sobolev import SobolevSpec, build_sequence
from lagsobolev.zeros import (
    function_zero,
    interlaces,
    limit_function_zero,
    phi_zero,
    real_roots,
    scaled_zeros,
    sign_change_count,
    zero_scaling_table,
)

P = 128
CTX = real_context(P)


def test_simple_integer_roots():
    rl = real_roots((X - 1) * (X - 2), P)
    assert rl.roots == (1, 2)
    assert rl.nonreal_count == 0


def test_irrational_roots_are_bracketed():
    rl = real_roots(X * X - 4 * X + 2, P)
    s = CTX.sqrt(2)
    assert abs(rl.roots[0] - (2 - s)) < CTX.ldexp(1, -120)
    assert abs(rl.roots[1] - (2 + s)) < CTX.ldexp(1, -120)
    for (lo, hi), r in zip(rl.intervals, (2 - s, 2 + s)):
        assert lo < hi
        assert (lo - 2) ** 2 < 2 if r > 2 else (2 - hi) ** 2 < 2


def test_rational_root_located_exactly():
    rl = real_roots(Polynomial([-1, 2]), P)
    assert rl.intervals == ((mpq(1, 2), mpq(1, 2)),)


def test_multiplicities_and_complex_roots():
    p = (X - 1) * (X - 1) * (X + 3) * (X * X + 1)
    rl = real_roots(p, P)
    assert rl.multiplicities == (1, 2)
    assert rl.nonreal_count == 2
    assert rl.sign_changes_positive == 0
    assert rl.count_positive == 1


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        real_roots(Polynomial(), P)


def test_laguerre_zeros_match_mpmath():
    from lagsobolev.laguerre import laguerre_monic

    rl = real_roots(laguerre_monic(0, 12), 64)
    with mpmath.workprec(100):
        ref = sorted(mpmath.polyroots([float(c) for c in reversed(laguerre_monic(0, 12).coeffs)], maxsteps=200, extraprec=200))
    assert all(abs(float(a) - float(b)) < 1e-10 * float(b) for a, b in zip(rl.roots, ref))


@pytest.mark.parametrize("order, k", [(0, 1), (0, 3), (mpq(1, 2), 2), (2, 1), (mpq(7, 2), 4)])
def test_phi_zeros_against_bessel_zeros(order, k):
    z = phi_zero(order, k, P)
    q = mpq(order)
    with mpmath.workprec(256):
        j = mpmath.besseljzero(mpmath.mpf(int(q.numerator)) / int(q.denominator), k)
        ref = j * j / 4
        assert abs(mpmath.mpf(z._mpf_) - ref) < mpmath.mpf(2) ** -110 * ref


def test_half_integer_phi_zeros():
    assert abs(phi_zero(mpq(1, 2), 1, P) - CTX.pi ** 2 / 4) < CTX.ldexp(1, -115)
    assert abs(phi_zero(mpq(1, 2), 2, P) - CTX.pi ** 2) < CTX.ldexp(1, -112)
    assert abs(phi_zero(mpq(-1, 2), 1, P) - CTX.pi ** 2 / 16) < CTX.ldexp(1, -115)


def test_phi_zero_domain():
    with pytest.raises(ValueError):
        phi_zero(0, 0, P)
    with pytest.raises(ValueError):
        phi_zero(-1, 1, P)


def test_sign_change_counts():
    seq = build_sequence(SobolevSpec.laguerre(0, {0: 1}), 6)
    assert sign_change_count(seq, 5, P) == 5
    holed = build_sequence(SobolevSpec.laguerre(0, {0: 1, 2: 1}), 6)
    assert sign_change_count(holed, 6, P) >= 5


def test_interlacing():
    seq = build_sequence(SobolevSpec.laguerre(0, {0: 1}), 40)
    roots = [real_roots(seq[n], 64) for n in range(1, 41)]
    assert all(interlaces(roots[i], roots[i + 1]) for i in range(39))
    assert not interlaces(roots[5], roots[5])


def test_function_zero_on_cosine_like_function():
    z = function_zero(lambda x: CTX.cos(CTX.mpf(int(x.numerator)) / int(x.denominator)), 1, 100)
    assert abs(z - CTX.pi / 2) < CTX.ldexp(1, -85)


def test_limit_function_zero_no_hole_is_phi_zero():
    spec = SobolevSpec.laguerre(0, {0: 1})
    assert limit_function_zero(spec, 1, 64) == phi_zero(2, 1, 64)


def test_limit_function_zero_holed():
    z = limit_function_zero(SobolevSpec.laguerre(0, {0: 1, 2: 1}), 1, 64)
    assert abs(float(z) - 12.2169) < 1e-3
    assert abs(mh_limit(0, 0, 2, mpq(int(z * 2**40), 2**40), 64)) < 1e-9


def test_scaled_zeros_shape():
    seq = build_sequence(SobolevSpec.laguerre(0, {0: 1, 1: 1}), 30)
    small, outer = scaled_zeros(seq, 30, 64)
    assert len(small) == 2
    assert len(small) + len(outer) <= 30
    assert all(a < b for a, b in zip(outer, outer[1:]))
    assert max(small) < outer[0]


def test_zero_scaling_table_targets():
    seq = build_sequence(SobolevSpec.laguerre(0, {0: 1}), 40)
    rows = zero_scaling_table(seq, [20, 40], 3, 64)
    assert [r.k for r in rows] == [1, 2, 3, 1, 2, 3]
    assert rows[0].target == 0
    assert abs(rows[1].target - phi_zero(2, 1, 64)) == 0
    # outer zeros approach their targets
    assert rows[4].abs_error < rows[1].abs_error
