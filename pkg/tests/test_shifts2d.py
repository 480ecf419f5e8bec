from fractions import Fraction as F

import pytest

from shiftlab import measures as ms
from shiftlab import scalars as sc
from shiftlab.errors import BackwardExtensionError, PreconditionError, UnsupportedError
from shiftlab.shifts1d import ConstantTail, MeasureTail, WeightSeq1D, bergman, shift_a, unilateral
from shiftlab.shifts2d import (
    backward_extend_2d,
    check_commuting,
    classify,
    explicit_shift,
    gamma2,
    gamma2_path,
    moment_matrix,
    product_shift,
    psd_test,
    six_point_matrix,
    six_point_test,
    verify_moments_2d,
)


def test_product_shift_is_certified():
    s = product_shift(shift_a(F(1, 4)), unilateral())
    r = classify(s)
    assert r.status == "certified"
    assert r.commuting.holds and r.jointly_hyponormal.holds
    mu = r.subnormality["measure"]
    expected = ms.Measure2D.product(ms.atomic([(0, F(3, 4)), (1, F(1, 4))]), ms.dirac(1))
    assert all(mu.moment(i, j) == expected.moment(i, j) for i in range(4) for j in range(4))


def test_product_moments_factor():
    s = product_shift(bergman(), shift_a(F(1, 2)))
    assert gamma2(s, (2, 3)) == F(1, 3) * F(1, 2)
    assert gamma2_path(s, "yxyxy") == gamma2(s, (2, 3))


def test_non_commuting_grid_skips_checks():
    s = explicit_shift([[F(1, 2), 1], [1, 1]], [[1, 1], [1, 1]])
    r = classify(s)
    assert r.commuting.holds is False
    assert r.jointly_hyponormal is None and r.status == "undecided"


def test_six_point_matrix_entries():
    # at the origin of the second family with a = 1/2, x = 4/5, y = 73/100
    a2, x2, y2 = F(1, 4), F(16, 25), F(73, 100) ** 2
    s = explicit_shift([[x2, a2], [1, 1]], [[y2, 1], [a2 * y2 / x2, 1]])
    m = six_point_matrix(s, (0, 0))
    assert (m.d1, m.d2) == (1 - x2, 1 - y2)
    # (α(0,1)β(1,0) − α(0,0)β(0,0))² with unsquared weights
    assert m.off_sq == y2 * (a2 / sc.sqrt(x2) - sc.sqrt(x2)) ** 2


def test_six_point_failure_has_witness():
    s = explicit_shift([[F(16, 25), F(1, 4)], [1, 1]], [[F(81, 100), 1], [F(81, 256), 1]])
    v = six_point_test(s)
    assert v.holds is False and v.witness == (0, 0)


def test_psd_test_exact_and_numeric():
    good = [[2, 1], [1, 2]]
    bad = [[1, 2], [2, 1]]
    assert psd_test(good).psd
    r = psd_test(bad)
    assert not r.psd and r.det == -3 and r.witness == (0, 1)
    # singular PSD matrix: leading minors vanish, principal minors decide
    assert psd_test([[1, 1, 0], [1, 1, 0], [0, 0, 0]]).psd
    num = [[sc.MP.mpf(1), sc.MP.mpf(1)], [sc.MP.mpf(1), sc.MP.mpf(1) - sc.MP.mpf("1e-14")]]
    assert psd_test(num).psd
    with pytest.raises(PreconditionError):
        psd_test([[1, 2], [3, 4]])
    with pytest.raises(UnsupportedError):
        psd_test([[1 if i == j else 0 for j in range(9)] for i in range(9)])


def test_moment_matrix_of_product_is_psd():
    s = product_shift(bergman(), bergman())
    m = moment_matrix(s, ((0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)))
    assert psd_test(m).psd


def test_backward_extension_2d_success_and_failures():
    x = ms.atomic([(0, F(3, 4)), (1, F(1, 4))])
    mu_m = ms.Measure2D.product(x, ms.dirac(1))
    nu = ms.atomic([(0, F(1, 2)), (1, F(1, 2))])
    mu = backward_extend_2d(mu_m, F(1, 2), nu)
    assert mu.mass == 1
    assert ms.marginal_x(mu).equals(nu)
    with pytest.raises(BackwardExtensionError) as info:
        backward_extend_2d(mu_m, F(2), nu)
    assert "threshold" in info.value.failed
    with pytest.raises(BackwardExtensionError) as info:
        backward_extend_2d(mu_m, F(1), ms.dirac(0))
    assert "marginal" in info.value.failed
    no_int = ms.Measure2D.product(x, ms.lebesgue())
    with pytest.raises(BackwardExtensionError) as info:
        backward_extend_2d(no_int, F(1, 2), nu)
    assert list(info.value.failed) == ["integrability"]


def test_explicit_grid_subnormal_chain():
    # second family well inside the subnormal region
    a2, x2, y2 = F(1, 4), F(16, 25), F(1, 4)
    s = explicit_shift([[x2, a2], [1, 1]], [[y2, 1], [a2 * y2 / x2, 1]])
    r = classify(s)
    assert r.status == "certified"
    assert verify_moments_2d(s, r.subnormality["measure"], 10).holds


def test_check_commuting_horizon_mode():
    s = product_shift(bergman(), unilateral())
    v = check_commuting(s, horizon=5, mode="horizon")
    assert v.holds and not v.decided
