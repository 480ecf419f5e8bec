from fractions import Fraction as F

import pytest
import sympy

from shiftlab import measures as ms
from shiftlab import scalars as sc
from shiftlab.errors import InvalidMeasureError, PreconditionError


def test_moments_of_polynomial_density():
    m = ms.density(0, 1, [0, 0, 3])  # 3s² ds
    assert m.mass == 1
    assert ms.moment(m, 1) == F(3, 4)
    assert ms.moment(m, 5) == F(3, 8)
    assert ms.neg_moment(m, 1).value == F(3, 2)
    assert ms.neg_moment(m, 2).value == 3
    with pytest.raises(PreconditionError):
        ms.neg_moment(m, 3)
    assert not ms.neg_moment(ms.density(0, 1, [0, 2]), 2).finite


def test_negative_moment_with_logarithm():
    m = ms.density(F(1, 2), 1, [2])
    nm = ms.neg_moment(m, 1)
    assert not nm.is_exact
    assert sympy.simplify(nm.symbolic - 2 * sympy.log(2)) == 0
    assert abs(ms.ext_value_sq(m) - 1 / (2 * sc.MP.log(2))) < sc.MP.mpf("1e-50")


def test_atom_at_zero_blocks_negative_moments():
    m = ms.atomic([(0, F(1, 2)), (1, F(1, 2))])
    assert not ms.neg_moment(m, 1).finite


def test_ext_value_of_power_density():
    m = ms.density(0, 1, [0, 0, 3])
    assert ms.ext_value_sq(m) == F(2, 3)
    assert ms.ext_value(m) == sc.surd(0, F(1, 3), 6)


def test_stampfli_completion_exact():
    c = ms.stampfli_completion(1, 2, 3)
    assert (c.phi0, c.phi1) == (F(-2), F(4))
    assert c.atoms == (sc.surd(2, -1, 2), sc.surd(2, 1, 2))
    assert c.densities == (sc.surd(F(1, 2), F(1, 4), 2), sc.surd(F(1, 2), F(-1, 4), 2))
    for k in range(4):
        assert ms.moment(c.measure, k) == [1, 1, 2, 6][k]


@pytest.mark.parametrize("triple", [(1, 1, 2), (2, 1, 3), (0, 1, 2)])
def test_stampfli_rejects_non_increasing(triple):
    with pytest.raises(PreconditionError):
        ms.stampfli_completion(*triple)


def test_restrict_rescale_shifts_moments():
    m = ms.density(0, 1, [1])
    r = ms.restrict_rescale(m, 2)
    for k in range(5):
        assert ms.moment(r, k) == ms.moment(m, k + 2) / ms.moment(m, 2)


def test_leq_and_subtract():
    small = ms.density(0, 1, [F(1, 2)])
    big = ms.density(0, 1, [1]) + ms.dirac(F(1, 2), F(1, 4))
    assert ms.leq(small, big) is True
    assert ms.leq(big, small) is False
    rest = ms.subtract(big, small)
    assert rest.mass == F(3, 4)
    assert ms.leq(ms.dirac(F(1, 3)), ms.density(0, 1, [5])) is False


def test_leq_detects_interior_sign_change():
    # t vs 1/2 on [0,1]: neither dominates
    a = ms.density(0, 1, [0, 1])
    b = ms.density(0, 1, [F(1, 2)])
    assert ms.leq(a, b) is False and ms.leq(b, a) is False


def test_negative_density_rejected():
    with pytest.raises(InvalidMeasureError):
        ms.density(0, 1, [1, -3])


def test_json_round_trip():
    m = ms.density(0, 1, [0, 0, 3]) + ms.dirac(sc.surd(1, 1, 2), F(1, 5))
    back = ms.Measure1D.from_json(m.to_json())
    assert back.equals(m)


def test_measure2d_marginals_and_extremal():
    x = ms.atomic([(0, F(3, 4)), (1, F(1, 4))])
    y = ms.atomic([(F(1, 2), F(1, 2)), (1, F(1, 2))])
    mu = ms.Measure2D.product(x, y)
    assert mu.moment(1, 1) == F(1, 4) * F(3, 4)
    assert ms.marginal_x(mu).equals(x)
    assert ms.marginal_y(mu).equals(y)
    ext = ms.extremal_measure(mu)
    # (1/t) dμ / ||1/t||: y-weights 2·(1/2), 1·(1/2) normalized by 3/2
    assert ext.mass == 1
    assert ms.marginal_y(ext).equals(ms.atomic([(F(1, 2), F(2, 3)), (1, F(1, 3))]))


def test_berger_weights_of_lebesgue():
    # Bergman shift: weights (k+1)/(k+2)
    assert ms.berger_weights(ms.lebesgue(), 4) == [F(k + 1, k + 2) for k in range(4)]
