from fractions import Fraction as F

import pytest
import sympy

from shiftlab import families as fa
from shiftlab import measures as ms
from shiftlab import scalars as sc
from shiftlab.errors import PreconditionError
from shiftlab.linalg import det
from shiftlab.shifts2d import classify, moment_matrix, six_point_matrix, six_point_test


def log_params():
    return fa.Family1Params(F(1, 4), F(1), F(2), F(1, 4), ms.density(F(1, 2), 1, [2]))


def close(x, y, tol):
    return abs(sc.to_mpf(x) - sc.to_mpf(y)) <= sc.to_mpf(tol)


# ---------------------------------------------------------------------------
# first family
# ---------------------------------------------------------------------------

def test_log_example_thresholds():
    th = fa.family1_thresholds(log_params())
    assert th.s == sc.surd(0, F(1, 2), 2)
    assert th.h == sc.sqrt(F(11, 20))  # (1/2)·sqrt(11/5)
    assert close(th.s2, "0.849", "5e-4")
    assert close(th.u, "0.647", "5e-4")
    assert close(th.v, "0.523", "5e-4")


def test_log_example_symbolic_forms():
    th = fa.family1_thresholds(log_params())
    ln2 = sympy.log(2)
    assert sympy.simplify(th.symbolic["u"] - 1 / (4 * (2 * ln2 - 1))) == 0
    assert sympy.simplify(th.symbolic["s2_sq"] - 1 / (2 * ln2)) == 0
    reference_v = (6 * ln2 - 2 - sympy.sqrt(2) * sympy.sqrt(3 * ln2 - 2) * sympy.sqrt(6 * ln2 - 1)) / (4 * ln2)
    assert abs(sympy.N(th.symbolic["v"] - reference_v, 50)) < 1e-40


def test_log_example_completion_phis():
    c = log_params().xi_completion()
    ln2 = sc.MP.log(2)
    assert close(c.phi0, 1 / (1 - 2 * ln2), "1e-40")
    assert close(c.phi1, (1 - 4 * ln2) / (1 - 2 * ln2), "1e-40")


def test_log_example_fourth_xi_weight_follows_recursion():
    # independent oracle: ξ3² = φ0/ξ2² + φ1 with ξ2² = 2
    ln2 = sc.MP.log(2)
    phi0, phi1 = 1 / (1 - 2 * ln2), (1 - 4 * ln2) / (1 - 2 * ln2)
    xi3 = sc.sqrt(log_params().xi_seq().sq(3))
    assert close(xi3, sc.MP.sqrt(phi0 / 2 + phi1), "1e-40")


def test_log_example_fourth_xi_weight_matches_reference_value():
    xi3 = sc.sqrt(log_params().xi_seq().sq(3))
    assert close(xi3, "1.985", "5e-3")


def test_log_example_restricted_measure_has_extremal_weight_s2():
    p = log_params()
    assert close(ms.ext_value_sq(p.nu_m()), p.s2_sq, "1e-40")


def test_log_example_classification():
    r = classify(fa.family1_build(log_params(), F(18, 25) ** 2))
    assert r.commuting.holds and r.t1_subnormal.holds and r.t2_subnormal.holds
    assert r.jointly_hyponormal.holds
    assert r.status == "obstructed" and r.subnormality["kind"] == "moment_matrix"


def test_moment_determinant_vanishes_at_s():
    p = log_params()
    assert fa.family1_moment_det(p, F(1, 2)) == 0  # s² = 1/2


def test_moment_matrix_layout():
    p = log_params()
    a2 = F(1, 3)
    s = fa.family1_build(p, a2)
    b2, x1, e0, e1 = a2 * p.eta0_sq / p.xi0_sq, p.xi1_sq, p.eta0_sq, p.eta1_sq
    expected = [
        [1, a2, b2, a2 * e0],
        [a2, a2 * x1, a2 * e0, a2 * e0 * x1],
        [b2, a2 * e0, b2 * e1, a2 * e0 * e1],
        [a2 * e0, a2 * e0 * x1, a2 * e0 * e1, a2 * e0 * x1 * e1],
    ]
    assert [list(r) for r in moment_matrix(s).entries] == expected


def test_family1_rejects_a_above_component_bounds():
    with pytest.raises(PreconditionError, match=r"\[3, 4\]"):
        fa.family1_build(log_params(), F(9, 10))


def test_family1_hyponormality_decided_at_origin():
    p = log_params()
    th = fa.family1_thresholds(p)
    above = th.h_sq + F(1, 1000)
    s = fa.family1_build(p, above)
    v = six_point_test(s)
    assert v.holds is False and v.witness == (0, 0)


# ---------------------------------------------------------------------------
# second family
# ---------------------------------------------------------------------------

def test_family2_bounds_direct_evaluation():
    b = fa.family2_thresholds(F(1, 2), F(4, 5))
    assert b.sub == sc.sqrt(F(48, 100))
    a, x = sc.MP.mpf(1) / 2, sc.MP.mpf("0.8")
    hyp = x * sc.MP.sqrt((1 - x**2) / (x**2 - 2 * a**2 * x**2 + a**4))
    assert close(b.hyp, hyp, "1e-40")
    assert close(b.hyp, "0.77611", "5e-6")
    assert b.ordering_holds()


def test_family2_bounds_coincide_at_x_equal_a():
    for a in (F(1, 3), F(1, 2), F(9, 10)):
        b = fa.family2_thresholds(a, a)
        assert b.sub == b.hyp == 1


def test_family2_no_band_when_x_below_a():
    a = F(7, 10)
    for x in (F(1, 10), F(1, 2), F(69, 100)):
        b = fa.family2_thresholds(a, x)
        assert b.sub == b.hyp == x / a


@pytest.mark.parametrize(
    "y, label",
    [(F(73, 100), "hyponormal_not_subnormal"), (F(1, 2), "subnormal"), (F(9, 10), "not_hyponormal")],
)
def test_family2_labels(y, label):
    assert fa.family2_label(F(1, 2), F(4, 5), y) == label
    assert fa.family2_shift_label(F(1, 2), F(4, 5), y) == label


def test_family2_not_hyponormal_witness_is_origin():
    v = six_point_test(fa.family2_build(F(1, 2), F(4, 5), F(9, 10)))
    assert v.holds is False and v.witness == (0, 0)


def test_family2_band_edges_are_half_open():
    a, x = F(1, 2), F(4, 5)
    b = fa.family2_thresholds(a, x)
    assert fa.family2_label(a, x, b.sub) == "subnormal"
    assert fa.family2_label(a, x, b.hyp) == "hyponormal_not_subnormal"


def test_family2_domain():
    assert not fa.family2_in_domain(F(1, 2), F(1, 10), F(1, 2))  # ay/x = 5/2
    with pytest.raises(PreconditionError):
        fa.family2_build(F(1, 2), F(1, 10), F(1, 2))


def test_scan_single_point_csv():
    r = fa.family2_region_scan(F(1, 2), 1, y_max=F(1, 2))
    assert r.to_csv() == "x,y,label\n0.500000000000,0.250000000000,subnormal\n"
    assert len(r.checked) == 1 and not r.disagreements


def test_scan_band_shrinks_as_a_grows():
    small = fa.family2_region_scan(F(1, 2), 40, sample_fraction=0).band_fraction()
    large = fa.family2_region_scan(F(99, 100), 40, sample_fraction=0).band_fraction()
    assert small > large


def test_scan_parallel_matches_serial():
    serial = fa.family2_region_scan(F(1, 2), 12, sample_fraction=0)
    parallel = fa.family2_region_scan(F(1, 2), 12, sample_fraction=0, jobs=2)
    assert serial.to_csv() == parallel.to_csv()


# ---------------------------------------------------------------------------
# third family
# ---------------------------------------------------------------------------

CUBE = ms.density(0, 1, [0, 0, 3])


def test_family3_symmetric_instance():
    data = fa.family3_conditions(CUBE, F(1, 2))
    assert (data.xi_e_sq, data.neg2.value, data.neg1.value, data.b_sq) == (F(2, 3), 3, F(3, 2), F(1, 3))
    assert data.p == F(-1, 24)
    assert fa.family3_p_factored(data.xi_e_sq, data.xi1_sq, data.a_sq) == F(-1, 24)
    s = fa.family3_build(CUBE, F(1, 2))
    assert det(moment_matrix(s).entries) == F(-1, 1728)
    assert fa.family3_det(data.xi_e_sq, data.xi1_sq, data.a_sq, data.b_sq) == F(-1, 1728)


def test_family3_moment_matrix_layout():
    s = fa.family3_build(CUBE, F(1, 2))
    a, b, e, x = F(1, 2), F(1, 3), F(2, 3), F(3, 4)
    expected = [
        [1, a, a, a * b],
        [a, a * e, a * b, a * b * x],
        [a, a * b, a * e, a * b * x],
        [a * b, a * b * x, a * b * x, a * b * x * x],
    ]
    assert [list(r) for r in moment_matrix(s).entries] == expected


def test_family3_boundary_p_vanishes():
    assert fa.family3_p_factored(F(2, 3), F(3, 4), F(3, 4)) == 0
    assert fa.family3_p(F(2, 3), F(3, 4), F(3, 4), 2 * F(3, 4) - F(2, 3)) == 0


def test_family3_hyponormal_everywhere_and_obstructed():
    s = fa.family3_build(CUBE, F(1, 2))
    assert six_point_test(s, 25, mode="horizon").holds
    assert all(six_point_matrix(s, k).is_psd() for k in s.certificate.points)
    v = six_point_test(s)
    assert v.holds and v.decided
    assert classify(s).status == "obstructed"


def test_family3_case_three_condition():
    # b·ξ_{n+1} <= ξ1·ξ_e for every n: here b² = 1/3, sup ξ² = 1, ξ1²ξ_e² = 1/2
    data = fa.family3_conditions(CUBE, F(1, 2))
    assert data.b_sq * 1 <= data.xi1_sq * data.xi_e_sq


def test_family3_violations_reported_by_number():
    with pytest.raises(PreconditionError, match="5"):
        fa.family3_build(CUBE, F(3, 5))
    data = fa.family3_conditions(CUBE, F(1, 2), b_sq=F(1, 2))
    assert 6 in data.failed
    data = fa.family3_conditions(ms.lebesgue(), F(1, 4))
    assert 3 in data.failed


def test_family3_window():
    assert fa.family3_window(CUBE, F(1, 2)).holds
    assert not fa.family3_window(CUBE, F(1, 3)).holds  # a² <= ξ_e²/2


# ---------------------------------------------------------------------------
# fourth family
# ---------------------------------------------------------------------------

TWO_ATOMS = ms.atomic([(F(1, 4), F(1, 2)), (1, F(1, 2))])


def test_family4_at_the_atom():
    chk = fa.family4_equivalence_check(TWO_ATOMS, F(1, 2))
    assert chk.hyponormal.holds and chk.subnormal and chk.agrees
    assert chk.rho == F(1, 2)


def test_family4_above_the_atom():
    chk = fa.family4_equivalence_check(TWO_ATOMS, F(3, 5))
    assert chk.hyponormal.holds is False and not chk.subnormal and chk.agrees


def test_family4_without_atom_at_one_fails_hyponormality():
    chk = fa.family4_equivalence_check(ms.lebesgue(), F(1, 10), 50)
    assert chk.hyponormal.holds is False
    assert chk.hyponormal.witness[0] <= 50
    assert chk.agrees


def test_family4_unilateral_pair():
    s = fa.family4_build(ms.dirac(1), 1)
    r = classify(s)
    assert r.jointly_hyponormal.holds and r.status == "certified"


def test_family4_rejects_large_y():
    with pytest.raises(PreconditionError):
        fa.family4_build(ms.lebesgue(), F(1, 2))


def test_family4_bound_formula_matches_six_point_det():
    n = 3
    bound = fa.family4_hyponormality_bound(TWO_ATOMS, n)
    s_at = fa.family4_build(TWO_ATOMS, bound, strict=False)
    assert six_point_matrix(s_at, (n, 0)).det == 0
