import math
from fractions import Fraction as F

import mpmath
import pytest
import sympy

from shiftlab import scalars as sc
from shiftlab.scalars import QuadSurd


def test_sqrt_of_rational_is_exact():
    assert sc.sqrt(F(9, 4)) == F(3, 2)
    r = sc.sqrt(F(1, 2))
    assert isinstance(r, QuadSurd)
    assert r * r == F(1, 2)
    assert sc.format_exact(r) == "1/2*sqrt(2)"


def test_sqrt_denests_surds():
    # (1 + sqrt 2)^2 = 3 + 2 sqrt 2
    r = sc.sqrt(sc.surd(3, 2, 2))
    assert r == sc.surd(1, 1, 2)


def test_surd_arithmetic_matches_floats():
    x, y = sc.surd(F(1, 3), 2, 5), sc.surd(-1, F(1, 2), 5)
    for got, want in [
        (x + y, float(x) + float(y)),
        (x * y, float(x) * float(y)),
        (x / y, float(x) / float(y)),
        (x - y, float(x) - float(y)),
        (x**3, float(x) ** 3),
    ]:
        assert math.isclose(float(got), want, rel_tol=1e-12)
        assert sc.is_exact(got)


def test_mixed_fields_demote_but_compare_exactly():
    a, b = sc.sqrt(F(2)), sc.sqrt(F(3))
    assert not sc.is_exact(a + b)
    assert sc.compare(a, b) == -1
    assert sc.compare(sc.surd(0, 1, 2) * 7, sc.surd(0, 1, 3) * 4) == 1  # 7√2 ≈ 9.90 > 4√3 ≈ 6.93


def test_fraction_mpf_interop_in_both_orders():
    q, x = F(1, 3), sc.MP.mpf(2)
    assert abs((q - x) + F(5, 3)) < sc.MP.mpf("1e-50")
    assert abs(q / x - sc.MP.mpf(1) / 6) < sc.MP.mpf("1e-50")
    assert q < x and x > q


def test_numeric_comparison_uses_tolerance():
    x = sc.MP.mpf(1) + sc.MP.mpf("1e-14")
    assert sc.eq(x, 1)
    with sc.tolerance("1e-20"):
        assert not sc.eq(x, 1)
    assert sc.eq(x, 1)


def test_exact_comparison_ignores_tolerance():
    with sc.tolerance("1e-3"):
        assert sc.compare(F(1), F(1) + F(1, 10**9)) == -1


@pytest.mark.parametrize(
    "text, expected",
    [("3/4", F(3, 4)), ("0.73", F(73, 100)), (5, F(5)), ("-2", F(-2))],
)
def test_parse_rationals(text, expected):
    assert sc.parse_scalar(text) == expected


def test_parse_surd_and_closed_forms():
    assert sc.parse_scalar("1+2*sqrt(3)") == sc.surd(1, 2, 3)
    assert sc.parse_scalar("sqrt(12/25)") == sc.surd(0, F(2, 5), 3)
    x = sc.parse_scalar("1/(2*ln(2))")
    assert not sc.is_exact(x)
    assert abs(x - 1 / (2 * sc.MP.log(2))) < sc.MP.mpf("1e-50")


def test_parse_numeric_mode_demotes():
    x = sc.parse_scalar("1/3", "numeric")
    assert isinstance(x, sc.mpf)


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        sc.parse_scalar("import os")


def test_to_sympy_round_trip():
    x = sc.surd(F(1, 2), F(-1, 4), 2)
    assert sympy.simplify(sc.to_sympy(x) - (sympy.Rational(1, 2) - sympy.sqrt(2) / 4)) == 0


def test_format_decimal():
    assert sc.format_decimal(F(1, 8), 10) == "0.125"
    assert sc.format_decimal(sc.sqrt(F(2)), 8).startswith("1.414213")


def test_sqrt_negative_rational_raises():
    with pytest.raises(ValueError):
        sc.sqrt(F(-1, 4))


def test_smin_smax_mixed_kinds():
    vals = [F(1, 2), sc.sqrt(F(1, 3)), sc.MP.mpf("0.4")]
    assert sc.smin(*vals) == sc.MP.mpf("0.4")
    assert sc.smax(*vals) == sc.sqrt(F(1, 3))


def test_mpf_private_context_precision():
    assert sc.MP.dps == 60
    assert mpmath.mp.dps == 15  # the global context is untouched
