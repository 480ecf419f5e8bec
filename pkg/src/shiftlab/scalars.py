"""Scalar arithmetic shared by every module.

Three kinds of value circulate through the package:

``Fraction``
    exact rationals (the default for user input in exact mode);
``QuadSurd``
    exact numbers ``a + b*sqrt(d)`` with rational ``a, b`` and a square-free
    integer ``d``.  They appear as square roots of rationals and as the atoms
    and densities of two-atom (Stampfli) measures;
``mpf``
    60-digit floats from a private mpmath context.

Exact values combine without loss.  A numeric operand demotes the result to
``mpf``; two surds over different fields also demote, except in comparisons,
which stay exact.  Numeric comparisons use one global absolute tolerance.
"""

from __future__ import annotations

import contextlib
import math
import re
from fractions import Fraction
from typing import Union

import mpmath
import sympy

MP = mpmath.MPContext()
MP.dps = 60

mpf = type(MP.mpf(0))

_base_convert_rhs = mpf.mpf_convert_rhs.__func__


def _convert_rhs(cls, x):
    # lets ``Fraction op mpf`` fall through to the reflected mpf operator
    if isinstance(x, Fraction):
        return mpmath.libmp.from_rational(x.numerator, x.denominator, cls.context.prec, "n")
    return _base_convert_rhs(cls, x)


mpf.mpf_convert_rhs = classmethod(_convert_rhs)

_EPS = MP.mpf("1e-12")


def get_tolerance():
    return _EPS


def set_tolerance(eps) -> None:
    """Set the global tolerance used by numeric comparisons."""
    global _EPS
    value = to_mpf(eps)
    if value <= 0:
        raise ValueError("tolerance must be positive")
    _EPS = value


@contextlib.contextmanager
def tolerance(eps):
    old = _EPS
    set_tolerance(eps)
    try:
        yield
    finally:
        set_tolerance(old)


# ---------------------------------------------------------------------------
# quadratic surds
# ---------------------------------------------------------------------------

def _square_free(n: int) -> tuple[int, int]:
    """Split a positive integer as ``n = s**2 * m`` with ``m`` square-free."""
    s = 1
    for p, e in sympy.factorint(n).items():
        s *= int(p) ** (int(e) // 2)  # factorint may hand back gmpy2 integers
    return s, int(n) // (s * s)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


class QuadSurd:
    """Exact real number ``a + b*sqrt(d)``.

    Instances are only built through :func:`surd`, which collapses to a plain
    ``Fraction`` when ``b == 0``.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Fraction, b: Fraction, d: int):
        self.a = a
        self.b = b
        self.d = d

    # conversions -----------------------------------------------------------
    def _mpmath_(self, prec, rounding):
        return to_mpf(self)

    def __float__(self):
        return float(to_mpf(self))

    def _sympy_(self):
        return sympy.Rational(self.a.numerator, self.a.denominator) + sympy.Rational(
            self.b.numerator, self.b.denominator
        ) * sympy.sqrt(self.d)

    def __repr__(self):
        return f"QuadSurd({format_exact(self)})"

    __str__ = lambda self: format_exact(self)

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadSurd):
            if other.d == self.d:
                return other.a, other.b
            return None
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return _demoted(self, other, lambda x, y: x + y)
        return surd(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return _demoted(self, other, lambda x, y: x * y)
        a, b = c
        return surd(self.a * a + self.b * b * self.d, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def _inverse(self):
        norm = self.a * self.a - self.b * self.b * self.d
        return surd(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadSurd):
            if other.d != self.d:
                return _demoted(self, other, lambda x, y: x / y)
            return self * other._inverse()
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return surd(self.a / other, self.b / other, self.d)
        return _demoted(self, other, lambda x, y: x / y)

    def __rtruediv__(self, other):
        return self._inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return to_mpf(self) ** n
        if n < 0:
            return self._inverse() ** (-n)
        result, base = Fraction(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # ordering ---------------------------------------------------------------
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sa == 0:
            return sb
        if sb == 0:
            return sa
        return sa if self.a * self.a > self.b * self.b * self.d else -sa

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QuadSurd)):
            return exact_sign_of_difference(self, other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0


def surd(a, b, d: int):
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        return a
    return QuadSurd(a, b, d)


def _demoted(x, y, op):
    return op(to_mpf(x), to_mpf(y))


Scalar = Union[Fraction, QuadSurd, "mpmath.mpf"]


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------

def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadSurd))


def exact(x):
    """Coerce ``int``/``Fraction``/``QuadSurd``/rational strings to an exact value."""
    if isinstance(x, (Fraction, QuadSurd)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x, "exact")
    raise TypeError(f"not an exact scalar: {x!r}")


def to_mpf(x):
    if isinstance(x, mpf):
        return x
    if isinstance(x, int):
        return MP.mpf(x)
    if isinstance(x, Fraction):
        return MP.mpf(x.numerator) / x.denominator
    if isinstance(x, QuadSurd):
        return to_mpf(x.a) + to_mpf(x.b) * MP.sqrt(x.d)
    if isinstance(x, float):
        return MP.mpf(x)
    if isinstance(x, str):
        return to_mpf(parse_scalar(x, "numeric"))
    if isinstance(x, sympy.Basic):
        return MP.mpf(str(sympy.N(x, MP.dps + 5)))
    return MP.mpf(x)


def coerce(x):
    """Normalize user-level numbers: ints become ``Fraction``, floats ``mpf``."""
    if isinstance(x, bool):
        raise TypeError("boolean is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return MP.mpf(x)
    if isinstance(x, str):
        return parse_scalar(x, "exact")
    return x


def numeric(x):
    """Demote any scalar to the numeric kind."""
    return to_mpf(x)


def to_sympy(x):
    if isinstance(x, Fraction):
        return sympy.Rational(x.numerator, x.denominator)
    if isinstance(x, int):
        return sympy.Integer(x)
    if isinstance(x, QuadSurd):
        return x._sympy_()
    if isinstance(x, sympy.Basic):
        return x
    return sympy.Float(MP.nstr(to_mpf(x), MP.dps), MP.dps)


def sqrt(x):
    """Square root, exact whenever the result is a rational or a quadratic surd."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        if x < 0:
            raise ValueError(f"square root of negative rational {x}")
        r = _rational_sqrt(x)
        if r is not None:
            return r
        # sqrt(p/q) = sqrt(p*q)/q
        s, m = _square_free(x.numerator * x.denominator)
        return surd(0, Fraction(s, x.denominator), m)
    if isinstance(x, QuadSurd):
        # try (u + v*sqrt(d))**2 = a + b*sqrt(d)
        n = _rational_sqrt(x.a * x.a - x.b * x.b * x.d)
        if n is not None:
            for u2 in ((x.a + n) / 2, (x.a - n) / 2):
                u = _rational_sqrt(u2) if u2 > 0 else None
                if u:
                    v = x.b / (2 * u)
                    root = surd(u, v, x.d)
                    if compare(root, 0) >= 0:
                        return root
                    return -root
        return MP.sqrt(to_mpf(x))
    if isinstance(x, sympy.Basic):
        return sympy.sqrt(x)
    value = to_mpf(x)
    if value < 0:
        if -value <= _EPS:
            return MP.mpf(0)
        raise ValueError(f"square root of negative number {value}")
    return MP.sqrt(value)


def ln(x):
    return MP.log(to_mpf(x))


# ---------------------------------------------------------------------------
# comparisons
# ---------------------------------------------------------------------------

def exact_sign_of_difference(x, y) -> int:
    """Exact sign of ``x - y`` for exact scalars, surds over any fields included."""
    if isinstance(x, QuadSurd) and isinstance(y, QuadSurd) and x.d != y.d:
        # x - y = (A + q*sqrt(d)) - e*sqrt(f) with rational A
        X = surd(x.a - y.a, x.b, x.d)
        sx = _sign_exact(X)
        sy = (y.b > 0) - (y.b < 0)
        if sx != sy:
            return (sx > sy) - (sx < sy)
        # same sign s: compare X**2 with (e*sqrt(f))**2
        diff = _sign_exact(X * X - y.b * y.b * y.d)
        return sx * diff
    return _sign_exact(x - y)


def _sign_exact(x) -> int:
    if isinstance(x, QuadSurd):
        return x.sign()
    return (x > 0) - (x < 0)


def sign(x) -> int:
    """Sign of ``x``; numeric values within the tolerance count as zero."""
    if is_exact(x):
        return _sign_exact(x)
    if isinstance(x, sympy.Basic):
        x = to_mpf(x)
    x = to_mpf(x)
    if abs(x) <= _EPS:
        return 0
    return 1 if x > 0 else -1


def compare(x, y) -> int:
    if is_exact(x) and is_exact(y):
        return exact_sign_of_difference(x, y)
    return sign(to_mpf(x) - to_mpf(y))


def le(x, y) -> bool:
    return compare(x, y) <= 0


def lt(x, y) -> bool:
    return compare(x, y) < 0


def eq(x, y) -> bool:
    return compare(x, y) == 0


def is_zero(x) -> bool:
    return sign(x) == 0


def smin(*xs):
    best = xs[0]
    for x in xs[1:]:
        if compare(x, best) < 0:
            best = x
    return best


def smax(*xs):
    best = xs[0]
    for x in xs[1:]:
        if compare(x, best) > 0:
            best = x
    return best


def all_exact(*xs) -> bool:
    return all(is_exact(x) for x in xs)


# ---------------------------------------------------------------------------
# parsing and formatting
# ---------------------------------------------------------------------------

_SURD_RE = re.compile(
    r"^\s*(?P<a>[-+]?\d+(?:/\d+)?)?\s*(?P<sgn>[-+])?\s*(?:(?P<b>\d+(?:/\d+)?)\s*\*\s*)?"
    r"sqrt\((?P<d>\d+(?:/\d+)?)\)\s*$"
)
_EXPR_OK = re.compile(r"^[0-9a-z_+\-*/(). ]+$")
_EXPR_NAMES = {"sqrt": sympy.sqrt, "ln": sympy.log, "log": sympy.log, "exp": sympy.exp, "pi": sympy.pi}


def parse_scalar(value, mode: str = "exact"):
    """Parse user input.

    Accepts JSON numbers, ``"p/q"``, decimal strings, ``"sqrt(r)"``,
    ``"a+b*sqrt(r)"`` and small closed forms built from ``sqrt``, ``ln``,
    ``exp`` and ``pi``.  Decimal input is read exactly in exact mode
    (``"0.73"`` is ``73/100``).  In numeric mode everything becomes ``mpf``.
    """
    x = _parse(value)
    if mode == "numeric":
        return to_mpf(x)
    if mode != "exact":
        raise ValueError(f"unknown arithmetic mode {mode!r}")
    return x


def _parse(value):
    if isinstance(value, (Fraction, QuadSurd, mpf)):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a scalar")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if not isinstance(value, str):
        raise TypeError(f"cannot parse scalar from {value!r}")
    text = value.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    m = _SURD_RE.match(text)
    if m:
        a = Fraction(m.group("a") or 0)
        b = Fraction(m.group("b") or 1)
        if m.group("sgn") == "-":
            b = -b
        root = sqrt(Fraction(m.group("d")))
        return a + b * root
    if not _EXPR_OK.match(text):
        raise ValueError(f"cannot parse scalar {value!r}")
    try:
        expr = sympy.sympify(text, locals=_EXPR_NAMES)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError(f"cannot parse scalar {value!r}") from exc
    if expr.free_symbols:
        raise ValueError(f"cannot parse scalar {value!r}: free symbols")
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    sq = expr ** 2
    if sq.is_Rational and expr.is_positive:
        return sqrt(Fraction(int(sq.p), int(sq.q)))
    return to_mpf(expr)


def format_exact(x) -> str | None:
    """Canonical exact text, or ``None`` for numeric values."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, QuadSurd):
        coef = "" if x.b in (1, -1) else f"{abs(x.b)}*"
        root = f"{coef}sqrt({x.d})"
        if x.a == 0:
            return f"-{root}" if x.b < 0 else root
        op = "-" if x.b < 0 else "+"
        return f"{x.a}{op}{root}"
    return None


def format_decimal(x, digits: int = 30) -> str:
    if isinstance(x, sympy.Basic):
        x = to_mpf(x)
    value = to_mpf(x)
    if MP.isinf(value):
        return "inf" if value > 0 else "-inf"
    return MP.nstr(value, digits, strip_zeros=True, min_fixed=-MP.inf, max_fixed=MP.inf)


def as_float(x) -> float:
    return float(to_mpf(x))
