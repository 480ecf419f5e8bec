"""Positive measures on the half line and finite sums of product measures.

A :class:`Measure1D` is a finite atomic part plus finitely many absolutely
continuous pieces ``q(t) dt`` on intervals ``[lo, hi]``.  The density ``q`` is
a Laurent polynomial ``sum(c_i * t**(low + i))`` so that dividing by ``t``
(needed for backward extensions and extremal measures) stays inside the
class.  Integrals of ``t**-1`` produce logarithms; they are carried
symbolically by :class:`LogSum` as long as the data is rational.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import sympy

from . import polys
from . import scalars as sc
from .errors import (
    DegenerateMeasureError,
    InvalidMeasureError,
    NotExtendableError,
    PreconditionError,
)

_by_value = functools.cmp_to_key(sc.compare)


# ---------------------------------------------------------------------------
# rational + logarithmic closed forms
# ---------------------------------------------------------------------------

class LogSum:
    """``rational + sum(coef * ln(prime))`` or an infinite value.

    ``rational`` may be exact or numeric; ``logs`` maps primes to exact
    coefficients.  Used for negative moments (``NegMomentValue``) and for any
    integral that can produce a logarithm.
    """

    __slots__ = ("finite", "rational", "logs")

    def __init__(self, rational=Fraction(0), logs=None, finite=True):
        self.finite = finite
        self.rational = rational
        self.logs = {p: c for p, c in (logs or {}).items() if c != 0}

    @classmethod
    def infinite(cls):
        return cls(finite=False)

    @classmethod
    def log_of(cls, arg: Fraction, coef=Fraction(1)):
        logs: dict[int, Fraction] = {}
        for p, e in sympy.factorint(arg.numerator).items():
            logs[p] = logs.get(p, 0) + coef * e
        for p, e in sympy.factorint(arg.denominator).items():
            logs[p] = logs.get(p, 0) - coef * e
        return cls(Fraction(0), logs)

    def __add__(self, other):
        if not isinstance(other, LogSum):
            other = LogSum(other)
        if not (self.finite and other.finite):
            return LogSum.infinite()
        logs = dict(self.logs)
        for p, c in other.logs.items():
            logs[p] = logs.get(p, 0) + c
        return LogSum(self.rational + other.rational, logs)

    __radd__ = __add__

    def scaled(self, c):
        if not self.finite:
            if sc.sign(c) == 0:
                return LogSum()
            return self
        if self.logs and not isinstance(c, Fraction):
            return LogSum(sc.to_mpf(c) * self.value)
        return LogSum(c * self.rational, {p: c * v for p, v in self.logs.items()})

    @property
    def is_exact(self) -> bool:
        return self.finite and not self.logs and sc.is_exact(self.rational)

    @property
    def value(self):
        """Exact value when log-free, otherwise a numeric value."""
        if not self.finite:
            return sc.MP.inf
        if not self.logs:
            return self.rational
        total = sc.to_mpf(self.rational)
        for p, c in self.logs.items():
            total += sc.to_mpf(c) * sc.MP.log(p)
        return total

    @property
    def symbolic(self):
        if not self.finite:
            return sympy.oo
        expr = sc.to_sympy(self.rational) if sc.is_exact(self.rational) else sympy.Float(
            sc.format_decimal(self.rational, 40), 40
        )
        for p, c in sorted(self.logs.items()):
            expr += sc.to_sympy(c) * sympy.log(p)
        return expr

    def text(self) -> str:
        if not self.finite:
            return "inf"
        if not self.logs:
            return sc.format_exact(self.rational) or sc.format_decimal(self.rational)
        parts = []
        if self.rational != 0:
            parts.append(sc.format_exact(self.rational) or sc.format_decimal(self.rational))
        for p, c in sorted(self.logs.items()):
            parts.append(f"{c}*ln({p})")
        return " + ".join(parts)

    def __repr__(self):
        return f"LogSum({self.text()})"


NegMomentValue = LogSum


def _power_integral(lo, hi, j: int) -> LogSum:
    """``∫_lo^hi t**j dt`` (possibly infinite or logarithmic)."""
    if j >= 0:
        return LogSum((hi ** (j + 1) - lo ** (j + 1)) / (j + 1))
    if sc.sign(lo) == 0:
        return LogSum.infinite()
    if j == -1:
        if isinstance(lo, Fraction) and isinstance(hi, Fraction):
            return LogSum.log_of(hi / lo)
        return LogSum(sc.ln(hi) - sc.ln(lo))
    return LogSum((hi ** (j + 1) - lo ** (j + 1)) / (j + 1))


# ---------------------------------------------------------------------------
# one-variable measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AcPart:
    """Density ``sum(coeffs[i] * t**(low + i))`` on ``[lo, hi]``."""

    lo: object
    hi: object
    coeffs: tuple
    low: int = 0

    def integral(self, power: int) -> LogSum:
        total = LogSum()
        for i, c in enumerate(self.coeffs):
            if sc.is_exact(c) and c == 0:
                continue
            total = total + _power_integral(self.lo, self.hi, self.low + i + power).scaled(c)
        return total

    def scaled(self, c) -> "AcPart":
        return AcPart(self.lo, self.hi, tuple(c * x for x in self.coeffs), self.low)

    def shifted(self, h: int) -> "AcPart":
        return AcPart(self.lo, self.hi, self.coeffs, self.low + h)

    def density(self, t):
        return sum((c * t ** (self.low + i) for i, c in enumerate(self.coeffs)), Fraction(0))

    def as_lowest(self, low: int) -> list:
        """Coefficient list re-indexed so that entry 0 multiplies ``t**low``."""
        return [Fraction(0)] * (self.low - low) + list(self.coeffs)

    def is_nonnegative(self):
        # t**low > 0 on the open interval, so only the polynomial factor matters
        return polys.nonnegative_on(list(self.coeffs), self.lo, self.hi)


class Measure1D:
    """Finite positive measure: atoms plus polynomial-density pieces.

    Construction merges atoms at equal locations, drops zero densities and
    rejects negative data.  Pass ``validate=False`` only for results of
    operations that preserve positivity.
    """

    def __init__(self, atoms: Iterable = (), ac: Iterable[AcPart] = (), *, validate: bool = True):
        merged: list[list] = []
        for t, rho in sorted(((t, rho) for t, rho in atoms), key=lambda a: _by_value(a[0])):
            if merged and sc.compare(merged[-1][0], t) == 0:
                merged[-1][1] = merged[-1][1] + rho
            else:
                merged.append([t, rho])
        clean = []
        for t, rho in merged:
            s = sc.sign(rho)
            if s == 0:
                continue
            if validate and (s < 0 or sc.sign(t) < 0):
                raise InvalidMeasureError(f"atom ({t}, {rho}) is not a positive atom on [0, inf)")
            clean.append((t, rho))
        self.atoms = tuple(clean)
        parts = [_normalized(p) for p in ac if not polys.is_zero(p.coeffs)]
        parts.sort(key=lambda p: _by_value(p.lo))
        if validate:
            for p in parts:
                if sc.sign(p.lo) < 0 or sc.compare(p.lo, p.hi) >= 0:
                    raise InvalidMeasureError(f"bad interval [{p.lo}, {p.hi}]")
                if p.low < 0 and sc.sign(p.lo) == 0 and p.integral(0).finite is False:
                    raise InvalidMeasureError("density is not integrable at 0")
                if p.is_nonnegative() is False:
                    raise InvalidMeasureError(f"density is negative somewhere on [{p.lo}, {p.hi}]")
            for p, q in zip(parts, parts[1:]):
                if sc.compare(p.hi, q.lo) > 0:
                    raise InvalidMeasureError("absolutely continuous parts overlap")
        self.ac = tuple(parts)
        self._moments: dict[int, LogSum] = {}

    # basic data ---------------------------------------------------------------
    def __repr__(self):
        return f"Measure1D({self.to_json()})"

    @property
    def is_atomic(self) -> bool:
        return not self.ac

    @property
    def is_zero(self) -> bool:
        return not self.atoms and not self.ac

    def all_exact(self) -> bool:
        return all(sc.is_exact(t) and sc.is_exact(r) for t, r in self.atoms) and all(
            sc.is_exact(p.lo) and sc.is_exact(p.hi) and all(sc.is_exact(c) for c in p.coeffs) for p in self.ac
        )

    def integral(self, power: int) -> LogSum:
        """``∫ t**power dm`` as a closed form (``power`` may be negative)."""
        if power in self._moments:
            return self._moments[power]
        total = LogSum()
        for t, rho in self.atoms:
            if power < 0 and sc.sign(t) == 0:
                return LogSum.infinite()
            total = total + LogSum(rho * t**power)
        for p in self.ac:
            total = total + p.integral(power)
        self._moments[power] = total
        return total

    @property
    def mass(self):
        return moment(self, 0)

    def support_max(self):
        """Largest point of the support (0 for the zero measure)."""
        candidates = [t for t, _ in self.atoms] + [p.hi for p in self.ac]
        return sc.smax(*candidates) if candidates else Fraction(0)

    # operations producing new measures --------------------------------------
    def scaled(self, c) -> "Measure1D":
        if sc.sign(c) < 0:
            raise InvalidMeasureError("negative scaling of a measure")
        return Measure1D(((t, c * r) for t, r in self.atoms), (p.scaled(c) for p in self.ac), validate=False)

    def times_power(self, h: int) -> "Measure1D":
        """``t**h dm``; atoms at 0 vanish for ``h > 0`` and are rejected for ``h < 0``."""
        atoms = []
        for t, r in self.atoms:
            if sc.sign(t) == 0:
                if h > 0:
                    continue
                if h < 0:
                    raise NotExtendableError("atom at 0 cannot be divided by t")
            atoms.append((t, r * t**h))
        return Measure1D(atoms, (p.shifted(h) for p in self.ac), validate=False)

    def without_atom_at(self, t) -> "Measure1D":
        return Measure1D(((s, r) for s, r in self.atoms if sc.compare(s, t) != 0), self.ac, validate=False)

    def __add__(self, other: "Measure1D") -> "Measure1D":
        return _combine(self, other, 1)

    def equals(self, other: "Measure1D") -> bool:
        atoms, segments = _signed_difference(other, self)
        return all(sc.sign(r) == 0 for _, r in atoms) and all(polys.is_zero(c) for _, _, _, c in segments)

    # serialization --------------------------------------------------------------
    def to_json(self) -> dict:
        out = {
            "atoms": [{"t": _enc(t), "rho": _enc(r)} for t, r in self.atoms],
            "ac": [],
        }
        for p in self.ac:
            entry = {"interval": [_enc(p.lo), _enc(p.hi)], "poly": [_enc(c) for c in p.coeffs]}
            if p.low:
                entry["low"] = p.low
            out["ac"].append(entry)
        return out

    @classmethod
    def from_json(cls, data, mode: str = "exact") -> "Measure1D":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            atoms = [(sc.parse_scalar(a["t"], mode), sc.parse_scalar(a["rho"], mode)) for a in data.get("atoms", [])]
            ac = []
            for part in data.get("ac", []):
                lo, hi = (sc.parse_scalar(v, mode) for v in part["interval"])
                coeffs = tuple(sc.parse_scalar(v, mode) for v in part["poly"])
                ac.append(AcPart(lo, hi, coeffs, int(part.get("low", 0))))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidMeasureError(f"malformed measure JSON: {exc}") from exc
        return cls(atoms, ac)


def _normalized(p: AcPart) -> AcPart:
    coeffs = list(p.coeffs)
    low = p.low
    while coeffs and sc.is_exact(coeffs[0]) and coeffs[0] == 0:
        coeffs.pop(0)
        low += 1
    return AcPart(p.lo, p.hi, tuple(polys.trim(coeffs)), low)


def _enc(x) -> str:
    return sc.format_exact(x) or sc.format_decimal(x, 40)


def _breakpoints(parts):
    pts = []
    for p in parts:
        pts.extend([p.lo, p.hi])
    pts.sort(key=_by_value)
    out = []
    for x in pts:
        if not out or sc.compare(out[-1], x) != 0:
            out.append(x)
    return out


def _segments(parts_with_sign):
    """Common refinement: ``(lo, hi, low, coeffs)`` of the signed sum of densities."""
    parts = [p for p, _ in parts_with_sign]
    cuts = _breakpoints(parts)
    out = []
    for u, v in zip(cuts, cuts[1:]):
        covering = [
            (p, s) for p, s in parts_with_sign if sc.compare(p.lo, u) <= 0 and sc.compare(v, p.hi) <= 0
        ]
        if not covering:
            continue
        low = min(p.low for p, _ in covering)
        coeffs: list = []
        for p, s in covering:
            coeffs = polys.add(coeffs, polys.scale(p.as_lowest(low), s))
        out.append((u, v, low, coeffs))
    return out


def _signed_difference(m2: Measure1D, m1: Measure1D):
    """Atoms and density segments of ``m2 - m1``."""
    atoms: list[list] = []
    for t, r in sorted(
        [(t, r) for t, r in m2.atoms] + [(t, -r) for t, r in m1.atoms], key=lambda a: _by_value(a[0])
    ):
        if atoms and sc.compare(atoms[-1][0], t) == 0:
            atoms[-1][1] = atoms[-1][1] + r
        else:
            atoms.append([t, r])
    segments = _segments([(p, 1) for p in m2.ac] + [(p, -1) for p in m1.ac])
    return atoms, segments


def _combine(m1: Measure1D, m2: Measure1D, sign: int, validate: bool = False) -> Measure1D:
    atoms = list(m1.atoms) + [(t, sign * r) for t, r in m2.atoms]
    segments = _segments([(p, 1) for p in m1.ac] + [(p, sign) for p in m2.ac])
    ac = [AcPart(u, v, tuple(c), low) for u, v, low, c in segments if not polys.is_zero(c)]
    return Measure1D(atoms, ac, validate=validate)


def subtract(m2: Measure1D, m1: Measure1D) -> Measure1D:
    """``m2 - m1``, which must be a positive measure."""
    verdict = leq(m1, m2)
    if verdict is not True:
        raise InvalidMeasureError("difference of measures is not positive")
    return _combine(m2, m1, -1)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def dirac(t, rho=Fraction(1)) -> Measure1D:
    return Measure1D([(sc.coerce(t), sc.coerce(rho))])


def atomic(pairs) -> Measure1D:
    return Measure1D(pairs)


def density(lo, hi, coeffs, low: int = 0) -> Measure1D:
    """Measure with density ``sum(coeffs[i] * t**(low+i))`` on ``[lo, hi]``."""
    conv = sc.coerce
    return Measure1D([], [AcPart(conv(lo), conv(hi), tuple(conv(c) for c in coeffs), low)])


def lebesgue(lo=Fraction(0), hi=Fraction(1)) -> Measure1D:
    return density(lo, hi, [Fraction(1)])


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def moment(m: Measure1D, k: int):
    """``∫ t**k dm``; exact when the data is exact."""
    if k < 0:
        raise PreconditionError("moment order must be nonnegative")
    return m.integral(k).value


def neg_moment(m: Measure1D, p: int = 1) -> LogSum:
    """``∫ t**-p dm`` as a closed form; infinite for atoms at 0 or divergent densities."""
    if p not in (1, 2):
        raise PreconditionError("negative moment order must be 1 or 2")
    return m.integral(-p)


def restrict_rescale(m: Measure1D, h: int) -> Measure1D:
    """Berger measure of the restriction that drops the first ``h`` basis vectors."""
    if h < 1:
        raise PreconditionError("h must be a positive integer")
    g = moment(m, h)
    if sc.sign(g) <= 0:
        raise DegenerateMeasureError(f"moment of order {h} vanishes")
    return m.times_power(h).scaled(1 / g)


def ext_value_sq(m: Measure1D):
    """Largest admissible squared weight for a backward extension, ``1/‖1/t‖``."""
    nm = neg_moment(m, 1)
    if not nm.finite:
        return Fraction(0)
    return 1 / nm.value


def ext_value(m: Measure1D):
    """Largest admissible new weight (unsquared), ``‖1/t‖^(-1/2)``; 0 if ``1/t`` is not integrable."""
    return sc.sqrt(ext_value_sq(m))


def ext_value_symbolic(m: Measure1D):
    nm = neg_moment(m, 1)
    if not nm.finite:
        return sympy.Integer(0)
    return 1 / sympy.sqrt(nm.symbolic)


@dataclass(frozen=True)
class StampfliCompletion:
    phi0: object
    phi1: object
    measure: Measure1D

    def __iter__(self):
        return iter((self.phi0, self.phi1, self.measure))

    @property
    def atoms(self):
        return tuple(t for t, _ in self.measure.atoms)

    @property
    def densities(self):
        return tuple(r for _, r in self.measure.atoms)


def stampfli_completion(a0sq, a1sq, a2sq) -> StampfliCompletion:
    """Two-atom Berger measure of the recursively generated shift through three squared weights."""
    a0sq, a1sq, a2sq = (sc.coerce(x) for x in (a0sq, a1sq, a2sq))
    if not (sc.sign(a0sq) > 0 and sc.lt(a0sq, a1sq) and sc.lt(a1sq, a2sq)):
        raise PreconditionError("need 0 < a0sq < a1sq < a2sq")
    phi0 = -a0sq * a1sq * (a2sq - a1sq) / (a1sq - a0sq)
    phi1 = a1sq * (a2sq - a0sq) / (a1sq - a0sq)
    root = sc.sqrt(phi1 * phi1 + 4 * phi0)
    t0 = (phi1 - root) / 2
    t1 = (phi1 + root) / 2
    rho1 = (a0sq - t0) / (t1 - t0)
    rho0 = 1 - rho1
    for r in (rho0, rho1):
        if not (sc.sign(r) > 0 and sc.lt(r, 1)):
            raise PreconditionError("densities fall outside (0, 1)")
    return StampfliCompletion(phi0, phi1, Measure1D([(t0, rho0), (t1, rho1)], validate=False))


def atom_at(m: Measure1D, t) -> object:
    for s, r in m.atoms:
        if sc.compare(s, t) == 0:
            return r
    return Fraction(0)


def berger_weights(m: Measure1D, n: int) -> list:
    """First ``n`` squared weights ``γ_{k+1}/γ_k`` of the shift whose Berger measure is ``m``."""
    moments = [moment(m, k) for k in range(n + 1)]
    out = []
    for k in range(n):
        if sc.sign(moments[k]) <= 0:
            raise DegenerateMeasureError(f"moment of order {k} vanishes")
        out.append(moments[k + 1] / moments[k])
    return out


def leq(m1: Measure1D, m2: Measure1D):
    """``m1 <= m2`` on every Borel set; ``None`` when nonnegativity cannot be decided."""
    atoms, segments = _signed_difference(m2, m1)
    if any(sc.sign(r) < 0 for _, r in atoms):
        return False
    undecided = False
    for lo, hi, _low, coeffs in segments:
        verdict = polys.nonnegative_on(coeffs, lo, hi)
        if verdict is False:
            return False
        if verdict is None:
            undecided = True
    return None if undecided else True


# ---------------------------------------------------------------------------
# two-variable measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Measure2D:
    """Finite sum ``Σ c_i · (x_i × y_i)`` of product measures."""

    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        clean = []
        for c, x, y in self.terms:
            s = sc.sign(c)
            if s < 0:
                raise InvalidMeasureError("negative coefficient in a product-sum measure")
            if s > 0 and not x.is_zero and not y.is_zero:
                clean.append((c, x, y))
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def product(cls, x: Measure1D, y: Measure1D, c=Fraction(1)) -> "Measure2D":
        return cls(((c, x, y),))

    def moment(self, i: int, j: int):
        total = Fraction(0)
        for c, x, y in self.terms:
            total = total + c * moment(x, i) * moment(y, j)
        return total

    @property
    def mass(self):
        return self.moment(0, 0)

    def __add__(self, other: "Measure2D") -> "Measure2D":
        return Measure2D(self.terms + other.terms)

    def scaled(self, c) -> "Measure2D":
        return Measure2D(tuple((c * k, x, y) for k, x, y in self.terms))

    def neg_moment_y(self, p: int = 1) -> LogSum:
        total = LogSum()
        for c, x, y in self.terms:
            total = total + neg_moment(y, p).scaled(c * x.mass)
        return total

    def to_json(self) -> dict:
        return {"terms": [{"c": _enc(c), "x": x.to_json(), "y": y.to_json()} for c, x, y in self.terms]}

    @classmethod
    def from_json(cls, data, mode: str = "exact") -> "Measure2D":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(
                tuple(
                    (sc.parse_scalar(t["c"], mode), Measure1D.from_json(t["x"], mode), Measure1D.from_json(t["y"], mode))
                    for t in data["terms"]
                )
            )
        except (KeyError, TypeError) as exc:
            raise InvalidMeasureError(f"malformed measure JSON: {exc}") from exc


def _sum_measures(measures) -> Measure1D:
    out = Measure1D()
    for m in measures:
        out = out + m
    return out


def marginal_x(m: Measure2D) -> Measure1D:
    return _sum_measures(x.scaled(c * y.mass) for c, x, y in m.terms)


def marginal_y(m: Measure2D) -> Measure1D:
    return _sum_measures(y.scaled(c * x.mass) for c, x, y in m.terms)


def extremal_measure(m: Measure2D) -> Measure2D:
    """Drop mass on ``{t = 0}``, divide by ``t`` and renormalize (``t`` the second coordinate)."""
    reduced = []
    norm = LogSum()
    for c, x, y in m.terms:
        y0 = y.without_atom_at(0)
        if y0.is_zero:
            continue
        nm = neg_moment(y0, 1)
        if not nm.finite:
            raise NotExtendableError("1/t is not integrable against the measure")
        norm = norm + nm.scaled(c * x.mass)
        reduced.append((c, x, y0.times_power(-1)))
    total = norm.value
    if not reduced or sc.sign(total) <= 0:
        raise DegenerateMeasureError("no mass off the line t = 0")
    return Measure2D(tuple((c / total, x, y) for c, x, y in reduced))
