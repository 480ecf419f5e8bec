"""One-variable weighted shifts described by squared weights.

A sequence is a finite head followed by a tail rule, so infinite shifts have
a finite description:

* ``ConstantTail(c_sq)``: every later squared weight equals ``c_sq``;
* ``RecursiveTail(phi0, phi1)``: ``x[n+1] = phi0 / x[n] + phi1`` on squared
  weights, seeded by the last head entry;
* ``MeasureTail(measure, offset)``: squared weights ``γ[k+1]/γ[k]`` of the
  measure, starting at moment index ``offset``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import measures as ms
from . import scalars as sc
from .errors import (
    DegenerateMeasureError,
    InvalidMeasureError,
    NotExtendableError,
    PreconditionError,
    SpecError,
    ThresholdError,
)
from .verdicts import Verdict, certainty

RECURSIVE_CHECK = 200


@dataclass(frozen=True)
class ConstantTail:
    c_sq: object

    def to_json(self):
        return {"kind": "constant", "params": {"c_sq": ms._enc(self.c_sq)}}


@dataclass(frozen=True)
class RecursiveTail:
    phi0: object
    phi1: object

    def to_json(self):
        return {"kind": "recursive", "params": {"phi0": ms._enc(self.phi0), "phi1": ms._enc(self.phi1)}}


@dataclass(frozen=True, eq=False)
class MeasureTail:
    measure: ms.Measure1D
    offset: int = 0

    def to_json(self):
        return {"kind": "measure", "params": {"measure": self.measure.to_json(), "offset": self.offset}}


class WeightSeq1D:
    """Squared weights ``x[0], x[1], ...`` of a one-variable weighted shift."""

    def __init__(self, head=(), tail=None, *, validate: bool = True):
        self.head = tuple(sc.coerce(x) for x in head)
        self.tail = tail if tail is not None else ConstantTail(Fraction(1))
        if isinstance(self.tail, ConstantTail):
            self.tail = ConstantTail(sc.coerce(self.tail.c_sq))
        if isinstance(self.tail, RecursiveTail) and not self.head:
            raise PreconditionError("a recursive tail needs at least one head weight to seed it")
        self._sq: list = list(self.head)
        self._gamma: list = [Fraction(1)]
        if validate:
            self._validate()

    def _validate(self):
        for i, x in enumerate(self.head):
            if sc.sign(x) <= 0:
                raise PreconditionError(f"squared weight {i} is not positive")
        if isinstance(self.tail, ConstantTail) and sc.sign(self.tail.c_sq) <= 0:
            raise PreconditionError("constant tail must be positive")
        if isinstance(self.tail, MeasureTail):
            for k in range(self.tail.offset + 2):
                if sc.sign(ms.moment(self.tail.measure, k)) <= 0:
                    raise DegenerateMeasureError(f"moment {k} of the tail measure vanishes")
        if isinstance(self.tail, RecursiveTail):
            bound = self.norm_bound_sq()
            for n in range(len(self.head), len(self.head) + RECURSIVE_CHECK):
                x = self.sq(n)
                if sc.sign(x) <= 0:
                    raise PreconditionError(f"recursive tail turns nonpositive at index {n}")
                if bound is not None and sc.compare(x, bound) > 0:
                    raise PreconditionError(f"recursive tail exceeds its norm bound at index {n}")

    # weights and moments ---------------------------------------------------------
    def sq(self, n: int):
        """Squared weight ``x[n]``."""
        while len(self._sq) <= n:
            self._sq.append(self._next())
        return self._sq[n]

    def _next(self):
        n = len(self._sq)
        tail = self.tail
        if isinstance(tail, ConstantTail):
            return tail.c_sq
        if isinstance(tail, RecursiveTail):
            return tail.phi0 / self._sq[n - 1] + tail.phi1
        k = tail.offset + n - len(self.head)
        return ms.moment(tail.measure, k + 1) / ms.moment(tail.measure, k)

    def weights(self, n: int) -> list:
        return [self.sq(i) for i in range(n)]

    def gamma(self, k: int):
        while len(self._gamma) <= k:
            i = len(self._gamma) - 1
            self._gamma.append(self._gamma[-1] * self.sq(i))
        return self._gamma[k]

    def shifted(self, h: int = 1) -> "WeightSeq1D":
        """The restriction dropping the first ``h`` weights."""
        if h <= len(self.head):
            head = self.head[h:]
            if isinstance(self.tail, RecursiveTail) and not head:
                return WeightSeq1D((self.sq(h),), self.tail, validate=False)
            return WeightSeq1D(head, self.tail, validate=False)
        if isinstance(self.tail, MeasureTail):
            return WeightSeq1D((), MeasureTail(self.tail.measure, self.tail.offset + h - len(self.head)), validate=False)
        if isinstance(self.tail, RecursiveTail):
            return WeightSeq1D((self.sq(h),), self.tail, validate=False)
        return WeightSeq1D((), self.tail, validate=False)

    def prepend(self, *xs) -> "WeightSeq1D":
        return WeightSeq1D(tuple(xs) + self.head, self.tail, validate=False)

    def norm_bound_sq(self):
        """Supremum of the squared weights (``None`` when it cannot be read off the tail)."""
        tail = self.tail
        if isinstance(tail, ConstantTail):
            tail_sup = tail.c_sq
        elif isinstance(tail, MeasureTail):
            tail_sup = tail.measure.support_max()
        else:
            disc = tail.phi1 * tail.phi1 + 4 * tail.phi0
            if sc.sign(disc) < 0:
                return None
            tail_sup = (tail.phi1 + sc.sqrt(disc)) / 2
        return sc.smax(tail_sup, *self.head) if self.head else tail_sup

    def is_exact(self) -> bool:
        values = list(self.head)
        if isinstance(self.tail, ConstantTail):
            values.append(self.tail.c_sq)
        elif isinstance(self.tail, RecursiveTail):
            values += [self.tail.phi0, self.tail.phi1]
        else:
            return all(sc.is_exact(v) for v in values) and self.tail.measure.all_exact()
        return all(sc.is_exact(v) for v in values)

    # serialization -------------------------------------------------------------------
    def to_json(self) -> dict:
        return {"head": [ms._enc(x) for x in self.head], "tail": self.tail.to_json()}

    @classmethod
    def from_json(cls, data, mode: str = "exact") -> "WeightSeq1D":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            head = [sc.parse_scalar(x, mode) for x in data.get("head", [])]
            tail = data.get("tail", {"kind": "constant", "params": {"c_sq": "1"}})
            kind, params = tail["kind"], tail.get("params", {})
            if kind == "constant":
                t = ConstantTail(sc.parse_scalar(params["c_sq"], mode))
            elif kind == "recursive":
                t = RecursiveTail(sc.parse_scalar(params["phi0"], mode), sc.parse_scalar(params["phi1"], mode))
            elif kind == "measure":
                t = MeasureTail(ms.Measure1D.from_json(params["measure"], mode), int(params.get("offset", 0)))
            else:
                raise SpecError(f"unknown tail kind {kind!r}")
        except (KeyError, TypeError, ValueError, InvalidMeasureError) as exc:
            raise SpecError(f"malformed weight sequence: {exc}") from exc
        return cls(head, t)

    def __repr__(self):
        return f"WeightSeq1D({self.to_json()})"


# ---------------------------------------------------------------------------
# common shifts
# ---------------------------------------------------------------------------

def unilateral() -> WeightSeq1D:
    return WeightSeq1D((), ConstantTail(Fraction(1)))


def shift_a(a_sq) -> WeightSeq1D:
    """``shift(a, 1, 1, ...)`` from the squared first weight."""
    return WeightSeq1D((a_sq,), ConstantTail(Fraction(1)))


def bergman() -> WeightSeq1D:
    return WeightSeq1D((), MeasureTail(ms.lebesgue(), 0))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def gamma1(w: WeightSeq1D, k: int):
    if k < 0:
        raise PreconditionError("moment order must be nonnegative")
    return w.gamma(k)


def is_hyponormal_1d(w: WeightSeq1D, horizon: int = 25) -> Verdict:
    """Nondecreasing squared weights, checked on the head and decided by the tail rule where possible."""
    tail = w.tail
    upto = max(horizon, len(w.head) + 1)
    if isinstance(tail, RecursiveTail):
        upto = max(upto, len(w.head) + RECURSIVE_CHECK)
    values = []
    for n in range(upto):
        x, y = w.sq(n), w.sq(n + 1)
        values += [x, y]
        if sc.compare(x, y) > 0:
            return Verdict(False, True, n, certainty(x, y), f"x[{n}] > x[{n + 1}]")
    decided = not isinstance(tail, RecursiveTail)
    detail = "" if decided else f"checked through index {upto}"
    return Verdict(True, decided, None, certainty(*values), detail)


def backward_extend_1d(mu_m: ms.Measure1D, a0sq) -> ms.Measure1D:
    """Berger measure of ``shift(a0, ...)`` given the Berger measure of the rest."""
    a0sq = sc.coerce(a0sq)
    if not sc.eq(mu_m.mass, 1):
        raise PreconditionError("backward extension needs a probability measure")
    nm = ms.neg_moment(mu_m, 1)
    if not nm.finite:
        raise NotExtendableError("1/t is not integrable, no subnormal backward extension exists")
    norm = nm.value
    bound = 1 / norm
    if sc.compare(a0sq, bound) > 0:
        raise ThresholdError(f"squared weight {sc.format_decimal(a0sq, 12)} exceeds the bound "
                             f"{sc.format_decimal(bound, 12)}", bound)
    zero_mass = 1 - a0sq * norm
    extended = mu_m.times_power(-1).scaled(a0sq)
    if sc.sign(zero_mass) > 0:
        extended = extended + ms.dirac(Fraction(0), zero_mass)
    return extended


@dataclass(frozen=True)
class SubnormalityResult:
    verdict: Verdict
    measure: ms.Measure1D | None = None


def tail_measure(w: WeightSeq1D) -> tuple[ms.Measure1D | None, int]:
    """Berger measure of the tail and the number of head weights still to prepend."""
    tail = w.tail
    n = len(w.head)
    if isinstance(tail, ConstantTail):
        return ms.dirac(tail.c_sq), n
    if isinstance(tail, MeasureTail):
        m = tail.measure
        if tail.offset:
            m = ms.restrict_rescale(m, tail.offset)
        return m, n
    x0, x1, x2 = w.sq(n - 1), w.sq(n), w.sq(n + 1)
    if sc.eq(x0, x1) and sc.eq(x1, x2):
        return ms.dirac(x0), n - 1
    if not (sc.lt(x0, x1) and sc.lt(x1, x2)):
        return None, n - 1
    completion = ms.stampfli_completion(x0, x1, x2)
    if not (sc.eq(completion.phi0, tail.phi0) and sc.eq(completion.phi1, tail.phi1)):
        raise PreconditionError("recursive tail is inconsistent with its seed weights")
    return completion.measure, n - 1


def berger_measure_1d(w: WeightSeq1D) -> SubnormalityResult:
    """Decide subnormality by prepending the head to the tail measure one weight at a time."""
    try:
        m, remaining = tail_measure(w)
    except PreconditionError as exc:
        return SubnormalityResult(Verdict(None, False, detail=str(exc)))
    if m is None:
        hyp = is_hyponormal_1d(w)
        if hyp.holds is False:
            return SubnormalityResult(Verdict(False, True, hyp.witness, hyp.certainty, "not hyponormal"))
        return SubnormalityResult(Verdict(None, False, detail="tail is neither flat nor strictly increasing"))
    for i in reversed(range(remaining)):
        try:
            m = backward_extend_1d(m, w.head[i])
        except NotExtendableError:
            return SubnormalityResult(Verdict(False, True, i, certainty(w.head[i]), f"1/t not integrable at index {i}"))
        except ThresholdError as exc:
            return SubnormalityResult(
                Verdict(False, True, i, certainty(w.head[i], exc.bound), f"weight {i} exceeds the extension bound",
                        {"bound_sq": exc.bound})
            )
    cert = "exact" if m.all_exact() else certainty(sc.MP.mpf(0))
    return SubnormalityResult(Verdict(True, True, None, cert), m)


def seq_from_measure(m: ms.Measure1D, n: int = 20) -> WeightSeq1D:
    """Shift whose Berger measure is ``m``; moments are checked positive through order ``n``."""
    if not sc.eq(m.mass, 1):
        raise PreconditionError("Berger measures are probability measures")
    for k in range(n + 1):
        if sc.sign(ms.moment(m, k)) <= 0:
            raise DegenerateMeasureError(f"moment {k} vanishes")
    return WeightSeq1D((), MeasureTail(m, 0))


def verify_moments(w: WeightSeq1D, m: ms.Measure1D, K: int, rel_tol="1e-10") -> Verdict:
    """Compare ``γ_k(w)`` with the moments of ``m`` for ``k <= K``."""
    rel = sc.to_mpf(rel_tol)
    values = []
    for k in range(K + 1):
        g, mk = w.gamma(k), ms.moment(m, k)
        values += [g, mk]
        if sc.is_exact(g) and sc.is_exact(mk):
            ok = sc.exact_sign_of_difference(g, mk) == 0
        else:
            gn, mn = sc.to_mpf(g), sc.to_mpf(mk)
            ok = abs(gn - mn) <= rel * max(abs(gn), abs(mn))
        if not ok:
            return Verdict(False, True, k, certainty(g, mk), f"moment {k} differs",
                           {"gamma": g, "moment": mk})
    return Verdict(True, False, None, certainty(*values), f"checked through order {K}")


def eta_ext_of_restriction(a0sq, a1sq, a2sq):
    """Extremal weight of the restriction of the Stampfli completion through three squared weights."""
    completion = ms.stampfli_completion(a0sq, a1sq, a2sq)
    restricted = ms.restrict_rescale(completion.measure, 1)
    return ms.ext_value(restricted)
