"""Two-variable weighted shifts given by squared weight generators.

``alpha_sq(k1, k2)`` is the squared weight of ``T1`` at lattice point ``k``
(moving in the first coordinate), ``beta_sq(k1, k2)`` that of ``T2``.

Global verdicts need a :class:`Certificate`: a finite list of lattice points
whose six-point matrices exhaust every distinct matrix of the shift, plus
closed-form conditions standing in for infinite families of points.  Without
one, tests run on the triangle ``k1 + k2 <= N`` and are labeled as horizon
verdicts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import linalg
from . import measures as ms
from . import scalars as sc
from .errors import (
    BackwardExtensionError,
    DegenerateMeasureError,
    NotCommutingError,
    NotExtendableError,
    PreconditionError,
    UnsupportedError,
)
from .shifts1d import ConstantTail, WeightSeq1D, berger_measure_1d, is_hyponormal_1d
from .verdicts import Verdict, certainty, merge_certainty, scalar_json

DEFAULT_MONOMIALS = ((0, 0), (1, 0), (0, 1), (1, 1))
MAX_MATRIX = 8


@dataclass(frozen=True)
class Condition:
    """A named closed-form check; ``check`` returns a :class:`Verdict`."""

    name: str
    check: Callable[[], Verdict]


@dataclass(frozen=True)
class Certificate:
    points: tuple
    conditions: tuple = ()
    note: str = ""


@dataclass(frozen=True)
class Components:
    """Finite description of the one-variable shifts making up ``T1`` (rows) or ``T2`` (columns)."""

    seqs: tuple  # (label, WeightSeq1D) pairs
    conditions: tuple = ()
    exhaustive: bool = True


@dataclass
class BergerAttempt:
    status: str  # certified | not_subnormal | undecided
    measure: ms.Measure2D | None = None
    detail: str = ""
    data: dict = field(default_factory=dict)


class Shift2D:
    def __init__(
        self,
        alpha_sq,
        beta_sq,
        *,
        name: str = "shift",
        certificate: Certificate | None = None,
        rows: Components | None = None,
        cols: Components | None = None,
        berger: Callable[[], BergerAttempt] | None = None,
        monomial_sets=(DEFAULT_MONOMIALS,),
        spec: dict | None = None,
        params: dict | None = None,
    ):
        self._alpha = alpha_sq
        self._beta = beta_sq
        self._acache: dict = {}
        self._bcache: dict = {}
        self.name = name
        self.certificate = certificate
        self.rows = rows
        self.cols = cols
        self.berger = berger
        self.monomial_sets = tuple(tuple(m) for m in monomial_sets)
        self.spec = spec
        self.params = params or {}
        self._commuting_level = -1

    def alpha_sq(self, k1: int, k2: int):
        key = (k1, k2)
        if key not in self._acache:
            self._acache[key] = sc.coerce(self._alpha(k1, k2))
        return self._acache[key]

    def beta_sq(self, k1: int, k2: int):
        key = (k1, k2)
        if key not in self._bcache:
            self._bcache[key] = sc.coerce(self._beta(k1, k2))
        return self._bcache[key]

    def __repr__(self):
        return f"Shift2D({self.name})"


def lattice(level: int):
    """Lattice points with ``k1 + k2 <= level``, ordered by level then ``k1``."""
    for total in range(level + 1):
        for k1 in range(total + 1):
            yield (k1, total - k1)


def _points(s: Shift2D, horizon: int | None, mode: str):
    use_cert = s.certificate is not None and mode in ("auto", "certificate")
    if mode == "certificate" and s.certificate is None:
        raise PreconditionError("shift has no certificate")
    if use_cert:
        return list(s.certificate.points), True
    if horizon is None:
        raise PreconditionError("a horizon is needed for shifts without a certificate")
    return list(lattice(horizon)), False


# ---------------------------------------------------------------------------
# commutativity and moments
# ---------------------------------------------------------------------------

def _commutes_at(s: Shift2D, k):
    k1, k2 = k
    lhs = s.beta_sq(k1 + 1, k2) * s.alpha_sq(k1, k2)
    rhs = s.alpha_sq(k1, k2 + 1) * s.beta_sq(k1, k2)
    return sc.compare(lhs, rhs) == 0, lhs, rhs


def check_commuting(s: Shift2D, horizon: int | None = 25, mode: str = "auto") -> Verdict:
    """``β²(k+e1)·α²(k) = α²(k+e2)·β²(k)`` on the certificate points or the horizon triangle."""
    points, global_ = _points(s, horizon, mode)
    values = []
    for k in points:
        ok, lhs, rhs = _commutes_at(s, k)
        values += [lhs, rhs]
        if not ok:
            return Verdict(False, True, k, certainty(lhs, rhs), "commutativity fails", {"lhs": lhs, "rhs": rhs})
    detail = s.certificate.note if global_ and s.certificate.note else ("" if global_ else f"checked k1+k2 <= {horizon}")
    return Verdict(True, global_, None, certainty(*values), detail)


def _ensure_commuting(s: Shift2D, level: int):
    if s.certificate is not None:
        if s._commuting_level < 0:
            v = check_commuting(s, mode="certificate")
            if not v:
                raise NotCommutingError("shift does not commute", v.witness)
            s._commuting_level = 10**9
        return
    if level <= s._commuting_level:
        return
    for k in lattice(level):
        ok, _, _ = _commutes_at(s, k)
        if not ok:
            raise NotCommutingError(f"shift does not commute at {k}", k)
    s._commuting_level = level


def gamma2(s: Shift2D, k) -> object:
    """Moment ``γ_k``: along row 0 to ``(k1, 0)``, then up column ``k1``."""
    k1, k2 = k
    _ensure_commuting(s, max(k1 + k2 - 1, 0))
    g = Fraction(1)
    for i in range(k1):
        g = g * s.alpha_sq(i, 0)
    for j in range(k2):
        g = g * s.beta_sq(k1, j)
    return g


def gamma2_path(s: Shift2D, steps) -> object:
    """Moment along an explicit monotone path given as a string/list of ``"x"``/``"y"`` steps."""
    i = j = 0
    g = Fraction(1)
    for step in steps:
        if step == "x":
            g = g * s.alpha_sq(i, j)
            i += 1
        elif step == "y":
            g = g * s.beta_sq(i, j)
            j += 1
        else:
            raise PreconditionError(f"unknown step {step!r}")
    return g


# ---------------------------------------------------------------------------
# six-point test
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SixPointMatrix:
    """Diagonal entries and squared off-diagonal of the 2x2 six-point matrix."""

    d1: object
    d2: object
    off_sq: object

    @property
    def det(self):
        return self.d1 * self.d2 - self.off_sq

    def is_psd(self) -> bool:
        return sc.sign(self.d1) >= 0 and sc.sign(self.d2) >= 0 and sc.sign(self.det) >= 0


def six_point_matrix(s: Shift2D, k) -> SixPointMatrix:
    k1, k2 = k
    a, a1, a2 = s.alpha_sq(k1, k2), s.alpha_sq(k1 + 1, k2), s.alpha_sq(k1, k2 + 1)
    b, b1, b2 = s.beta_sq(k1, k2), s.beta_sq(k1 + 1, k2), s.beta_sq(k1, k2 + 1)
    # (α(k+e2)β(k+e1) - α(k)β(k))², the cross term rewritten by commutativity
    off_sq = a2 * b1 + a * b - 2 * a2 * b
    return SixPointMatrix(a1 - a, b2 - b, off_sq)


def six_point_test(s: Shift2D, horizon: int | None = 25, mode: str = "auto") -> Verdict:
    """Joint hyponormality: every six-point matrix is positive semidefinite."""
    points, global_ = _points(s, horizon, mode)
    values = []
    for k in points:
        m = six_point_matrix(s, k)
        values += [m.d1, m.d2, m.off_sq]
        if not m.is_psd():
            return Verdict(False, True, k, certainty(m.d1, m.d2, m.off_sq), "six-point matrix not PSD",
                           {"d1": m.d1, "d2": m.d2, "off_sq": m.off_sq, "det": m.det})
    cert = certainty(*values)
    if global_:
        for cond in s.certificate.conditions:
            v = cond.check()
            cert = merge_certainty(cert, v.certainty)
            if v.holds is not True:
                return Verdict(v.holds, v.holds is False, v.witness, cert, f"{cond.name}: {v.detail}".rstrip(": "), v.data)
        return Verdict(True, True, None, cert, s.certificate.note)
    return Verdict(True, False, None, cert, f"checked k1+k2 <= {horizon}")


# ---------------------------------------------------------------------------
# moment matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentMatrix:
    monomials: tuple
    entries: tuple

    def to_json(self):
        return {"monomials": [list(m) for m in self.monomials], "entries": scalar_json(self.entries)}


@dataclass(frozen=True)
class PsdResult:
    psd: bool
    det: object
    witness: tuple | None = None
    witness_value: object = None
    method: str = ""
    certainty: str = "exact"

    def to_json(self):
        out = {"psd": self.psd, "det": scalar_json(self.det), "method": self.method, "certainty": self.certainty}
        if self.witness is not None:
            out["witness_minor"] = list(self.witness)
            out["witness_value"] = scalar_json(self.witness_value)
        return out


def moment_matrix(s: Shift2D, monomials=DEFAULT_MONOMIALS) -> MomentMatrix:
    mons = tuple(tuple(m) for m in monomials)
    cache: dict = {}

    def g(k):
        if k not in cache:
            cache[k] = gamma2(s, k)
        return cache[k]

    entries = tuple(tuple(g((r[0] + c[0], r[1] + c[1])) for c in mons) for r in mons)
    return MomentMatrix(mons, entries)


def psd_test(m) -> PsdResult:
    """PSD test: principal minors for exact data, characteristic-polynomial signs otherwise."""
    entries = m.entries if isinstance(m, MomentMatrix) else m
    entries = [[sc.coerce(x) for x in row] for row in entries]
    n = len(entries)
    if n > MAX_MATRIX:
        raise UnsupportedError(f"matrices larger than {MAX_MATRIX}x{MAX_MATRIX} are not supported")
    for i in range(n):
        for j in range(i):
            if sc.compare(entries[i][j], entries[j][i]) != 0:
                raise PreconditionError("moment matrix is not symmetric")
    full = linalg.det(entries)
    exact = all(sc.is_exact(x) for row in entries for x in row)
    if exact:
        if all(sc.sign(d) > 0 for d in linalg.leading_minors(entries)):
            return PsdResult(True, full, method="leading minors")
        for rows, minor in linalg.principal_minors(entries):
            if sc.sign(minor) < 0:
                return PsdResult(False, full, rows, minor, "principal minors")
        return PsdResult(True, full, method="principal minors")
    eps = sc.get_tolerance()
    shifted = [[entries[i][j] + (eps if i == j else 0) for j in range(n)] for i in range(n)]
    cert = certainty(sc.MP.mpf(0))
    if all(sc.to_mpf(e) >= 0 for e in linalg.elementary_symmetric(shifted)):
        return PsdResult(True, full, method="characteristic polynomial", certainty=cert)
    worst = min(linalg.principal_minors(entries), key=lambda rm: sc.to_mpf(rm[1]))
    return PsdResult(False, full, worst[0], worst[1], "characteristic polynomial", cert)


# ---------------------------------------------------------------------------
# backward extension
# ---------------------------------------------------------------------------

def backward_extend_2d(mu_m: ms.Measure2D, b00sq, nu: ms.Measure1D) -> ms.Measure2D:
    """Berger measure of a shift from that of its restriction to ``k2 >= 1`` and of its zeroth row.

    Raises :class:`BackwardExtensionError` listing the failed conditions
    (``"integrability"``, ``"threshold"``, ``"marginal"``).
    """
    b00sq = sc.coerce(b00sq)
    if not sc.eq(mu_m.mass, 1) or not sc.eq(nu.mass, 1):
        raise PreconditionError("backward extension needs probability measures")
    norm = mu_m.neg_moment_y(1)
    if not norm.finite:
        raise BackwardExtensionError("1/t is not integrable against the restricted measure", ["integrability"])
    norm_v = norm.value
    failed = []
    if sc.compare(b00sq * norm_v, 1) > 0:
        failed.append("threshold")
    c = b00sq * norm_v
    ext = ms.extremal_measure(mu_m)
    scaled_marginal = ms.marginal_x(ext).scaled(c)
    order = ms.leq(scaled_marginal, nu)
    if order is False:
        failed.append("marginal")
    if failed:
        raise BackwardExtensionError("backward extension conditions fail: " + ", ".join(failed), failed)
    if order is None:
        raise BackwardExtensionError("marginal comparison is undecided", [], undecided=True)
    result = ext.scaled(c)
    rest = ms.subtract(nu, scaled_marginal)
    if not rest.is_zero:
        result = result + ms.Measure2D.product(rest, ms.dirac(Fraction(0)))
    return result


def verify_moments_2d(s: Shift2D, mu: ms.Measure2D, horizon: int, rel_tol="1e-10") -> Verdict:
    rel = sc.to_mpf(rel_tol)
    values = []
    for k in lattice(horizon):
        g, m = gamma2(s, k), mu.moment(*k)
        values += [g, m]
        if sc.is_exact(g) and sc.is_exact(m):
            ok = sc.exact_sign_of_difference(g, m) == 0
        else:
            gn, mn = sc.to_mpf(g), sc.to_mpf(m)
            ok = abs(gn - mn) <= rel * max(abs(gn), abs(mn))
        if not ok:
            return Verdict(False, True, k, certainty(g, m), "moment mismatch", {"gamma": g, "moment": m})
    return Verdict(True, False, None, certainty(*values), f"checked k1+k2 <= {horizon}")


# ---------------------------------------------------------------------------
# standard constructions
# ---------------------------------------------------------------------------

def _monotone_condition(label: str, w: WeightSeq1D) -> Condition:
    return Condition(f"{label} nondecreasing", lambda: is_hyponormal_1d(w))


def product_shift(w1: WeightSeq1D, w2: WeightSeq1D, name: str = "product") -> Shift2D:
    """``(W1 ⊗ I, I ⊗ W2)``."""
    cert = Certificate(
        ((0, 0),),
        (_monotone_condition("T1 weights", w1), _monotone_condition("T2 weights", w2)),
        "product structure: six-point matrices are diagonal",
    )

    def berger():
        r1, r2 = berger_measure_1d(w1), berger_measure_1d(w2)
        if r1.verdict.holds and r2.verdict.holds:
            return BergerAttempt("certified", ms.Measure2D.product(r1.measure, r2.measure), "product of Berger measures")
        if r1.verdict.holds is False or r2.verdict.holds is False:
            return BergerAttempt("not_subnormal", detail="a factor is not subnormal")
        return BergerAttempt("undecided", detail="a factor is undecided")

    spec = {"kind": "product", "params": {"t1": w1.to_json(), "t2": w2.to_json()}}
    return Shift2D(
        lambda i, j: w1.sq(i),
        lambda i, j: w2.sq(j),
        name=name,
        certificate=cert,
        rows=Components((("rows", w1),)),
        cols=Components((("columns", w2),)),
        berger=berger,
        spec=spec,
    )


def explicit_shift(alpha_grid, beta_grid, name: str = "explicit") -> Shift2D:
    """Shift from ``N x N`` grids (``grid[k1][k2]``) extended by repeating the last row and column."""
    n = len(alpha_grid)
    if n < 2 or any(len(r) != n for r in alpha_grid) or len(beta_grid) != n or any(len(r) != n for r in beta_grid):
        raise PreconditionError("explicit grids must both be N x N with N >= 2")
    A = [[sc.coerce(x) for x in row] for row in alpha_grid]
    B = [[sc.coerce(x) for x in row] for row in beta_grid]
    for grid in (A, B):
        for row in grid:
            for x in row:
                if sc.sign(x) <= 0:
                    raise PreconditionError("squared weights must be positive")

    def alpha(i, j):
        return A[min(i, n - 1)][min(j, n - 1)]

    def beta(i, j):
        return B[min(i, n - 1)][min(j, n - 1)]

    def row(j):
        return WeightSeq1D([alpha(i, j) for i in range(n - 1)], ConstantTail(alpha(n - 1, j)), validate=False)

    def col(i):
        return WeightSeq1D([beta(i, j) for j in range(n - 1)], ConstantTail(beta(i, n - 1)), validate=False)

    cert = Certificate(tuple(lattice_square(n)), (), "weights repeat beyond the grid")
    rows = Components(tuple((f"row {j}", row(j)) for j in range(n)))
    cols = Components(tuple((f"column {i}", col(i)) for i in range(n)))
    spec = {
        "kind": "explicit",
        "params": {
            "alpha": [[ms._enc(x) for x in r] for r in A],
            "beta": [[ms._enc(x) for x in r] for r in B],
            "alpha_tail": "repeat_last_row_col",
        },
    }
    s = Shift2D(alpha, beta, name=name, certificate=cert, rows=rows, cols=cols, spec=spec)
    s.berger = lambda: _explicit_chain(s, n, row)
    return s


def lattice_square(n: int):
    return sorted(itertools.product(range(n), repeat=2), key=lambda k: (k[0] + k[1], k[0]))


def _explicit_chain(s: Shift2D, n: int, row) -> BergerAttempt:
    """Backward-extend row by row, starting from the product structure above the grid."""
    c = s.beta_sq(0, n - 1)
    top = berger_measure_1d(row(n - 1))
    if top.verdict.holds is not True:
        return BergerAttempt("not_subnormal" if top.verdict.holds is False else "undecided",
                             detail=f"row {n - 1} is not subnormal")
    mu = ms.Measure2D.product(top.measure, ms.dirac(c))
    for j in range(n - 2, -1, -1):
        nu = berger_measure_1d(row(j))
        if nu.verdict.holds is not True:
            return BergerAttempt("not_subnormal" if nu.verdict.holds is False else "undecided",
                                 detail=f"row {j} is not subnormal")
        try:
            mu = backward_extend_2d(mu, s.beta_sq(0, j), nu.measure)
        except BackwardExtensionError as exc:
            status = "undecided" if exc.undecided else "not_subnormal"
            return BergerAttempt(status, detail=f"row {j}: {exc}", data={"failed": list(exc.failed)})
        except (NotExtendableError, DegenerateMeasureError) as exc:
            return BergerAttempt("not_subnormal", detail=f"row {j}: {exc}")
    return BergerAttempt("certified", mu, "row-by-row backward extension")


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def components_subnormal(comp: Components | None, label: str) -> Verdict:
    if comp is None:
        return Verdict(None, False, detail=f"no description of the {label} components")
    cert = "exact"
    for name, w in comp.seqs:
        r = berger_measure_1d(w)
        cert = merge_certainty(cert, r.verdict.certainty)
        if r.verdict.holds is not True:
            return Verdict(r.verdict.holds, r.verdict.decided, name, cert, f"{name}: {r.verdict.detail}".rstrip(": "),
                           r.verdict.data)
    for cond in comp.conditions:
        v = cond.check()
        cert = merge_certainty(cert, v.certainty)
        if v.holds is not True:
            return Verdict(v.holds, v.decided, cond.name, cert, v.detail, v.data)
    return Verdict(True, comp.exhaustive, None, cert)


@dataclass
class ClassificationReport:
    name: str
    commuting: Verdict
    t1_subnormal: Verdict | None = None
    t2_subnormal: Verdict | None = None
    jointly_hyponormal: Verdict | None = None
    subnormality: dict = field(default_factory=lambda: {"status": "undecided"})
    certainty: str = "exact"
    horizon: int = 25

    @property
    def status(self) -> str:
        return self.subnormality["status"]

    def to_json(self) -> dict:
        out = {
            "shift": self.name,
            "horizon": self.horizon,
            "certainty": self.certainty,
            "commuting": self.commuting.to_json(),
        }
        for key in ("t1_subnormal", "t2_subnormal", "jointly_hyponormal"):
            v = getattr(self, key)
            out[key] = v.to_json() if v is not None else {"holds": None, "detail": "skipped"}
        out["subnormality"] = scalar_json(self.subnormality)
        return out


def classify(s: Shift2D, horizon: int = 25, monomial_sets=None) -> ClassificationReport:
    """Commutativity, component subnormality, joint hyponormality and subnormality of ``s``."""
    commuting = check_commuting(s, horizon)
    report = ClassificationReport(s.name, commuting, horizon=horizon, certainty=commuting.certainty)
    if commuting.holds is not True:
        report.subnormality = {"status": "undecided", "detail": "not commuting; remaining checks skipped"}
        return report
    report.t1_subnormal = components_subnormal(s.rows, "T1")
    report.t2_subnormal = components_subnormal(s.cols, "T2")
    report.jointly_hyponormal = six_point_test(s, horizon)
    labels = [commuting.certainty, report.t1_subnormal.certainty, report.t2_subnormal.certainty,
              report.jointly_hyponormal.certainty]

    sub: dict = {"status": "undecided"}
    for key, v in (("t1", report.t1_subnormal), ("t2", report.t2_subnormal)):
        if v.holds is False and v.decided:
            sub = {"status": "obstructed", "kind": "component", "detail": f"{key.upper()} is not subnormal"}
            break
    if sub["status"] == "undecided":
        hyp = report.jointly_hyponormal
        if hyp.holds is False:
            sub = {"status": "obstructed", "kind": "not_hyponormal", "witness": list(hyp.witness)}
    if sub["status"] == "undecided":
        sets = monomial_sets if monomial_sets is not None else s.monomial_sets
        for mons in sets:
            result = psd_test(moment_matrix(s, mons))
            labels.append(result.certainty)
            if not result.psd:
                sub = {"status": "obstructed", "kind": "moment_matrix", "monomials": [list(m) for m in mons],
                       "det": result.det, "witness_minor": list(result.witness), "witness_value": result.witness_value}
                break
    if sub["status"] == "undecided" and s.berger is not None:
        attempt = s.berger()
        if attempt.status == "certified":
            check = verify_moments_2d(s, attempt.measure, horizon)
            labels.append(check.certainty)
            if check.holds:
                sub = {"status": "certified", "measure": attempt.measure, "detail": attempt.detail,
                       "moments_checked_to": horizon}
            else:
                sub = {"status": "undecided", "detail": f"measure fails moment check at {check.witness}"}
        elif attempt.status == "not_subnormal":
            sub = {"status": "obstructed", "kind": "backward_extension", "detail": attempt.detail}
            sub.update(attempt.data)
        else:
            sub = {"status": "undecided", "detail": attempt.detail}
    report.subnormality = sub
    report.certainty = merge_certainty(*labels)
    return report
