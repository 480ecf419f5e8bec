"""Parameterized two-variable shifts and their threshold formulas.

family1
    Weights ``ξ`` on every row except a corner weight ``a`` at the origin,
    weights ``η`` on every column except the corner ``b``.  Hyponormal
    exactly when ``a <= h``; a 4x4 moment matrix obstructs subnormality when
    ``a > s``.
family2
    Constant shifts with a perturbed zeroth row/column, parameters ``a, x, y``;
    the hyponormal and subnormal regions are bounded by closed forms in ``y``.
family3
    A symmetric shift built from a subnormal ``W_ξ`` with Berger measure ``ν``
    and its extremal weight ``ξ_e``; hyponormal, not subnormal when ``p < 0``.
family4
    ``W_ξ`` on the zeroth row, a rescaled zeroth column and unit weights
    elsewhere; hyponormal exactly when subnormal.

All weights are handled as squares.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import sympy

from . import measures as ms
from . import scalars as sc
from .errors import BackwardExtensionError, PreconditionError
from .shifts1d import (
    ConstantTail,
    MeasureTail,
    WeightSeq1D,
    backward_extend_1d,
    berger_measure_1d,
    is_hyponormal_1d,
)
from .shifts2d import (
    BergerAttempt,
    Certificate,
    Components,
    Condition,
    Shift2D,
    backward_extend_2d,
    explicit_shift,
    six_point_matrix,
    six_point_test,
)
from .verdicts import Verdict, certainty


def _cmp_verdict(lhs, rhs, strict: bool, detail: str) -> Verdict:
    c = sc.compare(lhs, rhs)
    ok = c < 0 if strict else c <= 0
    return Verdict(ok, True, None, certainty(lhs, rhs), "" if ok else detail, {"lhs": lhs, "rhs": rhs})


# ---------------------------------------------------------------------------
# family 1
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Family1Params:
    """Inputs of the first family.

    ``xi*_sq`` are the first three squared ``ξ`` weights, ``eta0_sq`` the
    squared corner weight of ``W_η`` and ``omega_m`` the Berger measure of
    ``shift(η1, η2, ...)``.
    """

    xi0_sq: object
    xi1_sq: object
    xi2_sq: object
    eta0_sq: object
    omega_m: ms.Measure1D

    @property
    def eta1_sq(self):
        return ms.moment(self.omega_m, 1) / ms.moment(self.omega_m, 0)

    @property
    def eta_e_sq(self):
        return ms.ext_value_sq(self.omega_m)

    @property
    def s2_sq(self):
        return self.xi0_sq * self.eta_e_sq / self.eta0_sq

    @cached_property
    def _completion(self) -> ms.StampfliCompletion:
        return ms.stampfli_completion(self.s2_sq, self.xi1_sq, self.xi2_sq)

    def xi_completion(self) -> ms.StampfliCompletion:
        """Two-atom measure of ``shift(s2, ξ1, ξ2, ...)``; its restriction has extremal weight ``s2``."""
        return self._completion

    def nu_m(self) -> ms.Measure1D:
        """Berger measure of ``shift(ξ1, ξ2, ...)``."""
        return ms.restrict_rescale(self.xi_completion().measure, 1)

    def xi_seq(self) -> WeightSeq1D:
        m = self.xi_completion().measure
        return WeightSeq1D((self.xi0_sq, self.xi1_sq, self.xi2_sq), MeasureTail(m, 3), validate=False)

    def eta_seq(self) -> WeightSeq1D:
        return WeightSeq1D((self.eta0_sq,), MeasureTail(self.omega_m, 0), validate=False)


def family1_threshold_values(xi0_sq, xi1_sq, eta0_sq, eta1_sq, eta_e_sq) -> dict:
    """The five threshold quantities from squared inputs.

    Works on any scalar kind, including sympy expressions for symbolic output.
    ``s_sq``, ``h_sq`` and ``s2_sq`` bound ``a²``; ``u`` and ``v`` bound ``η0²``.
    """
    X0, X1, E0, E1, Ee = xi0_sq, xi1_sq, eta0_sq, eta1_sq, eta_e_sq
    s_sq = X0 * X1 * E1 / (X1 * E0 + X0 * E1 - X0 * E0)
    h_sq = X0 * (X1 * E1 - X0 * E0) / (X0 * E1 + X1 * E0 - 2 * X0 * E0)
    s2_sq = X0 * Ee / E0
    u = X0 * Ee * E1 / (X1 * (E1 - Ee) + X0 * Ee)
    disc = (E1 - Ee) * (X1 * X1 * (E1 - Ee) + 4 * X0 * Ee * (X1 - X0))
    root = sympy.sqrt(disc) if isinstance(disc, sympy.Basic) else sc.sqrt(disc)
    v = (X1 * (E1 - Ee) + 2 * X0 * Ee - root) / (2 * X0)
    return {"s_sq": s_sq, "h_sq": h_sq, "s2_sq": s2_sq, "u": u, "v": v}


@dataclass(frozen=True)
class Family1Thresholds:
    s_sq: object
    h_sq: object
    s2_sq: object
    u: object
    v: object
    symbolic: dict = field(default_factory=dict)

    @property
    def s(self):
        return sc.sqrt(self.s_sq)

    @property
    def h(self):
        return sc.sqrt(self.h_sq)

    @property
    def s2(self):
        return sc.sqrt(self.s2_sq)

    def eta0_admissible(self, eta0_sq) -> bool:
        """``η0² < u`` (needed for ``s < s2``) and ``η0² <= v`` (needed for ``h <= s2``)."""
        return sc.lt(eta0_sq, self.u) and sc.le(eta0_sq, self.v)


def family1_thresholds(p: Family1Params) -> Family1Thresholds:
    if not (sc.lt(p.xi0_sq, p.xi1_sq) and sc.lt(p.eta0_sq, p.eta1_sq)):
        raise PreconditionError("need ξ0 < ξ1 and η0 < η1")
    values = family1_threshold_values(p.xi0_sq, p.xi1_sq, p.eta0_sq, p.eta1_sq, p.eta_e_sq)
    symbolic = {}
    nm = ms.neg_moment(p.omega_m, 1)
    # closed forms are only worth showing when logarithms appear
    if nm.finite and not nm.is_exact and all(isinstance(x, Fraction) for x in (p.xi0_sq, p.xi1_sq, p.eta0_sq, p.eta1_sq)):
        sym = family1_threshold_values(
            *(sc.to_sympy(x) for x in (p.xi0_sq, p.xi1_sq, p.eta0_sq, p.eta1_sq)), 1 / nm.symbolic
        )
        symbolic = {k: sympy.simplify(v) for k, v in sym.items()}
        symbolic.update(
            s=sympy.sqrt(symbolic["s_sq"]), h=sympy.sqrt(symbolic["h_sq"]), s2=sympy.sqrt(symbolic["s2_sq"])
        )
    return Family1Thresholds(symbolic=symbolic, **values)


def family1_conditions(p: Family1Params, a_sq) -> dict:
    """The four numbered requirements on ``a`` (as Verdicts on squared values).

    1 hyponormality ``a <= h``; 2 non-subnormality ``a > s``;
    3 subnormality of ``T1``: ``a <= ξ_ext(ν_M)``; 4 subnormality of ``T2``: ``a <= s2``.
    """
    th = family1_thresholds(p)
    ext_nu = ms.ext_value_sq(p.nu_m())
    return {
        1: _cmp_verdict(a_sq, th.h_sq, False, "a exceeds h"),
        2: _cmp_verdict(th.s_sq, a_sq, True, "a does not exceed s"),
        3: _cmp_verdict(a_sq, ext_nu, False, "a exceeds the extremal weight of ν_M"),
        4: _cmp_verdict(a_sq, th.s2_sq, False, "a exceeds s2"),
    }


def family1_build(p: Family1Params, a_sq, b_sq=None, *, strict: bool = True) -> Shift2D:
    """Shift with corner weights ``(a, b)`` and ``b = a·η0/ξ0`` unless ``b_sq`` is given.

    With ``strict`` the component-subnormality requirements (3 and 4 of
    :func:`family1_conditions`) must hold.
    """
    a_sq = sc.coerce(a_sq)
    b_sq = a_sq * p.eta0_sq / p.xi0_sq if b_sq is None else sc.coerce(b_sq)
    if strict:
        conds = family1_conditions(p, a_sq)
        failed = [n for n in (3, 4) if not conds[n]]
        if failed:
            raise PreconditionError(f"family1 requirement(s) {failed} fail for this a")
    completion = p.xi_completion()
    xi = p.xi_seq()
    eta = p.eta_seq()
    row0 = WeightSeq1D((a_sq,) + xi.head[1:], xi.tail, validate=False)
    col0 = WeightSeq1D((b_sq,), eta.tail, validate=False)

    def alpha(i, j):
        return a_sq if (i, j) == (0, 0) else xi.sq(i)

    def beta(i, j):
        return b_sq if (i, j) == (0, 0) else eta.sq(j)

    cert = Certificate(
        ((0, 0), (1, 0), (0, 1), (1, 1)),
        (
            Condition("ξ weights nondecreasing", lambda: is_hyponormal_1d(xi)),
            Condition("η weights nondecreasing", lambda: is_hyponormal_1d(eta)),
        ),
        "only the origin breaks the product structure",
    )

    def berger():
        xi_measure = berger_measure_1d(xi)
        row_measure = berger_measure_1d(row0)
        if not (xi_measure.verdict.holds and row_measure.verdict.holds):
            return BergerAttempt("not_subnormal", detail="a row is not subnormal")
        mu_m = ms.Measure2D.product(xi_measure.measure, p.omega_m)
        return _try_extension(mu_m, b_sq, row_measure.measure)

    s = Shift2D(
        alpha,
        beta,
        name="family1",
        certificate=cert,
        rows=Components((("row 0", row0), ("rows j>=1", xi))),
        cols=Components((("column 0", col0), ("columns i>=1", eta))),
        berger=berger,
        params={"a_sq": a_sq, "b_sq": b_sq, "xi3_sq": xi.sq(3)},
    )
    return s


def _try_extension(mu_m, b00sq, nu) -> BergerAttempt:
    try:
        mu = backward_extend_2d(mu_m, b00sq, nu)
    except BackwardExtensionError as exc:
        status = "undecided" if exc.undecided else "not_subnormal"
        return BergerAttempt(status, detail=str(exc), data={"failed": list(exc.failed)})
    return BergerAttempt("certified", mu, "backward extension of the restriction to k2 >= 1")


def family1_moment_det(p: Family1Params, a_sq, b_sq=None):
    """Determinant of the moment matrix on ``1, x, y, xy``."""
    from .shifts2d import moment_matrix
    from .linalg import det

    s = family1_build(p, a_sq, b_sq, strict=False)
    return det(moment_matrix(s).entries)


# ---------------------------------------------------------------------------
# family 2
# ---------------------------------------------------------------------------

LABELS = ("invalid", "not_hyponormal", "hyponormal_not_subnormal", "subnormal")


@dataclass(frozen=True)
class Family2Bounds:
    hyp: object
    sub: object
    ratio: object

    def ordering_holds(self) -> bool:
        """``sub < hyp < x/a``."""
        return sc.lt(self.sub, self.hyp) and sc.lt(self.hyp, self.ratio)


def family2_thresholds(a, x) -> Family2Bounds:
    """Largest ``y`` keeping the shift hyponormal, resp. subnormal, and the ratio bound ``x/a``."""
    a, x = sc.coerce(a), sc.coerce(x)
    if not (sc.sign(a) > 0 and sc.sign(x) > 0 and sc.lt(a, 1) and sc.lt(x, 1)):
        raise PreconditionError("need 0 < a, x < 1")
    a2, x2 = a * a, x * x
    ratio = x / a
    hyp = sc.smin(ratio, x * sc.sqrt((1 - x2) / (x2 - 2 * a2 * x2 + a2 * a2)))
    sub = sc.smin(ratio, sc.sqrt((1 - x2) / (1 - a2)))
    return Family2Bounds(hyp, sub, ratio)


def family2_in_domain(a, x, y) -> bool:
    a, x, y = sc.coerce(a), sc.coerce(x), sc.coerce(y)
    if not all(sc.sign(v) > 0 for v in (a, x, y)):
        return False
    return sc.lt(x, 1) and sc.lt(y, 1) and sc.lt(a * y / x, 1) and sc.lt(a, 1)


def family2_label(a, x, y, bounds: Family2Bounds | None = None) -> str:
    """Region label from the closed forms; the band is ``sub < y <= hyp``."""
    if not family2_in_domain(a, x, y):
        return "invalid"
    b = bounds or family2_thresholds(a, x)
    y = sc.coerce(y)
    if sc.compare(y, b.hyp) > 0:
        return "not_hyponormal"
    if sc.compare(y, b.sub) > 0:
        return "hyponormal_not_subnormal"
    return "subnormal"


def family2_build(a, x, y) -> Shift2D:
    a, x, y = sc.coerce(a), sc.coerce(x), sc.coerce(y)
    if not family2_in_domain(a, x, y):
        raise PreconditionError("family2 needs 0 < a, x, y and max{y, x, ay/x} < 1")
    a2, x2, y2 = a * a, x * x, y * y
    s = explicit_shift([[x2, a2], [1, 1]], [[y2, 1], [a2 * y2 / x2, 1]], name="family2")
    s.spec = {"kind": "family2", "params": {"a": ms._enc(a), "x": ms._enc(x), "y": ms._enc(y)}}
    s.params = {"a": a, "x": x, "y": y}
    return s


def family2_extension_data(a, x, y):
    """``(μ_M, y², ν)`` for the backward extension from the rows ``k2 >= 1``."""
    a, x, y = sc.coerce(a), sc.coerce(x), sc.coerce(y)
    mu_m = ms.Measure2D.product(ms.Measure1D([(Fraction(0), 1 - a * a), (Fraction(1), a * a)]), ms.dirac(1))
    nu = ms.Measure1D([(Fraction(0), 1 - x * x), (Fraction(1), x * x)])
    return mu_m, y * y, nu


def family2_shift_label(a, x, y) -> str:
    """Region label from shift-level tests: six-point test and backward extension."""
    if not family2_in_domain(a, x, y):
        return "invalid"
    s = family2_build(a, x, y)
    if not six_point_test(s):
        return "not_hyponormal"
    try:
        backward_extend_2d(*family2_extension_data(a, x, y))
    except BackwardExtensionError:
        return "hyponormal_not_subnormal"
    return "subnormal"


def fixed(x, digits: int = 12) -> str:
    """Decimal string with exactly ``digits`` places."""
    if isinstance(x, Fraction):
        q = round(x * 10**digits)
    else:
        q = int(sc.MP.nint(sc.to_mpf(x) * 10**digits))
    sign = "-" if q < 0 else ""
    q = abs(q)
    return f"{sign}{q // 10**digits}.{q % 10**digits:0{digits}d}"


def _grid(n: int, hi=Fraction(1)):
    return [hi * Fraction(2 * i + 1, 2 * n) for i in range(n)]


def _scan_column(args):
    a, x, ys = args
    bounds = family2_thresholds(a, x) if sc.lt(x, 1) else None
    return [family2_label(a, x, y, bounds) for y in ys]


@dataclass
class ScanResult:
    a: object
    xs: list
    ys: list
    labels: list  # labels[i][j] for (xs[i], ys[j])
    checked: list = field(default_factory=list)
    disagreements: list = field(default_factory=list)
    ordering_failures: list = field(default_factory=list)

    def rows(self):
        for i, x in enumerate(self.xs):
            for j, y in enumerate(self.ys):
                yield x, y, self.labels[i][j]

    def counts(self) -> dict:
        out = {k: 0 for k in LABELS}
        for _, _, label in self.rows():
            out[label] += 1
        return out

    def band_fraction(self):
        total = len(self.xs) * len(self.ys)
        return Fraction(self.counts()["hyponormal_not_subnormal"], total) if total else Fraction(0)

    def to_csv(self) -> str:
        lines = ["x,y,label"]
        lines += [f"{fixed(x)},{fixed(y)},{label}" for x, y, label in self.rows()]
        return "\n".join(lines) + "\n"


def family2_region_scan(a, n: int = 400, ny: int | None = None, y_max=Fraction(1), *, sample_fraction=Fraction(1, 100),
                        seed: int = 0, jobs: int = 1) -> ScanResult:
    """Label a midpoint grid on ``(0,1) x (0, y_max)`` and cross-check a random subsample at shift level."""
    a = sc.coerce(a)
    ny = ny or n
    xs, ys = _grid(n), _grid(ny, sc.coerce(y_max))
    tasks = [(a, x, ys) for x in xs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            labels = list(pool.map(_scan_column, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        labels = [_scan_column(t) for t in tasks]
    result = ScanResult(a, xs, ys, labels)

    for x in xs:
        if sc.compare(x, a) > 0 and not family2_thresholds(a, x).ordering_holds():
            result.ordering_failures.append(x)

    total = n * ny
    k = max(1, math.ceil(total * sample_fraction)) if sample_fraction else 0
    rng = random.Random(seed)
    for idx in sorted(rng.sample(range(total), min(k, total))):
        i, j = divmod(idx, ny)
        x, y = xs[i], ys[j]
        shift_level = family2_shift_label(a, x, y)
        result.checked.append((x, y, labels[i][j], shift_level))
        if shift_level != labels[i][j]:
            result.disagreements.append((x, y, labels[i][j], shift_level))
    return result


# ---------------------------------------------------------------------------
# family 3
# ---------------------------------------------------------------------------

def family3_p(xi_e_sq, xi1_sq, a_sq, b_sq):
    """The polynomial whose sign decides the 4x4 moment-matrix obstruction."""
    E, X, A, B = xi_e_sq, xi1_sq, a_sq, b_sq
    return E * X * X + 4 * A * B * X - B * X * X - A * B * E - A * B * B - 2 * A * X * X


def family3_p_factored(xi_e_sq, xi1_sq, a_sq):
    """Value of :func:`family3_p` when ``b² = 2a² - ξ_e²``."""
    return -2 * (xi1_sq - a_sq) ** 2 * (2 * a_sq - xi_e_sq)


def family3_det(xi_e_sq, xi1_sq, a_sq, b_sq):
    return a_sq**3 * b_sq * (xi_e_sq - b_sq) * family3_p(xi_e_sq, xi1_sq, a_sq, b_sq)


@dataclass(frozen=True, eq=False)
class Family3Data:
    nu: ms.Measure1D
    a_sq: object
    b_sq: object
    xi_e_sq: object
    xi1_sq: object
    neg1: object
    neg2: object
    conditions: dict

    @property
    def p(self):
        return family3_p(self.xi_e_sq, self.xi1_sq, self.a_sq, self.b_sq)

    @property
    def failed(self):
        return [n for n, v in self.conditions.items() if v.holds is not True]


def family3_conditions(nu: ms.Measure1D, a_sq, b_sq=None, check_terms: int = 50) -> Family3Data:
    """Evaluate the seven admissibility conditions (numbered 1 to 7)."""
    a_sq = sc.coerce(a_sq)
    neg1, neg2 = ms.neg_moment(nu, 1), ms.neg_moment(nu, 2)
    xi_e_sq = ms.ext_value_sq(nu)
    b_sq = 2 * a_sq - xi_e_sq if b_sq is None else sc.coerce(b_sq)
    w = WeightSeq1D((), MeasureTail(nu, 0), validate=False)
    conds = {}
    weights = w.weights(check_terms + 1)
    increasing = all(sc.lt(u, v) for u, v in zip(weights, weights[1:]))
    conds[1] = Verdict(increasing and sc.eq(nu.support_max(), 1), False, None, certainty(*weights),
                       "" if increasing else "weights not strictly increasing to 1")
    conds[2] = Verdict(sc.eq(nu.mass, 1), True, None, certainty(nu.mass), "probability measure")
    conds[3] = Verdict(neg2.finite, True, None, "exact", "" if neg2.finite else "1/s² not integrable")
    conds[4] = Verdict(neg1.finite and sc.sign(xi_e_sq) > 0, True, None, certainty(xi_e_sq))
    if neg2.finite and sc.sign(xi_e_sq) > 0:
        conds[5] = _cmp_verdict(a_sq * xi_e_sq * neg2.value, 1, False, "a too large for the zeroth row")
    else:
        conds[5] = Verdict(False, True, detail="undefined without condition 3")
    if sc.sign(b_sq) <= 0:
        conds[6] = Verdict(False, True, detail="b² must be positive")
    else:
        conds[6] = _cmp_verdict(b_sq, xi_e_sq * xi_e_sq, False, "b exceeds ξ_e²")
    conds[7] = _cmp_verdict(2 * a_sq, b_sq + xi_e_sq, False, "2a² exceeds b² + ξ_e²")
    return Family3Data(nu, a_sq, b_sq, xi_e_sq, weights[0], neg1, neg2, conds)


def family3_window(nu: ms.Measure1D, a_sq) -> Verdict:
    """``ξ_e²/2 < a² <= (ξ_e² + ξ_e⁴)/2`` and ``a² <= 1/(ξ_e² ∫ s⁻² dν)``."""
    a_sq = sc.coerce(a_sq)
    e = ms.ext_value_sq(nu)
    neg2 = ms.neg_moment(nu, 2)
    if not neg2.finite:
        return Verdict(False, True, detail="1/s² not integrable")
    checks = [
        _cmp_verdict(e / 2, a_sq, True, "a² <= ξ_e²/2"),
        _cmp_verdict(a_sq, (e + e * e) / 2, False, "a² > (ξ_e² + ξ_e⁴)/2"),
        _cmp_verdict(a_sq * e * neg2.value, 1, False, "a² > 1/(ξ_e² ∫ s⁻²)"),
    ]
    bad = [c for c in checks if not c]
    cert = certainty(a_sq, e, neg2.value)
    return Verdict(not bad, True, None, cert, "; ".join(c.detail for c in bad))


def family3_build(nu: ms.Measure1D, a_sq, b_sq=None, *, strict: bool = True) -> Shift2D:
    """Symmetric shift with corner ``a``, ``b`` and rows built from ``W_ξ``; ``b² = 2a² - ξ_e²`` by default."""
    data = family3_conditions(nu, a_sq, b_sq)
    if strict and data.failed:
        raise PreconditionError(f"family3 condition(s) {data.failed} fail")
    a_sq, b_sq, e = data.a_sq, data.b_sq, data.xi_e_sq
    w = WeightSeq1D((), MeasureTail(nu, 0), validate=False)

    def xi(n):  # ξ_n², n >= 1
        return w.sq(n - 1)

    def alpha(i, j):
        if j == 0:
            return a_sq if i == 0 else (e if i == 1 else xi(i - 1))
        if i >= 1:
            return xi(i)
        return b_sq if j == 1 else xi(j - 1) * b_sq / e

    def beta(i, j):
        return alpha(j, i)

    sup = nu.support_max()
    case3 = Condition(
        "b² sup ξ² <= ξ1² ξ_e² (all points (n+1, 0))",
        lambda: _cmp_verdict(b_sq * sup, xi(1) * e, False, "fails for large n"),
    )
    cert = Certificate(
        tuple([(0, 0), (1, 0), (0, 1), (1, 1)] + [p for n in range(1, 4) for p in ((n + 1, 0), (0, n + 1))]),
        (Condition("ξ weights nondecreasing", lambda: is_hyponormal_1d(w)), case3),
        "points (i,0), (0,j) carry every non-product six-point matrix",
    )
    row0 = WeightSeq1D((a_sq, e), MeasureTail(nu, 0), validate=False)
    row1 = WeightSeq1D((b_sq,), MeasureTail(nu, 0), validate=False)
    later = tuple((f"row {j}", WeightSeq1D((alpha(0, j),), MeasureTail(nu, 0), validate=False)) for j in range(2, 5))
    rows_cond = Condition(
        "rows j>=2: b² sup ξ² <= ξ_e⁴",
        lambda: _cmp_verdict(b_sq * sup, e * e, False, "some row j >= 2 exceeds its extension bound"),
    )
    comps = Components((("row 0", row0), ("row 1", row1)) + later, (rows_cond,))
    s = Shift2D(alpha, beta, name="family3", certificate=cert, rows=comps, cols=comps)
    s.params = {"a_sq": a_sq, "b_sq": b_sq, "xi_e_sq": e, "p": data.p, "failed_conditions": data.failed}
    s.spec = {"kind": "family3", "params": {"nu": nu.to_json(), "a_sq": ms._enc(a_sq), "b_sq": ms._enc(b_sq)}}
    return s


# ---------------------------------------------------------------------------
# family 4
# ---------------------------------------------------------------------------

def family4_build(nu: ms.Measure1D, y_sq, horizon: int = 50, *, strict: bool = True) -> Shift2D:
    """``W_ξ`` (Berger measure ``ν``) on row 0, ``y²/γ_n`` on column 0 at height 0, unit weights elsewhere."""
    y_sq = sc.coerce(y_sq)
    if not sc.eq(nu.mass, 1):
        raise PreconditionError("ν must be a probability measure")
    if sc.compare(nu.support_max(), 1) > 0:
        raise PreconditionError("W_ξ must be contractive (support in [0, 1])")
    w = WeightSeq1D((), MeasureTail(nu, 0), validate=False)
    if strict:
        low = sc.smin(*(w.gamma(n) for n in range(horizon + 1)))
        if sc.compare(y_sq, low) > 0:
            raise PreconditionError("y² exceeds min γ_n: T2 is not subnormal")

    def alpha(i, j):
        return w.sq(i) if j == 0 else Fraction(1)

    def beta(i, j):
        return y_sq / w.gamma(i) if j == 0 else Fraction(1)

    rho = ms.atom_at(nu, 1)
    cols_cond = Condition("y² <= inf γ_n = ν({1})", lambda: _cmp_verdict(y_sq, rho, False, "y² exceeds ν({1})"))
    rows = Components((("row 0", w), ("rows j>=1", WeightSeq1D((), ConstantTail(Fraction(1)), validate=False))))
    cols = Components((("column 0", WeightSeq1D((y_sq,), ConstantTail(Fraction(1)), validate=False)),), (cols_cond,))

    def berger():
        mu_m = ms.Measure2D.product(ms.dirac(1), ms.dirac(1))
        return _try_extension(mu_m, y_sq, nu)

    s = Shift2D(alpha, beta, name="family4", rows=rows, cols=cols, berger=berger)
    s.params = {"y_sq": y_sq, "rho": rho}
    s.spec = {"kind": "family4", "params": {"nu": nu.to_json(), "y_sq": ms._enc(y_sq)}}
    return s


def family4_hyponormality_bound(nu: ms.Measure1D, n: int):
    """Largest ``y²`` for which the six-point matrix at ``(n, 0)`` is PSD."""
    w = WeightSeq1D((), MeasureTail(nu, 0), validate=False)
    x0, x1, g = w.sq(n), w.sq(n + 1), w.gamma(n)
    den = x1 + 1 / x0 - 2
    if sc.sign(den) == 0:
        return g
    return (x1 - x0) / den * g


@dataclass
class Family4Check:
    hyponormal: Verdict
    rho: object
    subnormal: bool
    certificate: object
    horizon_decides: bool
    agrees: bool | None

    def to_json(self):
        from .verdicts import scalar_json

        return {
            "hyponormal_to_horizon": self.hyponormal.to_json(),
            "rho": scalar_json(self.rho),
            "subnormal": self.subnormal,
            "horizon_decides": self.horizon_decides,
            "agrees": self.agrees,
        }


def family4_equivalence_check(nu: ms.Measure1D, y_sq, horizon: int = 50) -> Family4Check:
    """Compare the six-point test on ``(n, 0)``, ``n <= N``, with the criterion ``y² <= ν({1})``."""
    s = family4_build(nu, y_sq, horizon, strict=False)
    y_sq = sc.coerce(y_sq)
    hyp = Verdict(True, False, None, "exact", f"checked (n, 0) for n <= {horizon}")
    values = []
    for n in range(horizon + 1):
        m = six_point_matrix(s, (n, 0))
        values += [m.d1, m.d2, m.off_sq]
        if not m.is_psd():
            hyp = Verdict(False, True, (n, 0), certainty(m.d1, m.d2, m.off_sq), "six-point matrix not PSD")
            break
    else:
        hyp = Verdict(True, False, None, certainty(*values), f"checked (n, 0) for n <= {horizon}")
    rho = ms.atom_at(nu, 1)
    attempt = s.berger()
    subnormal = attempt.status == "certified"
    if subnormal != (sc.compare(y_sq, rho) <= 0):
        raise AssertionError("backward extension disagrees with the atom criterion")
    decides = hyp.holds is False or subnormal
    agrees = (hyp.holds is True) == subnormal if decides else None
    return Family4Check(hyp, rho, subnormal, attempt.measure, decides, agrees)
