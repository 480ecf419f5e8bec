"""Registry of reference instances and the numbers each one must reproduce.

Every instance is rebuilt from hard-coded parameters, classified, and
compared quantity by quantity.  Decimal expectations carry the rounding of
their source (three decimals unless noted) and are compared with the
tolerance ``ROUNDED``; closed-form expectations are compared exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import families as fa
from . import measures as ms
from . import scalars as sc
from .linalg import det
from .shifts2d import classify, moment_matrix, six_point_matrix, six_point_test
from .verdicts import scalar_json

ROUNDED = "5e-3"


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    tolerance: object = None  # None: exact, or the global tolerance for numeric values

    @property
    def ok(self) -> bool:
        if isinstance(self.expected, (bool, str)) or self.expected is None:
            return self.actual == self.expected
        if self.actual is None:
            return False
        if self.tolerance is None:
            if sc.is_exact(self.expected) and sc.is_exact(self.actual):
                return sc.compare(self.expected, self.actual) == 0
            return abs(sc.to_mpf(self.actual) - sc.to_mpf(self.expected)) <= sc.get_tolerance()
        return abs(sc.to_mpf(self.actual) - sc.to_mpf(self.expected)) <= sc.to_mpf(self.tolerance)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "expected": scalar_json(self.expected),
            "actual": scalar_json(self.actual),
            "tolerance": "exact" if self.tolerance is None else str(self.tolerance),
            "ok": self.ok,
        }


@dataclass
class InstanceReport:
    name: str
    description: str
    checks: list = field(default_factory=list)
    classification: dict = field(default_factory=dict)
    symbolic: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failed(self) -> list:
        return [c.name for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        out = {
            "instance": self.name,
            "description": self.description,
            "ok": self.ok,
            "failed": self.failed,
            "checks": [c.to_json() for c in self.checks],
            "classification": self.classification,
        }
        if self.symbolic:
            out["symbolic"] = self.symbolic
        return out


def _p(value, mode):
    return sc.parse_scalar(value, mode)


def _classification_checks(report, expected_status, hyp=True) -> list:
    return [
        Check("commuting", True, report.commuting.holds),
        Check("T1 subnormal", True, report.t1_subnormal.holds if report.t1_subnormal else None),
        Check("T2 subnormal", True, report.t2_subnormal.holds if report.t2_subnormal else None),
        Check("jointly hyponormal", hyp, report.jointly_hyponormal.holds if report.jointly_hyponormal else None),
        Check("subnormality status", expected_status, report.status),
    ]


# ---------------------------------------------------------------------------
# log counterexample: ω_M = 2 dt on [1/2, 1]
# ---------------------------------------------------------------------------

EXAMPLE13 = {
    "xi0_sq": "1/4",
    "xi1_sq": "1",
    "xi2_sq": "2",
    "eta0_sq": "1/4",
    "omega_m": {"atoms": [], "ac": [{"interval": ["1/2", "1"], "poly": ["2"]}]},
    "a": "0.72",
}
# reference values, rounded to three decimals
EXAMPLE13_ROUNDED = {
    "u": "0.647",
    "v": "0.523",
    "s2": "0.849",
    "eta_e": "0.849",
    "xi3": "1.985",
    "atom0": "0.659",
    "atom1": "3.93",
    "density0": "0.981",
    "density1": "0.019",
    "inv_t_norm": "1.494",
    "ext": "0.818",
}
# reference closed forms
EXAMPLE13_CLOSED = {
    "s": "sqrt(2)/2",
    "h": "sqrt(11/5)/2",
    "u": "1/(4*(2*ln(2)-1))",
    "v": "(6*ln(2)-2-sqrt(2)*sqrt(3*ln(2)-2)*sqrt(6*ln(2)-1))/(4*ln(2))",
    "phi0": "1/(1-2*ln(2))",
    "phi1": "(1-4*ln(2))/(1-2*ln(2))",
    "xi3": "sqrt((16*ln(2)-5)/(2*ln(2)-1))/2",
}


def example13(mode: str = "exact", horizon: int = 25) -> InstanceReport:
    d = EXAMPLE13
    omega = ms.Measure1D.from_json(d["omega_m"], mode)
    p = fa.Family1Params(_p(d["xi0_sq"], mode), _p(d["xi1_sq"], mode), _p(d["xi2_sq"], mode),
                         _p(d["eta0_sq"], mode), omega)
    th = fa.family1_thresholds(p)
    a = _p(d["a"], mode)
    comp = p.xi_completion()
    two_atom = comp.measure
    xi3 = sc.sqrt(p.xi_seq().sq(3))
    r = ROUNDED
    exp = {k: _p(v, "numeric") for k, v in EXAMPLE13_ROUNDED.items()}
    closed = {k: _p(v, "exact") for k, v in EXAMPLE13_CLOSED.items()}
    checks = [
        Check("u", exp["u"], th.u, r),
        Check("v", exp["v"], th.v, r),
        Check("u closed form", closed["u"], th.u),
        Check("v closed form", closed["v"], th.v),
        Check("s", closed["s"], th.s),
        Check("h", closed["h"], th.h),
        Check("s2", exp["s2"], th.s2, r),
        Check("eta_e", exp["eta_e"], ms.ext_value(omega), r),
        Check("s2 equals eta_e", ms.ext_value(omega), th.s2),
        Check("phi0", closed["phi0"], comp.phi0),
        Check("phi1", closed["phi1"], comp.phi1),
        Check("completion atom t0", exp["atom0"], comp.atoms[0], r),
        Check("completion atom t1", exp["atom1"], comp.atoms[1], r),
        Check("completion density rho0", exp["density0"], comp.densities[0], r),
        Check("completion density rho1", exp["density1"], comp.densities[1], r),
        Check("||1/t|| of the two-atom measure", exp["inv_t_norm"], ms.neg_moment(two_atom, 1).value, r),
        Check("extremal weight of the two-atom measure", exp["ext"], ms.ext_value(two_atom), r),
        Check("extremal weight of nu_M equals s2", th.s2, ms.ext_value(p.nu_m())),
        Check("xi3", exp["xi3"], xi3, r),
        Check("xi3 closed form", closed["xi3"], xi3),
        Check("a <= h", True, sc.le(a, th.h)),
        Check("a > s", True, sc.lt(th.s, a)),
    ]
    s = fa.family1_build(p, a * a)
    report = classify(s, horizon)
    checks += _classification_checks(report, "obstructed")
    checks.append(Check("obstruction kind", "moment_matrix", report.subnormality.get("kind")))
    symbolic = {k: str(v) for k, v in th.symbolic.items()}
    return InstanceReport("example13", "first family, ω_M = 2dt on [1/2, 1], a = 0.72", checks,
                          report.to_json(), symbolic)


# ---------------------------------------------------------------------------
# symmetric counterexample: ν = 3 s² ds on [0, 1]
# ---------------------------------------------------------------------------

COROLLARY20 = {
    "nu": {"atoms": [], "ac": [{"interval": ["0", "1"], "poly": ["0", "0", "3"]}]},
    "a_sq": "1/2",
    "expected": {
        "xi_e_sq": "2/3",
        "neg2": "3",
        "neg1": "3/2",
        "b_sq": "1/3",
        "xi1_sq": "3/4",
        "p": "-1/24",
        "det": "-1/1728",
    },
}


def corollary20(mode: str = "exact", horizon: int = 25) -> InstanceReport:
    d = COROLLARY20
    nu = ms.Measure1D.from_json(d["nu"], mode)
    a_sq = _p(d["a_sq"], mode)
    exp = {k: _p(v, "exact") for k, v in d["expected"].items()}
    data = fa.family3_conditions(nu, a_sq)
    s = fa.family3_build(nu, a_sq)
    e, x1, b = data.xi_e_sq, data.xi1_sq, data.b_sq
    hyp_all = six_point_test(s, horizon, mode="horizon")
    reps = [six_point_matrix(s, k).is_psd() for k in s.certificate.points]
    checks = [
        Check("xi_e^2", exp["xi_e_sq"], e),
        Check("integral of 1/s^2", exp["neg2"], data.neg2.value),
        Check("integral of 1/s", exp["neg1"], data.neg1.value),
        Check("b^2", exp["b_sq"], b),
        Check("xi_1^2", exp["xi1_sq"], x1),
        Check("p (six-term formula)", exp["p"], fa.family3_p(e, x1, a_sq, b)),
        Check("p (factored form)", exp["p"], fa.family3_p_factored(e, x1, a_sq)),
        Check("det M (formula)", exp["det"], fa.family3_det(e, x1, a_sq, b)),
        Check("det M (4x4 moment matrix)", exp["det"], det(moment_matrix(s).entries)),
        Check("admissibility conditions", True, not data.failed),
        Check("parameter window", True, fa.family3_window(nu, a_sq).holds),
        Check(f"six-point test at k1+k2 <= {horizon}", True, hyp_all.holds),
        Check("six-point test at representative points", True, all(reps)),
    ]
    report = classify(s, horizon)
    checks += _classification_checks(report, "obstructed")
    return InstanceReport("corollary20", "symmetric family, ν = 3s²ds, a² = 1/2", checks, report.to_json())


# ---------------------------------------------------------------------------
# constant shifts with perturbed corner
# ---------------------------------------------------------------------------

FAMILY2_DEMO = {"a": "1/2", "x": "0.8", "y": "0.73", "sub": "sqrt(12/25)", "hyp": "0.77611", "hyp_tol": "5e-6"}


def family2_demo(mode: str = "exact", horizon: int = 25) -> InstanceReport:
    d = FAMILY2_DEMO
    a, x, y = (_p(d[k], mode) for k in ("a", "x", "y"))
    bounds = fa.family2_thresholds(a, x)
    checks = [
        Check("subnormal bound", _p(d["sub"], "exact"), bounds.sub),
        Check("hyponormal bound", _p(d["hyp"], "exact"), bounds.hyp, d["hyp_tol"]),
        Check("ordering sub < hyp < x/a", True, bounds.ordering_holds()),
        Check("closed-form label", "hyponormal_not_subnormal", fa.family2_label(a, x, y, bounds)),
        Check("shift-level label", "hyponormal_not_subnormal", fa.family2_shift_label(a, x, y)),
    ]
    report = classify(fa.family2_build(a, x, y), horizon)
    checks += _classification_checks(report, "obstructed")
    return InstanceReport("family2_demo", "second family at (a, x, y) = (1/2, 0.8, 0.73)", checks, report.to_json())


# ---------------------------------------------------------------------------
# hyponormal implies subnormal
# ---------------------------------------------------------------------------

FAMILY4_DEMO = {
    "nu": {"atoms": [{"t": "1/4", "rho": "1/2"}, {"t": "1", "rho": "1/2"}], "ac": []},
    "y_sq": "1/2",
    "rho": "1/2",
}


def family4_demo(mode: str = "exact", horizon: int = 25) -> InstanceReport:
    d = FAMILY4_DEMO
    nu = ms.Measure1D.from_json(d["nu"], mode)
    y_sq = _p(d["y_sq"], mode)
    eq = fa.family4_equivalence_check(nu, y_sq, max(horizon, 2))
    s = fa.family4_build(nu, y_sq, max(horizon, 2))
    checks = [
        Check("atom at 1", _p(d["rho"], "exact"), eq.rho),
        Check("six-point test along (n, 0)", True, eq.hyponormal.holds),
        Check("subnormal (y^2 <= atom at 1)", True, eq.subnormal),
        Check("hyponormal and subnormal agree", True, eq.agrees),
    ]
    report = classify(s, horizon)
    checks += _classification_checks(report, "certified")
    return InstanceReport("family4_demo", "fourth family, ν = δ_{1/4}/2 + δ_1/2, y² = 1/2", checks, report.to_json())


REGISTRY = {
    "example13": example13,
    "corollary20": corollary20,
    "family2_demo": family2_demo,
    "family4_demo": family4_demo,
}


def verify(name: str, mode: str = "exact", horizon: int = 25) -> InstanceReport:
    try:
        build = REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown instance {name!r}; choose from {sorted(REGISTRY)}") from None
    return build(mode, horizon)
