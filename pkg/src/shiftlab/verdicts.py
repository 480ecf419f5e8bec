from __future__ import annotations

from dataclasses import dataclass, field

from . import scalars as sc


def certainty(*values) -> str:
    """``"exact"`` when every value is exact, else ``"numeric(eps)"``."""
    if all(sc.is_exact(v) for v in values):
        return "exact"
    return f"numeric({sc.format_decimal(sc.get_tolerance(), 6)})"


def merge_certainty(*labels: str) -> str:
    for label in labels:
        if label != "exact":
            return label
    return "exact"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a test.

    ``holds`` is ``None`` for an undecided outcome.  ``decided`` is False when
    the answer is only known up to a finite horizon.
    """

    holds: bool | None
    decided: bool = True
    witness: object = None
    certainty: str = "exact"
    detail: str = ""
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds is True

    @property
    def label(self) -> str:
        if self.holds is None:
            return "undecided"
        return "true" if self.holds else "false"

    def to_json(self) -> dict:
        out = {
            "holds": self.holds,
            "decided": self.decided,
            "certainty": self.certainty,
        }
        if self.witness is not None:
            out["witness"] = list(self.witness) if isinstance(self.witness, tuple) else self.witness
        if self.detail:
            out["detail"] = self.detail
        if self.data:
            out["data"] = {k: scalar_json(v) for k, v in self.data.items()}
        return out


def scalar_json(x):
    """Exact and decimal renderings of a scalar, for reports."""
    if isinstance(x, (bool, str, int)) or x is None:
        return x
    if isinstance(x, (list, tuple)):
        return [scalar_json(v) for v in x]
    if isinstance(x, dict):
        return {k: scalar_json(v) for k, v in x.items()}
    if hasattr(x, "to_json"):
        return x.to_json()
    return {"exact": sc.format_exact(x), "decimal": sc.format_decimal(x, 20)}
