"""Property identifiers, concrete scenarios, and the fixed counterexample scenarios."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .distributions import Codeframe, Prevalence, SmoothingConfig, validate_prevalence
from .errors import HypothesisViolation, NoFixedScenario, QuantError

HYPOTHESIS_ATOL = 1e-12


class PropertyId(str, enum.Enum):
    IOI = "IoI"
    NN = "NN"
    MAX = "MAX"
    MON = "MON"
    IMP = "IMP"
    REL = "REL"
    ABS = "ABS"
    IND = "IND"
    B_MON = "B-MON"
    B_IMP = "B-IMP"
    B_REL = "B-REL"
    B_ABS = "B-ABS"

    def __str__(self) -> str:
        return self.value

    @property
    def is_binary(self) -> bool:
        return self.value.startswith("B-")

    @property
    def general(self) -> PropertyId:
        """The multi-class property a binary reformulation stands for."""
        return PropertyId(self.value[2:]) if self.is_binary else self


GENERAL_PROPERTIES = (
    PropertyId.IOI,
    PropertyId.NN,
    PropertyId.MAX,
    PropertyId.MON,
    PropertyId.IMP,
    PropertyId.REL,
    PropertyId.ABS,
    PropertyId.IND,
)

BINARY_FORM = {
    PropertyId.MON: PropertyId.B_MON,
    PropertyId.IMP: PropertyId.B_IMP,
    PropertyId.REL: PropertyId.B_REL,
    PropertyId.ABS: PropertyId.B_ABS,
}


def parse_property(name: str | PropertyId) -> PropertyId:
    if isinstance(name, PropertyId):
        return name
    key = str(name).strip().upper().replace("_", "-")
    if key.startswith("B") and not key.startswith("B-") and len(key) == 4:
        key = "B-" + key[1:]
    for prop in PropertyId:
        if prop.value.upper() == key:
            return prop
    raise QuantError(f"unknown property {name!r}")


@dataclass(frozen=True)
class Scenario:
    """A concrete instance of a property's hypothesis.

    ``true_dists`` and ``pred_dists`` follow the property's own naming:
    one true distribution and two predictions for MON/IMP/IND (p, p', p''),
    two of each for MAX/REL/ABS, one of each for IoI/NN. ``subset`` holds
    the kept labels for IND.
    """

    property: PropertyId
    true_dists: tuple[Prevalence, ...]
    pred_dists: tuple[Prevalence, ...]
    smoothing: SmoothingConfig = field(default_factory=SmoothingConfig)
    subset: tuple[str, ...] | None = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "true_dists", tuple(self.true_dists))
        object.__setattr__(self, "pred_dists", tuple(self.pred_dists))
        frames = {d.codeframe.labels for d in self.true_dists + self.pred_dists}
        if len(frames) != 1:
            raise HypothesisViolation(f"scenario mixes codeframes {sorted(frames)}")
        _check_hypothesis(self)

    @property
    def codeframe(self) -> Codeframe:
        return self.true_dists[0].codeframe

    def to_dict(self) -> dict:
        out = {
            "property": str(self.property),
            "label": self.label,
            "codeframe": list(self.codeframe.labels),
            "epsilon": self.smoothing.epsilon,
            "true": [d.values.tolist() for d in self.true_dists],
            "pred": [d.values.tolist() for d in self.pred_dists],
        }
        if self.subset is not None:
            out["subset"] = list(self.subset)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> Scenario:
        frame = Codeframe(tuple(data["codeframe"]))
        make = lambda v: validate_prevalence(frame, v, renormalize=False)  # noqa: E731
        return cls(
            parse_property(data["property"]),
            tuple(make(v) for v in data["true"]),
            tuple(make(v) for v in data["pred"]),
            SmoothingConfig(epsilon=float(data.get("epsilon", 0.0))),
            tuple(data["subset"]) if data.get("subset") is not None else None,
            data.get("label", ""),
        )


def _fail(s: Scenario, why: str):
    raise HypothesisViolation(f"{s.property} scenario {s.label or ''}: {why}".replace("  ", " "))


def _support(d: np.ndarray) -> np.ndarray:
    return np.flatnonzero(np.abs(d) > HYPOTHESIS_ATOL)


def _check_counts(s: Scenario, n_true: int, n_pred: int):
    if len(s.true_dists) != n_true or len(s.pred_dists) != n_pred:
        _fail(s, f"needs {n_true} true and {n_pred} predicted distributions")


def _check_hypothesis(s: Scenario) -> None:
    prop = s.property.general
    tol = HYPOTHESIS_ATOL
    if s.property.is_binary and len(s.codeframe) != 2:
        _fail(s, "binary reformulations need a 2-class codeframe")

    if prop in (PropertyId.IOI, PropertyId.NN):
        _check_counts(s, 1, 1)
    elif prop is PropertyId.MAX:
        _check_counts(s, 2, 2)
    elif prop is PropertyId.MON:
        _check_counts(s, 1, 2)
        p, q1, q2 = s.true_dists[0].values, s.pred_dists[0].values, s.pred_dists[1].values
        d = q2 - q1
        sup = _support(d)
        if len(sup) != 2:
            _fail(s, "predictions must differ on exactly two classes")
        c1, c2 = (sup[0], sup[1]) if d[sup[0]] < 0 else (sup[1], sup[0])
        if not (d[c1] < 0 < d[c2] and abs(d[c1] + d[c2]) <= tol):
            _fail(s, "the two changes must have equal size and opposite sign")
        if not (q1[c1] <= p[c1] + tol and q1[c2] >= p[c2] - tol):
            _fail(s, "first prediction must already err in the direction of the change")
    elif prop is PropertyId.IMP:
        _check_counts(s, 1, 2)
        p, q1, q2 = s.true_dists[0].values, s.pred_dists[0].values, s.pred_dists[1].values
        d1, d2 = q1 - p, q2 - p
        sup = _support(d1)
        if np.max(np.abs(d1 + d2)) > tol or len(sup) not in (0, 2):
            _fail(s, "predictions must be mirror images around p on two classes")
        if len(sup) == 2 and abs(d1[sup[0]] + d1[sup[1]]) > tol:
            _fail(s, "over- and under-estimate must have the same size")
    elif prop in (PropertyId.REL, PropertyId.ABS):
        _check_counts(s, 2, 2)
        p1, p2 = s.true_dists[0].values, s.true_dists[1].values
        q1, q2 = s.pred_dists[0].values, s.pred_dists[1].values
        dp = p2 - p1
        sup = _support(dp)
        if len(sup) != 2:
            _fail(s, "true distributions must differ on exactly two classes")
        c1, c2 = (sup[0], sup[1]) if dp[sup[0]] > 0 else (sup[1], sup[0])
        if not (p1[c1] < p2[c1] < p2[c2] < p1[c2]):
            _fail(s, "need p'(c1) < p''(c1) < p''(c2) < p'(c2)")
        pair = [c1, c2]
        d1, d2 = q1[pair] - p1[pair], q2[pair] - p2[pair]
        if np.max(np.abs(d1 - d2)) > tol:
            _fail(s, "both predictions must shift c1 and c2 by the same amount")
        if abs(d1[0]) <= tol or abs(d1[0] + d1[1]) > tol:
            _fail(s, "the shift on c1 and c2 must be non-zero and cancel")
        # Classes other than c1 and c2 are free but shared by both predictions.
        rest = np.ones(len(p1), dtype=bool)
        rest[[c1, c2]] = False
        if np.max(np.abs(q1[rest] - q2[rest]), initial=0.0) > tol:
            _fail(s, "predictions must agree outside c1 and c2")
    elif prop is PropertyId.IND:
        _check_counts(s, 1, 2)
        if not s.subset:
            _fail(s, "needs a non-empty subset of classes")
        labels = s.codeframe.labels
        keep = np.array([lab in set(s.subset) for lab in labels])
        if keep.all() or not keep.any() or len(set(s.subset) - set(labels)):
            _fail(s, "subset must be a proper, non-empty subset of the codeframe")
        q1, q2 = s.pred_dists[0].values, s.pred_dists[1].values
        if np.max(np.abs(q1[~keep] - q2[~keep])) > tol:
            _fail(s, "predictions must agree on the dropped classes")
        for d in (s.true_dists[0].values, q1):
            if np.sum(d[keep]) <= 0:
                _fail(s, "the kept classes need positive mass")


# Fixed scenarios ------------------------------------------------------------

FIXED_EPSILON = 5e-7  # sample of 1,000,000 items
_BINARY = Codeframe(("c1", "c2"))


def _b(values) -> Prevalence:
    return validate_prevalence(_BINARY, values, renormalize=False)


def _fixed(prop: PropertyId) -> list[Scenario]:
    eps = SmoothingConfig(epsilon=FIXED_EPSILON)
    general = prop.general
    if general is PropertyId.MAX:
        if prop.is_binary:
            raise NoFixedScenario(str(prop))
        q = _b((1.0, 0.0))
        return [Scenario(prop, (_b((0.01, 0.99)), _b((0.49, 0.51))), (q, q), eps, label="B.1")]
    if general is PropertyId.IMP:
        return [
            Scenario(prop, (_b((0.20, 0.80)),), (_b((0.25, 0.75)), _b((0.15, 0.85))), eps, label="B.2")
        ]
    if general in (PropertyId.REL, PropertyId.ABS):
        tag = "B.3" if general is PropertyId.REL else "B.4"
        return [
            Scenario(
                prop,
                (_b((0.20, 0.80)), _b((0.25, 0.75))),
                (_b((0.70, 0.30)), _b((0.75, 0.25))),
                eps,
                label=tag,
            )
        ]
    raise NoFixedScenario(f"no fixed counterexample scenario for {prop}")


def fixed_scenarios(prop: PropertyId | str) -> list[Scenario]:
    """The published counterexample scenarios for MAX, IMP, REL and ABS.

    The binary reformulations of IMP, REL and ABS get the same (binary)
    scenarios.

    Raises:
        NoFixedScenario: for every other property.
    """
    return _fixed(parse_property(prop))
