"""Executable checks for the axiomatic properties of quantification measures.

The harness is a falsifier. For a (measure, property) pair it first tries the
published counterexample scenarios, then draws random scenarios that satisfy
the property's hypothesis and tests the conclusion on each. A violation
yields a Falsified verdict carrying a replayable scenario; otherwise the
verdict is Unfalsified, which is evidence and not proof.

Random scenarios are drawn in fixed-size blocks. Block ``b`` is seeded from
``(seed, property, b)``, so trial ``i`` is the same whatever the budget and
however the blocks are scheduled.
"""
from __future__ import annotations

import enum
import functools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import Codeframe, SmoothingConfig, project, validate_prevalence
from .errors import DomainError, IncompatiblePair, NoFixedScenario, UnsupportedMeasure
from .measures import TABLE_MEASURES, EvalContext, MeasureId, evaluate_rows, parse_measure, score
from .scenarios import (
    BINARY_FORM,
    GENERAL_PROPERTIES,
    FIXED_EPSILON,
    PropertyId,
    Scenario,
    fixed_scenarios,
    parse_property,
)

DEFAULT_BUDGET = 10_000
DEFAULT_TOLERANCE = 1e-9
# NKLD reaches its maximum only approximately; suprema for different p agree
# to about half a unit in the second decimal.
NKLD_MAX_TOLERANCE = 5e-3
MAX_GRID_STEPS = 200
BLOCK_SIZE = 512
CLASS_SIZES = tuple(range(2, 9))
# Random draws keep every entry at least this far from 0 so that true
# differences stay well clear of the floating point comparison band.
MIN_ENTRY = 1e-3

_CODES = {prop: i + 1 for i, prop in enumerate(PropertyId)}


class Status(str, enum.Enum):
    FALSIFIED = "Falsified"
    UNFALSIFIED = "Unfalsified"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Counterexample:
    """A scenario in which the property fails, with the measure values seen."""

    scenario: Scenario
    values: dict[str, float]

    def to_dict(self) -> dict:
        return {"scenario": self.scenario.to_dict(), "values": dict(self.values)}


@dataclass(frozen=True)
class Verdict:
    measure: MeasureId
    property: PropertyId
    status: Status
    counterexample: Counterexample | None
    trials_run: int
    seed: int
    budget: int
    tolerance: float
    fixed_tried: int = 0

    def __post_init__(self):
        if self.status is Status.FALSIFIED and self.counterexample is None:
            raise ValueError("a Falsified verdict needs a counterexample")

    @property
    def falsified(self) -> bool:
        return self.status is Status.FALSIFIED

    def to_dict(self) -> dict:
        return {
            "measure": str(self.measure),
            "property": str(self.property),
            "status": str(self.status),
            "trials_run": self.trials_run,
            "fixed_tried": self.fixed_tried,
            "seed": self.seed,
            "budget": self.budget,
            "tolerance": self.tolerance,
            "counterexample": self.counterexample.to_dict() if self.counterexample else None,
        }

    def describe(self) -> str:
        head = f"{self.measure} / {self.property}: {self.status}"
        if not self.counterexample:
            return f"{head} after {self.trials_run} random trials (seed {self.seed})"
        s = self.counterexample.scenario
        vals = ", ".join(f"{k}={v:.6g}" for k, v in self.counterexample.values.items())
        where = s.label or "random scenario"
        return f"{head} in {where}: {vals}"


# Comparisons ----------------------------------------------------------------


def _scale(a, b):
    return np.maximum(np.abs(a), np.abs(b))


def strictly_less(a, b, tol):
    """b exceeds a by more than ``tol`` relative to the larger magnitude."""
    with np.errstate(invalid="ignore"):
        return (b - a) > tol * _scale(a, b)


def approx_equal(a, b, tol):
    with np.errstate(invalid="ignore"):
        return np.abs(a - b) <= tol * np.maximum(1.0, _scale(a, b))


def _order(a, b, tol):
    """+1 if a < b, -1 if a > b, 0 if equal within tolerance."""
    return np.where(strictly_less(a, b, tol), 1, np.where(strictly_less(b, a, tol), -1, 0))


def _effective_tolerance(measure: MeasureId, prop: PropertyId, tol: float) -> float:
    if prop.general is PropertyId.MAX and measure is MeasureId.NKLD:
        return max(tol, NKLD_MAX_TOLERANCE)
    return tol


def _conclusion_holds(prop: PropertyId, v: dict, tol: float, same=None):
    """Vectorised conclusion test; ``v`` maps value names to arrays."""
    general = prop.general
    if general is PropertyId.IOI:
        zero = np.abs(v["D(p,p)"]) <= tol
        positive = v["D(p,q)"] > 0
        if same is not None:
            positive = positive | same
        return zero & positive
    if general is PropertyId.NN:
        return v["D(p,q)"] >= -tol
    if general is PropertyId.MAX:
        return approx_equal(v["D(p',q')"], v["D(p'',q'')"], tol)
    if general is PropertyId.MON:
        return strictly_less(v["D(p,q')"], v["D(p,q'')"], tol)
    if general is PropertyId.IMP:
        return approx_equal(v["D(p,q')"], v["D(p,q'')"], tol)
    if general is PropertyId.REL:
        return strictly_less(v["D(p'',q'')"], v["D(p',q')"], tol)
    if general is PropertyId.ABS:
        return approx_equal(v["D(p',q')"], v["D(p'',q'')"], tol)
    # IND: the two orderings must not disagree strictly.
    full = _order(v["D(p,q')"], v["D(p,q'')"], tol)
    sub = _order(v["D(pC1,q'C1)"], v["D(pC1,q''C1)"], tol)
    return full * sub != -1


# Single-scenario evaluation (the replay path) ---------------------------------


def scenario_values(measure: MeasureId | str, scenario: Scenario) -> dict[str, float]:
    """Measure values a property's conclusion looks at, via the scalar API."""
    measure = parse_measure(measure)
    ctx = EvalContext(scenario.smoothing)
    t, q = scenario.true_dists, scenario.pred_dists
    general = scenario.property.general

    def d(p, p_hat):
        return score(measure, p, p_hat, ctx)

    if general is PropertyId.IOI:
        return {"D(p,p)": d(t[0], t[0]), "D(p,q)": d(t[0], q[0])}
    if general is PropertyId.NN:
        return {"D(p,q)": d(t[0], q[0])}
    if general in (PropertyId.MAX, PropertyId.REL, PropertyId.ABS):
        return {"D(p',q')": d(t[0], q[0]), "D(p'',q'')": d(t[1], q[1])}
    values = {"D(p,q')": d(t[0], q[0]), "D(p,q'')": d(t[0], q[1])}
    if general is PropertyId.IND:
        pc = project(t[0], scenario.subset)
        values["D(pC1,q'C1)"] = d(pc, project(q[0], scenario.subset))
        values["D(pC1,q''C1)"] = d(pc, project(q[1], scenario.subset))
    return values


def evaluate_scenario(
    measure: MeasureId | str, scenario: Scenario, tolerance: float = DEFAULT_TOLERANCE
) -> tuple[bool, dict[str, float]]:
    """Whether the property's conclusion holds in ``scenario``, plus the values."""
    measure = parse_measure(measure)
    values = scenario_values(measure, scenario)
    tol = _effective_tolerance(measure, scenario.property, tolerance)
    same = None
    if scenario.property.general is PropertyId.IOI:
        same = scenario.true_dists[0] == scenario.pred_dists[0]
    holds = _conclusion_holds(scenario.property, values, tol, same)
    return bool(holds), values


def replay(verdict: Verdict) -> tuple[bool, dict[str, float]]:
    """Re-run a verdict's counterexample; returns (violated, values).

    Raises:
        ValueError: the verdict carries no counterexample.
    """
    if verdict.counterexample is None:
        raise ValueError("nothing to replay: the verdict has no counterexample")
    holds, values = evaluate_scenario(
        verdict.measure, verdict.counterexample.scenario, verdict.tolerance
    )
    return not holds, values


# Random scenario generation ---------------------------------------------------


def _simplex(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    """Uniform draws from the simplex, redrawing rows that touch the boundary."""
    out = rng.dirichlet(np.ones(n), size=m)
    bad = np.flatnonzero(out.min(axis=1) < MIN_ENTRY)
    while bad.size:
        out[bad] = rng.dirichlet(np.ones(n), size=bad.size)
        bad = bad[out[bad].min(axis=1) < MIN_ENTRY]
    return out


def _two_classes(rng, m, n):
    perm = rng.permuted(np.tile(np.arange(n), (m, 1)), axis=1)
    return perm[:, 0], perm[:, 1]


def _fill_rest(rng, out, c1, c2, mass):
    """Spread ``mass`` over the classes other than c1 and c2."""
    m, n = out.shape
    if n == 2:
        return
    shares = rng.dirichlet(np.ones(n - 2), size=m) * mass[:, None]
    rows = np.arange(m)
    rest = np.ones((m, n), dtype=bool)
    rest[rows, c1] = False
    rest[rows, c2] = False
    out[rest] = shares.ravel()


def _gen_ioi(rng, m, n):
    P = _simplex(rng, m, n)
    return {"p": P, "q": _simplex(rng, m, n)}


def _gen_nn(rng, m, n):
    P = _simplex(rng, m, n)
    Q = _simplex(rng, m, n)
    near = rng.random(m) < 0.5
    jitter = P[near] * (1.0 + 1e-6 * rng.uniform(-1.0, 1.0, size=(near.sum(), n)))
    Q[near] = jitter / jitter.sum(axis=1, keepdims=True)
    return {"p": P, "q": Q}


def _gen_max(rng, m, n):
    return {"p1": _simplex(rng, m, n), "p2": _simplex(rng, m, n)}


def _gen_mon(rng, m, n):
    P = _simplex(rng, m, n)
    rows = np.arange(m)
    c1, c2 = _two_classes(rng, m, n)
    p1, p2 = P[rows, c1], P[rows, c2]
    # q'(c1) <= p(c1), exactly equal in about one trial in ten
    u = rng.uniform(0.05, 1.0, size=m)
    u[rng.random(m) < 0.1] = 1.0
    q1 = u * p1
    room = 1.0 - q1 - p2
    v = rng.uniform(0.0, 1.0, size=m)
    v[rng.random(m) < 0.1] = 0.0
    q2 = 1.0 - q1 if n == 2 else p2 + v * room
    Q1 = np.zeros((m, n))
    Q1[rows, c1] = q1
    Q1[rows, c2] = q2
    _fill_rest(rng, Q1, c1, c2, 1.0 - q1 - q2)
    delta = rng.uniform(0.05, 1.0, size=m) * q1
    Q2 = Q1.copy()
    Q2[rows, c1] = q1 - delta
    Q2[rows, c2] = q2 + delta
    return {"p": P, "q1": Q1, "q2": Q2}


def _gen_imp(rng, m, n):
    P = _simplex(rng, m, n)
    rows = np.arange(m)
    c1, c2 = _two_classes(rng, m, n)
    a = rng.uniform(0.0, 1.0, size=m) * np.minimum(P[rows, c1], P[rows, c2])
    Q1, Q2 = P.copy(), P.copy()
    Q1[rows, c1] += a
    Q1[rows, c2] -= a
    Q2[rows, c1] -= a
    Q2[rows, c2] += a
    return {"p": P, "q1": Q1, "q2": Q2}


def _gen_rel(rng, m, n):
    P1 = _simplex(rng, m, n)
    rows = np.arange(m)
    c1, c2 = _two_classes(rng, m, n)
    # Re-split the mass of c1 and c2 so that c1 is clearly the rarer class.
    s = P1[rows, c1] + P1[rows, c2]
    lo = s * rng.uniform(0.01, 0.45, size=m)
    hi = s - lo
    P1[rows, c1] = lo
    P1[rows, c2] = hi
    mid = lo + rng.uniform(0.05, 0.95, size=m) * (s / 2.0 - lo)
    P2 = P1.copy()
    P2[rows, c1] = mid
    P2[rows, c2] = s - mid
    sign = np.where(rng.random(m) < 0.5, 1.0, -1.0)
    cap = np.where(sign > 0, s - mid, lo)
    a = sign * rng.uniform(0.05, 0.95, size=m) * cap
    Q1 = np.zeros((m, n))
    _fill_rest(rng, Q1, c1, c2, 1.0 - s)
    Q2 = Q1.copy()
    Q1[rows, c1] = lo + a
    Q1[rows, c2] = hi - a
    Q2[rows, c1] = mid + a
    Q2[rows, c2] = (s - mid) - a
    return {"p1": P1, "q1": Q1, "p2": P2, "q2": Q2}


def _gen_ind(rng, m, n, k):
    P = _simplex(rng, m, n)
    Q1 = _simplex(rng, m, n)
    Q2 = Q1.copy()
    head = Q1[:, :k].sum(axis=1, keepdims=True)
    Q2[:, :k] = _simplex(rng, m, k) * head
    return {"p": P, "q1": Q1, "q2": Q2}


_GENERATORS = {
    PropertyId.IOI: _gen_ioi,
    PropertyId.NN: _gen_nn,
    PropertyId.MAX: _gen_max,
    PropertyId.MON: _gen_mon,
    PropertyId.IMP: _gen_imp,
    PropertyId.REL: _gen_rel,
    PropertyId.ABS: _gen_rel,
    PropertyId.IND: _gen_ind,
}


@dataclass(frozen=True)
class _Group:
    """Trials of one block that share a codeframe size (and IND split)."""

    key: tuple[int, ...]
    index: np.ndarray
    arrays: dict[str, np.ndarray] = field(repr=False)


@functools.lru_cache(maxsize=2048)
def _block(prop: PropertyId, seed: int, block: int, sizes: tuple[int, ...]) -> tuple[_Group, ...]:
    rng = np.random.default_rng(np.random.SeedSequence([seed, _CODES[prop], block]))
    ns = rng.choice(np.asarray(sizes), size=BLOCK_SIZE)
    if prop.general is PropertyId.IND:
        keys = np.stack([ns, rng.integers(2, ns)], axis=1)
    else:
        keys = ns[:, None]
    groups = []
    gen = _GENERATORS[prop.general]
    for key in np.unique(keys, axis=0):
        sel = np.flatnonzero(np.all(keys == key, axis=1))
        arrays = gen(rng, sel.size, *(int(x) for x in key))
        for arr in arrays.values():
            arr.setflags(write=False)
        groups.append(_Group(tuple(int(x) for x in key), sel + block * BLOCK_SIZE, arrays))
    return tuple(groups)


def _random_epsilon(prop: PropertyId) -> float:
    # Interior draws need no smoothing; MAX candidates sit on the boundary.
    return FIXED_EPSILON if prop.general is PropertyId.MAX else 0.0


def _sup_search(measure: MeasureId, P: np.ndarray, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """Largest score over the vertices and a grid on the edges at the perverse vertex."""
    m, n = P.shape
    t = np.arange(1, MAX_GRID_STEPS) / MAX_GRID_STEPS
    template = [np.eye(n)]
    for j in range(1, n):
        edge = np.zeros((t.size, n))
        edge[:, 0] = 1.0 - t
        edge[:, j] = t
        template.append(edge)
    template = np.concatenate(template)
    K = template.shape[0]
    star = np.argmin(P, axis=1)
    perm = np.tile(np.arange(n), (m, 1))
    perm[np.arange(m), star] = 0
    perm[:, 0] = star
    best = np.empty(m)
    arg = np.empty((m, n))
    chunk = max(1, 400_000 // (K * n))
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        cand = template[:, perm[lo:hi]].transpose(1, 0, 2)  # (rows, K, n)
        vals = evaluate_rows(
            measure, np.repeat(P[lo:hi], K, axis=0), cand.reshape(-1, n), eps
        ).reshape(hi - lo, K)
        pick = np.argmax(vals, axis=1)
        best[lo:hi] = vals[np.arange(hi - lo), pick]
        arg[lo:hi] = cand[np.arange(hi - lo), pick]
    return best, arg


def _group_values(measure: MeasureId, prop: PropertyId, g: _Group):
    """Batched values for one group, plus extra arrays needed for replay."""
    a = g.arrays
    eps = _random_epsilon(prop)
    general = prop.general

    def d(P, Q):
        return evaluate_rows(measure, P, Q, eps)

    if general is PropertyId.IOI:
        return {"D(p,p)": d(a["p"], a["p"]), "D(p,q)": d(a["p"], a["q"])}, {}
    if general is PropertyId.NN:
        return {"D(p,q)": d(a["p"], a["q"])}, {}
    if general is PropertyId.MAX:
        s1, q1 = _sup_search(measure, a["p1"], eps)
        s2, q2 = _sup_search(measure, a["p2"], eps)
        return {"D(p',q')": s1, "D(p'',q'')": s2}, {"q1": q1, "q2": q2}
    if general in (PropertyId.REL, PropertyId.ABS):
        return {"D(p',q')": d(a["p1"], a["q1"]), "D(p'',q'')": d(a["p2"], a["q2"])}, {}
    values = {"D(p,q')": d(a["p"], a["q1"]), "D(p,q'')": d(a["p"], a["q2"])}
    if general is PropertyId.IND:
        k = g.key[1]

        def head(X):
            return X[:, :k] / X[:, :k].sum(axis=1, keepdims=True)

        pc = head(a["p"])
        values["D(pC1,q'C1)"] = d(pc, head(a["q1"]))
        values["D(pC1,q''C1)"] = d(pc, head(a["q2"]))
    return values, {}


def _build_scenario(prop: PropertyId, g: _Group, row: int, extra: dict, trial: int) -> Scenario:
    n = g.key[0]
    frame = Codeframe.of_size(n)
    a = dict(g.arrays)
    a.update(extra)

    def prev(name):
        return validate_prevalence(frame, a[name][row], renormalize=False)

    general = prop.general
    eps = SmoothingConfig(epsilon=_random_epsilon(prop))
    label = f"trial {trial}"
    subset = None
    if general in (PropertyId.IOI, PropertyId.NN):
        true, pred = (prev("p"),), (prev("q"),)
    elif general in (PropertyId.MAX, PropertyId.REL, PropertyId.ABS):
        true, pred = (prev("p1"), prev("p2")), (prev("q1"), prev("q2"))
    else:
        true, pred = (prev("p"),), (prev("q1"), prev("q2"))
        if general is PropertyId.IND:
            subset = frame.labels[: g.key[1]]
    return Scenario(prop, true, pred, eps, subset, label)


def _class_sizes(measure: MeasureId, prop: PropertyId, n_classes: int | None) -> tuple[int, ...]:
    if measure.binary_only or prop.is_binary:
        if prop.general is PropertyId.IND or (n_classes is not None and n_classes != 2):
            who = measure if measure.binary_only else prop
            raise IncompatiblePair(f"{who} is binary-only; cannot check {prop} with {n_classes or '>2'} classes")
        return (2,)
    if n_classes is not None:
        if n_classes < 2 or (prop is PropertyId.IND and n_classes < 3):
            raise IncompatiblePair(f"{prop} cannot be checked with {n_classes} classes")
        return (int(n_classes),)
    if prop is PropertyId.IND:
        return tuple(n for n in CLASS_SIZES if n >= 3)
    return CLASS_SIZES


def check_property(
    measure: MeasureId | str,
    prop: PropertyId | str,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    n_classes: int | None = None,
) -> Verdict:
    """Try to falsify ``prop`` for ``measure``.

    Args:
        measure: measure to test.
        prop: property to test; binary reformulations use 2-class scenarios.
        budget: number of random trials. 0 tries the fixed scenarios only.
        seed: non-negative seed for the random trials.
        tolerance: relative band for equalities and strict inequalities.
        n_classes: pin the codeframe size instead of drawing it from 2..8.

    Returns:
        A Verdict. Falsified verdicts carry the first violating scenario
        (fixed scenarios come first, then random trials in trial order).

    Raises:
        IncompatiblePair: binary-only measure or property on a larger codeframe.
    """
    measure = parse_measure(measure)
    prop = parse_property(prop)
    budget, seed = int(budget), int(seed)
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    if seed < 0:
        raise ValueError(f"seed must be >= 0, got {seed}")
    if not tolerance > 0:
        raise ValueError(f"tolerance must be > 0, got {tolerance}")
    sizes = _class_sizes(measure, prop, n_classes)
    common = dict(measure=measure, property=prop, seed=seed, budget=budget, tolerance=tolerance)

    try:
        fixed = [s for s in fixed_scenarios(prop) if len(s.codeframe) in sizes]
    except NoFixedScenario:
        fixed = []
    for s in fixed:
        holds, values = evaluate_scenario(measure, s, tolerance)
        if not holds:
            return Verdict(
                status=Status.FALSIFIED,
                counterexample=Counterexample(s, values),
                trials_run=0,
                fixed_tried=len(fixed),
                **common,
            )

    tol = _effective_tolerance(measure, prop, tolerance)
    n_blocks = -(-budget // BLOCK_SIZE)
    for b in range(n_blocks):
        hits = []
        for g in _block(prop, seed, b, sizes):
            live = g.index < budget
            values, extra = _group_values(measure, prop, g)
            holds = _conclusion_holds(prop, values, tol)
            for row in np.flatnonzero(~holds & live):
                hits.append((int(g.index[row]), g, int(row), extra))
        for trial, g, row, extra in sorted(hits, key=lambda h: h[0]):
            scenario = _build_scenario(prop, g, row, extra, trial)
            holds, values = evaluate_scenario(measure, scenario, tolerance)
            if not holds:
                return Verdict(
                    status=Status.FALSIFIED,
                    counterexample=Counterexample(scenario, values),
                    trials_run=trial + 1,
                    fixed_tried=len(fixed),
                    **common,
                )
    return Verdict(
        status=Status.UNFALSIFIED,
        counterexample=None,
        trials_run=budget,
        fixed_tried=len(fixed),
        **common,
    )


# The property matrix ----------------------------------------------------------


@dataclass(frozen=True)
class PropertyMatrix:
    """Verdicts for every (measure, general property) cell."""

    cells: dict[tuple[MeasureId, PropertyId], Verdict]
    budget: int
    seed: int
    measures: tuple[MeasureId, ...] = TABLE_MEASURES
    properties: tuple[PropertyId, ...] = GENERAL_PROPERTIES

    def __getitem__(self, key) -> Verdict:
        m, p = key
        return self.cells[(parse_measure(m), parse_property(p))]

    def grid(self) -> dict[str, dict[str, str]]:
        """Yes (unfalsified) / No (falsified) per measure and property."""
        return {
            str(m): {str(p): ("No" if self.cells[(m, p)].falsified else "Yes") for p in self.properties}
            for m in self.measures
        }

    def render(self) -> str:
        width = max(len(str(m)) for m in self.measures)
        head = " " * width + " | " + " ".join(f"{str(p):>4}" for p in self.properties)
        lines = [head, "-" * len(head)]
        for m, row in self.grid().items():
            lines.append(f"{m:>{width}} | " + " ".join(f"{row[str(p)]:>4}" for p in self.properties))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "budget": self.budget,
            "seed": self.seed,
            "grid": self.grid(),
            "verdicts": [self.cells[(m, p)].to_dict() for m in self.measures for p in self.properties],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def grid_from_json(text: str) -> dict[str, dict[str, str]]:
    return json.loads(text)["grid"]


def property_matrix(
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    measures=TABLE_MEASURES,
) -> PropertyMatrix:
    """Check every general property for every measure.

    IND is checked first. Where it is not falsified, MON, IMP, REL and ABS
    are checked through their binary reformulations, which are equivalent
    for such measures; otherwise the general formulations are used.
    """
    measures = tuple(parse_measure(m) for m in measures)
    cells = {}
    for m in measures:
        ind = check_property(m, PropertyId.IND, budget, seed, tolerance)
        cells[(m, PropertyId.IND)] = ind
        for p in GENERAL_PROPERTIES:
            if p is PropertyId.IND:
                continue
            target = BINARY_FORM.get(p, p) if not ind.falsified else p
            cells[(m, p)] = check_property(m, target, budget, seed, tolerance)
    return PropertyMatrix(cells, budget, seed, measures)


# Closed-form derivatives for the binary monotonicity proofs -------------------


def bmon_derivative(measure: MeasureId | str, a: float, x: float) -> float:
    """Derivative of D with respect to the error size |a - x| (binary case).

    ``a`` is the true prevalence of the first class and ``x`` the predicted
    one; the second class takes the complements. Only KLD and PD are
    supported. For PD the value refers to the sum over both classes, without
    the 1/|C| averaging factor.

    Raises:
        DomainError: a or x outside (0, 1), or a == x.
        UnsupportedMeasure: any other measure.
    """
    measure = parse_measure(measure)
    a, x = float(a), float(x)
    if not (0.0 < a < 1.0 and 0.0 < x < 1.0) or a == x or math.isnan(a + x):
        raise DomainError(f"need a, x in (0, 1) with a != x, got a={a}, x={x}")
    if measure is MeasureId.KLD:
        if a > x:
            return (x - a) / ((x - 1.0) * x)
        return (a - x) / ((x - 1.0) * x)
    if measure is MeasureId.PD:
        core = (a + x - 2.0 * a * x) / (x**2 * (1.0 - x) ** 2)
        return (a - x) * core if a > x else (x - a) * core
    raise UnsupportedMeasure(f"bmon_derivative covers KLD and PD, not {measure}")
