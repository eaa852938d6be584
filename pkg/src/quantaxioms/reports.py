"""Counterexample tables and binary plot grids."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .axioms import evaluate_scenario
from .measures import TABLE_MEASURES, EvalContext, MeasureId, evaluate_rows, parse_measure, score
from .scenarios import PropertyId, Scenario, fixed_scenarios

# Counterexample tables ------------------------------------------------------------

TABLE_PROPERTIES = (PropertyId.MAX, PropertyId.IMP, PropertyId.REL, PropertyId.ABS)
PD_FLAGGED = {"B.2", "B.3", "B.4"}
PD_NOTE = (
    "PD is computed from its defining formula on smoothed vectors; "
    "values in other sources for this scenario may differ."
)


@dataclass(frozen=True)
class CounterexampleTable:
    """Scores of every table measure on both rows of a fixed scenario."""

    scenario: Scenario
    row_labels: tuple[str, str]
    values: dict[MeasureId, tuple[float, float]]
    violated: dict[MeasureId, bool]

    @property
    def label(self) -> str:
        return self.scenario.label

    def render(self) -> str:
        s = self.scenario
        lines = [f"{s.label}: {s.property} counterexample (epsilon = {s.smoothing.epsilon:g})"]
        width = max(len(r) for r in self.row_labels)
        head = ["row".ljust(width)] + [f"{str(m):>12}" for m in self.values]
        lines.append(" ".join(head))
        for i, name in enumerate(self.row_labels):
            cells = [name.ljust(width)]
            for m, pair in self.values.items():
                mark = "*" if self.violated[m] else " "
                dagger = "+" if m is MeasureId.PD and s.label in PD_FLAGGED else " "
                cells.append(f"{pair[i]:>10.4f}{mark}{dagger}")
            lines.append(" ".join(cells))
        lines.append(f"* {s.property} fails for this measure in this scenario")
        if s.label in PD_FLAGGED:
            lines.append(f"+ {PD_NOTE}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "property": str(self.scenario.property),
            "epsilon": self.scenario.smoothing.epsilon,
            "rows": list(self.row_labels),
            "values": {str(m): list(v) for m, v in self.values.items()},
            "violated": {str(m): v for m, v in self.violated.items()},
        }


def _fmt(values) -> str:
    return "(" + ", ".join(f"{v:.2f}" for v in values) + ")"


def counterexample_table(scenario: Scenario) -> CounterexampleTable:
    ctx = EvalContext(scenario.smoothing)
    t, q = scenario.true_dists, scenario.pred_dists
    if len(t) == 1:
        rows = ((t[0], q[0]), (t[0], q[1]))
    else:
        rows = ((t[0], q[0]), (t[1], q[1]))
    labels = tuple(f"{_fmt(p.values)} -> {_fmt(h.values)}" for p, h in rows)
    values = {m: tuple(score(m, p, h, ctx) for p, h in rows) for m in TABLE_MEASURES}
    violated = {m: not evaluate_scenario(m, scenario)[0] for m in TABLE_MEASURES}
    return CounterexampleTable(scenario, labels, values, violated)


def counterexample_tables() -> list[CounterexampleTable]:
    """The four fixed scenarios scored with every table measure."""
    return [counterexample_table(fixed_scenarios(p)[0]) for p in TABLE_PROPERTIES]


# Plot grids ------------------------------------------------------------------------


@dataclass(frozen=True)
class PlotGrid:
    """Binary surface z = D((x, 1-x), (y, 1-y)) on a square grid."""

    measure: MeasureId
    resolution: int
    epsilon: float
    rows: np.ndarray  # (resolution**2, 3) columns x, y, z

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "z"])
            for x, y, z in self.rows:
                writer.writerow([repr(float(x)), repr(float(y)), repr(float(z))])


def grid_axis(resolution: int, epsilon: float) -> np.ndarray:
    """Grid coordinates; the endpoints 0 and 1 only appear when smoothing."""
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    if epsilon > 0:
        return np.linspace(0.0, 1.0, resolution)
    return np.arange(1, resolution + 1) / (resolution + 1)


def plot_grid(measure: MeasureId | str, resolution: int = 101, epsilon: float = 0.0) -> PlotGrid:
    measure = parse_measure(measure)
    axis = grid_axis(resolution, epsilon)
    X, Y = np.meshgrid(axis, axis, indexing="ij")
    x, y = X.ravel(), Y.ravel()
    P = np.column_stack([x, 1.0 - x])
    Q = np.column_stack([y, 1.0 - y])
    z = evaluate_rows(measure, P, Q, epsilon)
    return PlotGrid(measure, resolution, epsilon, np.column_stack([x, y, z]))
