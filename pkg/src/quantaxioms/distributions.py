"""Codeframes, prevalence vectors, additive smoothing and projections."""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidCodeframe,
    NegativeEntry,
    NotNormalized,
    ZeroMass,
)

SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Codeframe:
    """Ordered set of class labels (at least two, pairwise distinct)."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise InvalidCodeframe(f"a codeframe needs at least 2 classes, got {len(labels)}")
        if len(set(labels)) != len(labels):
            raise InvalidCodeframe(f"duplicate class labels in {labels}")

    @classmethod
    def of_size(cls, n: int) -> Codeframe:
        """Codeframe ``c1, ..., cn``."""
        return cls(tuple(f"c{i + 1}" for i in range(n)))

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True, eq=False)
class Prevalence:
    """A probability distribution over a codeframe.

    Instances are normally built through :func:`validate_prevalence`; the
    values array is read-only.
    """

    codeframe: Codeframe
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.codeframe)

    def __getitem__(self, label: str) -> float:
        return float(self.values[self.codeframe.index(label)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Prevalence):
            return NotImplemented
        return self.codeframe.labels == other.codeframe.labels and np.array_equal(
            self.values, other.values
        )

    def __hash__(self):
        return hash((self.codeframe.labels, self.values.tobytes()))

    def __repr__(self) -> str:
        vals = ", ".join(f"{v:.6g}" for v in self.values)
        return f"Prevalence({vals})"

    def as_dict(self) -> dict[str, float]:
        return {label: float(v) for label, v in zip(self.codeframe.labels, self.values)}


@dataclass(frozen=True)
class SmoothingConfig:
    """Additive smoothing constant, optionally derived from a sample size."""

    epsilon: float = 0.0
    sample_size: int | None = None

    def __post_init__(self):
        if self.sample_size is not None:
            if self.sample_size < 1:
                raise ValueError(f"sample_size must be >= 1, got {self.sample_size}")
            object.__setattr__(self, "epsilon", 1.0 / (2 * self.sample_size))
        if not self.epsilon >= 0.0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")

    @classmethod
    def from_sample_size(cls, sample_size: int) -> SmoothingConfig:
        return cls(sample_size=int(sample_size))


def _as_codeframe(codeframe: Codeframe | Sequence[str] | int) -> Codeframe:
    if isinstance(codeframe, Codeframe):
        return codeframe
    if isinstance(codeframe, int):
        return Codeframe.of_size(codeframe)
    return Codeframe(tuple(codeframe))


def validate_prevalence(
    codeframe: Codeframe | Sequence[str] | int,
    values: Iterable[float],
    *,
    renormalize: bool = True,
) -> Prevalence:
    """Check ``values`` against ``codeframe`` and build a :class:`Prevalence`.

    Args:
        codeframe: a Codeframe, a sequence of labels, or a class count.
        values: one fraction per class.
        renormalize: divide by the sum so the stored vector sums to 1 up to
            rounding. Turn off to keep the exact input bits.

    Raises:
        DimensionMismatch: wrong number of entries.
        NegativeEntry: some entry is below zero.
        NotNormalized: entries are non-finite or do not sum to 1 within 1e-9.
    """
    codeframe = _as_codeframe(codeframe)
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != len(codeframe):
        raise DimensionMismatch(
            f"expected {len(codeframe)} entries for codeframe {codeframe.labels}, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise NotNormalized(f"non-finite entries in {arr.tolist()}")
    if np.any(arr < 0):
        raise NegativeEntry(f"negative entries in {arr.tolist()}")
    total = float(np.sum(arr))
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise NotNormalized(f"entries sum to {total!r}, not 1")
    if renormalize:
        arr = arr / total
    return Prevalence(codeframe, arr)


def as_prevalence(p, codeframe: Codeframe | None = None) -> Prevalence:
    """Coerce an array-like (or pass through a Prevalence)."""
    if isinstance(p, Prevalence):
        return p
    arr = np.asarray(p, dtype=float)
    return validate_prevalence(codeframe if codeframe is not None else arr.shape[-1], arr)


def smooth_values(values: np.ndarray, epsilon: float) -> np.ndarray:
    """Additive smoothing of a vector (or of every row of a matrix)."""
    values = np.asarray(values, dtype=float)
    if epsilon == 0.0:
        return values
    n = values.shape[-1]
    return (epsilon + values) / (epsilon * n + np.sum(values, axis=-1, keepdims=True))


def smooth(p: Prevalence, cfg: SmoothingConfig | float) -> Prevalence:
    """Replace every p(c) by (eps + p(c)) / (eps * |C| + sum p)."""
    epsilon = cfg.epsilon if isinstance(cfg, SmoothingConfig) else float(cfg)
    if epsilon == 0.0:
        return p
    return Prevalence(p.codeframe, smooth_values(p.values, epsilon))


def project(p: Prevalence, sub: Iterable[str]) -> Prevalence:
    """Renormalize ``p`` onto the classes in ``sub`` (kept in codeframe order).

    Raises:
        ZeroMass: the classes in ``sub`` carry no mass under ``p``.
    """
    wanted = set(sub)
    unknown = wanted - set(p.codeframe.labels)
    if unknown:
        raise DimensionMismatch(f"labels {sorted(unknown)} not in codeframe {p.codeframe.labels}")
    idx = [i for i, label in enumerate(p.codeframe.labels) if label in wanted]
    if not idx:
        raise ZeroMass("empty sub-codeframe")
    mass = float(np.sum(p.values[idx]))
    if mass <= 0.0:
        raise ZeroMass(f"classes {[p.codeframe.labels[i] for i in idx]} have zero mass")
    if len(idx) == len(p.codeframe):
        return p
    # A one-class projection is a legal intermediate but not a Codeframe.
    sub_frame = _SubCodeframe(tuple(p.codeframe.labels[i] for i in idx))
    return Prevalence(sub_frame, p.values[idx] / mass)


@dataclass(frozen=True)
class _SubCodeframe(Codeframe):
    """Codeframe produced by projection; may hold a single class."""

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels or len(set(labels)) != len(labels):
            raise InvalidCodeframe(f"bad sub-codeframe {labels}")


def perverse_index(values: np.ndarray) -> int:
    """Index of the least prevalent class (lowest index on ties)."""
    return int(np.argmin(values))


def perverse_estimator(p: Prevalence) -> Prevalence:
    """Point mass on the least prevalent class of ``p``."""
    out = np.zeros(len(p))
    out[perverse_index(p.values)] = 1.0
    return Prevalence(p.codeframe, out)
