"""Evaluation measures for quantification and their per-distribution bounds.

Each measure scores a predicted prevalence vector against a true one; higher
means worse. RAE, NRAE, DR, KLD, NKLD and PD are computed on additively
smoothed vectors, the others on the raw ones, unless the context forces
smoothing on or off.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .distributions import Prevalence, SmoothingConfig, as_prevalence, smooth_values
from .errors import DimensionMismatch, NotBinary, UndefinedValue, UnsupportedMeasure


class MeasureId(str, enum.Enum):
    AE = "AE"
    NAE = "NAE"
    RAE = "RAE"
    NRAE = "NRAE"
    SE = "SE"
    NSE = "NSE"
    DR = "DR"
    KLD = "KLD"
    NKLD = "NKLD"
    PD = "PD"
    NAS = "NAS"
    NSS = "NSS"

    def __str__(self) -> str:
        return self.value

    @property
    def binary_only(self) -> bool:
        return self in (MeasureId.NAS, MeasureId.NSS)

    @property
    def smoothed_by_default(self) -> bool:
        return self in _SMOOTHED


# The nine measures that make up the property matrix, in display order.
TABLE_MEASURES = (
    MeasureId.AE,
    MeasureId.NAE,
    MeasureId.RAE,
    MeasureId.NRAE,
    MeasureId.SE,
    MeasureId.DR,
    MeasureId.KLD,
    MeasureId.NKLD,
    MeasureId.PD,
)

BOUNDED = (MeasureId.AE, MeasureId.RAE, MeasureId.SE, MeasureId.KLD, MeasureId.PD)

_SMOOTHED = frozenset(
    {MeasureId.RAE, MeasureId.NRAE, MeasureId.DR, MeasureId.KLD, MeasureId.NKLD, MeasureId.PD}
)

# Bray-Curtis dissimilarity between two distributions reduces to AE.
_ALIASES = {"BCD": MeasureId.AE, "BRAY-CURTIS": MeasureId.AE}


def parse_measure(name: str | MeasureId) -> MeasureId:
    if isinstance(name, MeasureId):
        return name
    key = str(name).strip().upper().replace("_", "-")
    if key in _ALIASES:
        return _ALIASES[key]
    try:
        return MeasureId(key)
    except ValueError:
        raise UnsupportedMeasure(f"unknown measure {name!r}") from None


@dataclass(frozen=True)
class EvalContext:
    """Smoothing settings for a measure evaluation.

    Attributes:
        smoothing: the additive smoothing constant.
        force_smoothing: None applies the per-measure default; True/False
            smooths every measure or none.
    """

    smoothing: SmoothingConfig = field(default_factory=SmoothingConfig)
    force_smoothing: bool | None = None

    @classmethod
    def with_epsilon(cls, epsilon: float, force_smoothing: bool | None = None) -> EvalContext:
        return cls(SmoothingConfig(epsilon=epsilon), force_smoothing)

    @classmethod
    def for_sample_size(cls, sample_size: int) -> EvalContext:
        return cls(SmoothingConfig.from_sample_size(sample_size))

    @property
    def epsilon(self) -> float:
        return self.smoothing.epsilon

    def smooths(self, measure: MeasureId) -> bool:
        if self.force_smoothing is not None:
            return self.force_smoothing
        return measure in _SMOOTHED


DEFAULT_CONTEXT = EvalContext()


def _applied_epsilon(measure: MeasureId, epsilon: float, smooth: bool | None) -> float:
    use = measure in _SMOOTHED if smooth is None else smooth
    return epsilon if use else 0.0


def _smoothed_zero(epsilon: float, n: int) -> float:
    """Value a zero entry takes after smoothing."""
    return epsilon / (epsilon * n + 1.0)


def nkld_from_kld(k):
    """2 e^K / (e^K + 1) - 1, written as tanh(K/2) so large K cannot overflow."""
    return np.tanh(np.asarray(k, dtype=float) / 2.0)


# Batched evaluation ---------------------------------------------------------


def evaluate_rows(
    measure: MeasureId | str,
    P: np.ndarray,
    Q: np.ndarray,
    epsilon: float = 0.0,
    smooth: bool | None = None,
) -> np.ndarray:
    """Score every row pair of ``P`` (true) and ``Q`` (predicted).

    No validation happens here; undefined cells come back as inf or nan.
    """
    measure = parse_measure(measure)
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    eps = _applied_epsilon(measure, epsilon, smooth)
    Ps = smooth_values(P, eps)
    Qs = smooth_values(Q, eps)

    if measure is MeasureId.AE:
        return _kernels.run("abs_err", Ps, Qs)
    if measure is MeasureId.NAE:
        return _kernels.run("abs_err", Ps, Qs) / bound_rows(MeasureId.AE, Ps, eps)
    if measure is MeasureId.RAE:
        return _kernels.run("rel_abs_err", Ps, Qs)
    if measure is MeasureId.NRAE:
        return _kernels.run("rel_abs_err", Ps, Qs) / bound_rows(MeasureId.RAE, Ps, eps)
    if measure is MeasureId.SE:
        return _kernels.run("sq_err", Ps, Qs)
    if measure is MeasureId.NSE:
        return _kernels.run("sq_err", Ps, Qs) / bound_rows(MeasureId.SE, Ps, eps)
    if measure is MeasureId.DR:
        return _kernels.run("discordance", Ps, Qs)
    if measure is MeasureId.KLD:
        return _kernels.run("kl", Ps, Qs)
    if measure is MeasureId.NKLD:
        return nkld_from_kld(_kernels.run("kl", Ps, Qs))
    if measure is MeasureId.PD:
        return _kernels.run("pearson", Ps, Qs)
    # NAS / NSS: binary only, read off the first class.
    if Ps.shape[1] != 2:
        raise NotBinary(f"{measure} needs a 2-class codeframe, got {Ps.shape[1]}")
    p1, q1 = Ps[:, 0], Qs[:, 0]
    nas = np.abs(p1 - q1) / np.maximum(p1, 1.0 - p1)
    return nas if measure is MeasureId.NAS else nas**2


def bound_rows(measure: MeasureId | str, Ps: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
    """Worst-case score of each (already smoothed) row of ``Ps``.

    The worst prediction is the smoothed point mass on the least prevalent
    class; ``epsilon`` is the smoothing constant that was applied to ``Ps``.
    With ``epsilon == 0`` the closed forms reduce to the textbook bounds,
    e.g. 2(1 - min p)/|C| for AE.
    """
    measure = parse_measure(measure)
    Ps = np.atleast_2d(np.asarray(Ps, dtype=float))
    m, n = Ps.shape
    zero = _smoothed_zero(epsilon, n)
    top = 1.0 - (n - 1) * zero
    star = np.argmin(Ps, axis=1)
    rows = np.arange(m)
    pstar = Ps[rows, star]
    others = np.ones_like(Ps, dtype=bool)
    others[rows, star] = False
    rest = np.where(others, Ps, np.nan)

    with np.errstate(divide="ignore", invalid="ignore"):
        if measure is MeasureId.AE:
            return ((top - pstar) + np.nansum(np.abs(rest - zero), axis=1)) / n
        if measure is MeasureId.RAE:
            return ((top - pstar) / pstar + np.nansum(np.abs(rest - zero) / rest, axis=1)) / n
        if measure is MeasureId.SE:
            return ((top - pstar) ** 2 + np.nansum((rest - zero) ** 2, axis=1)) / n
        if measure is MeasureId.KLD:
            head = np.where(pstar > 0, pstar * np.log(pstar / top), 0.0)
            tail = np.where(others & (Ps > 0), Ps * np.log(Ps / zero), 0.0)
            return head + np.sum(tail, axis=1)
        if measure is MeasureId.PD:
            return ((pstar - top) ** 2 / top + np.nansum((rest - zero) ** 2 / zero, axis=1)) / n
    raise UnsupportedMeasure(f"no data-dependent bound for {measure}; normalized measures are bounded by 1")


# Single-pair API ------------------------------------------------------------


def _pair(p, p_hat) -> tuple[Prevalence, Prevalence]:
    p = as_prevalence(p)
    p_hat = as_prevalence(p_hat, p.codeframe if not isinstance(p_hat, Prevalence) else None)
    if p.codeframe.labels != p_hat.codeframe.labels:
        raise DimensionMismatch(
            f"codeframes differ: {p.codeframe.labels} vs {p_hat.codeframe.labels}"
        )
    return p, p_hat


def _check_defined(measure: MeasureId, pv: np.ndarray, qv: np.ndarray) -> None:
    if measure in (MeasureId.RAE, MeasureId.NRAE) and np.any(pv == 0):
        raise UndefinedValue(f"{measure}: true prevalence is 0 for some class and epsilon is 0")
    if measure is MeasureId.DR and np.any((pv == 0) & (qv == 0)):
        raise UndefinedValue("DR: both prevalences are 0 for some class and epsilon is 0")
    if measure in (MeasureId.KLD, MeasureId.NKLD) and np.any((qv == 0) & (pv > 0)):
        raise UndefinedValue(f"{measure}: predicted prevalence is 0 where true is not, epsilon is 0")
    if measure is MeasureId.PD and np.any(qv == 0):
        raise UndefinedValue("PD: predicted prevalence is 0 for some class and epsilon is 0")


def score(measure: MeasureId | str, p, p_hat, ctx: EvalContext | None = None) -> float:
    """Score ``p_hat`` against ``p`` with ``measure``.

    ``p`` and ``p_hat`` may be Prevalence objects or plain sequences.

    Raises:
        DimensionMismatch: the two distributions live on different codeframes.
        NotBinary: NAS/NSS on a codeframe that is not binary.
        UndefinedValue: zero denominator or log of zero while unsmoothed.
    """
    measure = parse_measure(measure)
    ctx = ctx or DEFAULT_CONTEXT
    p, p_hat = _pair(p, p_hat)
    if measure.binary_only and len(p) != 2:
        raise NotBinary(f"{measure} is only defined for 2 classes, got {len(p)}")
    eps = ctx.epsilon if ctx.smooths(measure) else 0.0
    if eps == 0.0:
        _check_defined(measure, p.values, p_hat.values)
    return float(evaluate_rows(measure, p.values, p_hat.values, eps, smooth=eps > 0)[0])


def upper_bound(measure: MeasureId | str, p, ctx: EvalContext | None = None) -> float:
    """Largest score ``measure`` can give any prediction for true ``p``.

    Defined for AE, RAE, SE, KLD and PD; the normalized measures are bounded
    by 1 by construction.
    """
    measure = parse_measure(measure)
    if measure not in BOUNDED:
        raise UnsupportedMeasure(f"upper_bound is defined for {[str(m) for m in BOUNDED]}, not {measure}")
    ctx = ctx or DEFAULT_CONTEXT
    p = as_prevalence(p)
    eps = ctx.epsilon if ctx.smooths(measure) else 0.0
    if eps == 0.0:
        if measure is MeasureId.RAE and np.min(p.values) == 0:
            raise UndefinedValue("RAE bound: min true prevalence is 0 and epsilon is 0")
        if measure in (MeasureId.KLD, MeasureId.PD):
            raise UndefinedValue(f"{measure} is unbounded without smoothing")
    Ps = smooth_values(p.values, eps)
    return float(bound_rows(measure, Ps, eps)[0])


def ae(p, p_hat, ctx=None):
    """Absolute error: mean over classes of |p_hat(c) - p(c)|."""
    return score(MeasureId.AE, p, p_hat, ctx)


def nae(p, p_hat, ctx=None):
    """AE divided by its largest attainable value for ``p``."""
    return score(MeasureId.NAE, p, p_hat, ctx)


def rae(p, p_hat, ctx=None):
    """Relative absolute error: mean of |p_hat(c) - p(c)| / p(c), smoothed."""
    return score(MeasureId.RAE, p, p_hat, ctx)


def nrae(p, p_hat, ctx=None):
    return score(MeasureId.NRAE, p, p_hat, ctx)


def se(p, p_hat, ctx=None):
    """Squared error: mean of (p(c) - p_hat(c))**2."""
    return score(MeasureId.SE, p, p_hat, ctx)


def nse(p, p_hat, ctx=None):
    return score(MeasureId.NSE, p, p_hat, ctx)


def dr(p, p_hat, ctx=None):
    """Discordance ratio: mean of |p - p_hat| / max(p, p_hat), smoothed."""
    return score(MeasureId.DR, p, p_hat, ctx)


def kld(p, p_hat, ctx=None):
    """Kullback-Leibler divergence of ``p_hat`` from ``p`` (natural log), smoothed."""
    return score(MeasureId.KLD, p, p_hat, ctx)


def nkld(p, p_hat, ctx=None):
    """KLD squashed into [0, 1) by a rescaled logistic function."""
    return score(MeasureId.NKLD, p, p_hat, ctx)


def pd(p, p_hat, ctx=None):
    """Pearson (chi-square) divergence: mean of (p - p_hat)**2 / p_hat, smoothed."""
    return score(MeasureId.PD, p, p_hat, ctx)


def nas(p, p_hat, ctx=None):
    return score(MeasureId.NAS, p, p_hat, ctx)


def nss(p, p_hat, ctx=None):
    return score(MeasureId.NSS, p, p_hat, ctx)


bcd = ae
