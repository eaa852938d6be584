"""Scoring many test samples at once and summarising the scores."""
from __future__ import annotations

import csv
import io
import json
import math
import statistics
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import numpy as np

from .distributions import Codeframe, Prevalence, validate_prevalence
from .errors import (
    EmptyInput,
    InvalidPrevalence,
    MixedCodeframes,
    NegativeEntry,
    NotNormalized,
    ParseError,
)
from .measures import EvalContext, MeasureId, parse_measure, score

AGGREGATES = ("mean", "median")


@dataclass(frozen=True)
class SampleRecord:
    """True and predicted prevalences for one test sample."""

    sample_id: str
    true_prev: Prevalence
    pred_prev: Prevalence
    sample_size: int | None = None

    def __post_init__(self):
        if self.true_prev.codeframe.labels != self.pred_prev.codeframe.labels:
            raise MixedCodeframes(f"sample {self.sample_id}: true and predicted codeframes differ")
        if self.sample_size is not None and self.sample_size < 1:
            raise ValueError(f"sample {self.sample_id}: sample size must be >= 1")

    @property
    def codeframe(self) -> Codeframe:
        return self.true_prev.codeframe


@dataclass(frozen=True)
class MultiSampleReport:
    """Per-sample scores and their mean and median per measure."""

    measures: tuple[MeasureId, ...]
    per_sample: dict[str, dict[str, float]]
    aggregates: dict[str, dict[str, float]]

    def to_dict(self, agg: Sequence[str] = AGGREGATES) -> dict:
        return {
            "measures": [str(m) for m in self.measures],
            "per_sample": self.per_sample,
            "aggregates": {m: {k: v[k] for k in agg} for m, v in self.aggregates.items()},
        }

    def to_json(self, agg: Sequence[str] = AGGREGATES, **kwargs) -> str:
        # json writes floats with repr, the shortest string that reads back exactly.
        return json.dumps(self.to_dict(agg), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> MultiSampleReport:
        data = json.loads(text)
        return cls(
            tuple(parse_measure(m) for m in data["measures"]),
            {k: dict(v) for k, v in data["per_sample"].items()},
            {k: dict(v) for k, v in data["aggregates"].items()},
        )


def aggregate(values: Iterable[float]) -> dict[str, float]:
    """Mean and median of a non-empty collection of scores."""
    vals = list(values)
    if not vals:
        raise EmptyInput("nothing to aggregate")
    return {"mean": math.fsum(vals) / len(vals), "median": float(statistics.median(vals))}


def evaluate_samples(
    records: Sequence[SampleRecord],
    measures: Sequence[MeasureId | str],
    ctx: EvalContext | None = None,
) -> MultiSampleReport:
    """Score every record with every measure.

    Args:
        records: samples sharing one codeframe.
        measures: measures to apply.
        ctx: fixed smoothing for all records. When None, each record is
            smoothed with 1/(2|sample|) if its size is known and left
            unsmoothed otherwise.

    Raises:
        EmptyInput: no records.
        MixedCodeframes: records disagree on the codeframe.
    """
    if not records:
        raise EmptyInput("no samples to evaluate")
    measures = tuple(parse_measure(m) for m in measures)
    if not measures:
        raise EmptyInput("no measures requested")
    frame = records[0].codeframe.labels
    for r in records:
        if r.codeframe.labels != frame:
            raise MixedCodeframes(f"sample {r.sample_id} uses {r.codeframe.labels}, expected {frame}")
    ids = [r.sample_id for r in records]
    if len(set(ids)) != len(ids):
        raise ParseError("duplicate sample ids")

    per_sample: dict[str, dict[str, float]] = {}
    for r in sorted(records, key=lambda r: r.sample_id):
        if ctx is not None:
            rc = ctx
        elif r.sample_size is not None:
            rc = EvalContext.for_sample_size(r.sample_size)
        else:
            rc = EvalContext()
        per_sample[r.sample_id] = {str(m): score(m, r.true_prev, r.pred_prev, rc) for m in measures}
    aggregates = {str(m): aggregate(s[str(m)] for s in per_sample.values()) for m in measures}
    return MultiSampleReport(measures, per_sample, aggregates)


# Input ---------------------------------------------------------------------------

_PREV_HEADER = ("sample_id", "class", "true", "pred")
_COUNT_HEADER = ("sample_id", "class", "true_count", "pred_count")


def _number(text: str, locus: str) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise ParseError(f"not a number: {text!r}", locus) from None
    return value


def _build(sample_id: str, labels, true, pred, size, problems=None) -> SampleRecord | None:
    try:
        t = validate_prevalence(labels, true)
        p = validate_prevalence(labels, pred)
    except InvalidPrevalence as exc:
        err = type(exc)(f"sample {sample_id}: {exc}")
        if problems is None:
            raise err from None
        problems.append(err)
        return None
    return SampleRecord(sample_id, t, p, size)


def _check_frames(records: list[SampleRecord | None], problems=None) -> list[SampleRecord]:
    records = [r for r in records if r is not None]
    if not records and problems:
        return records
    if not records:
        raise EmptyInput("input holds no samples")
    frame = records[0].codeframe.labels
    for r in records[1:]:
        if r.codeframe.labels != frame:
            raise MixedCodeframes(
                f"sample {r.sample_id} has classes {r.codeframe.labels}, expected {frame}"
            )
    return records


def _read_csv(stream: TextIO, problems=None) -> list[SampleRecord]:
    reader = csv.reader(stream)
    header = next(reader, None)
    while header is not None and not any(cell.strip() for cell in header):
        header = next(reader, None)
    if header is None:
        raise EmptyInput("empty CSV input")
    header_t = tuple(h.strip().lower() for h in header)
    counts = header_t[:4] == _COUNT_HEADER
    if header_t[:4] not in (_PREV_HEADER, _COUNT_HEADER):
        raise ParseError(
            f"expected header {','.join(_PREV_HEADER)} or {','.join(_COUNT_HEADER)}", "line 1"
        )
    has_size = len(header_t) > 4 and header_t[4] == "size"

    samples: dict[str, dict] = {}
    for row in reader:
        locus = f"line {reader.line_num}"
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(header_t):
            raise ParseError(f"expected {len(header_t)} fields, got {len(row)}", locus)
        sid, label = row[0].strip(), row[1].strip()
        if not sid or not label:
            raise ParseError("empty sample_id or class", locus)
        entry = samples.setdefault(sid, {"labels": [], "true": [], "pred": [], "size": None, "line": locus})
        if label in entry["labels"]:
            raise ParseError(f"class {label!r} repeated for sample {sid}", locus)
        entry["labels"].append(label)
        entry["true"].append(_number(row[2], locus))
        entry["pred"].append(_number(row[3], locus))
        if has_size and row[4].strip():
            size = _number(row[4], locus)
            if not math.isfinite(size) or size != int(size) or size < 1:
                raise ParseError(f"size must be a positive integer, got {row[4]!r}", locus)
            if entry["size"] not in (None, int(size)):
                raise ParseError(f"conflicting sizes for sample {sid}", locus)
            entry["size"] = int(size)

    if not samples:
        raise EmptyInput("CSV input has a header but no rows")
    first = next(iter(samples.values()))["labels"]
    records = []
    for sid, e in samples.items():
        if set(e["labels"]) != set(first) or len(e["labels"]) != len(first):
            raise MixedCodeframes(f"sample {sid} has classes {e['labels']}, expected {first}")
        order = [e["labels"].index(label) for label in first]
        true = np.array(e["true"])[order]
        pred = np.array(e["pred"])[order]
        size = e["size"]
        if counts:
            try:
                true, pred, size = _from_counts(sid, true, pred, size)
            except InvalidPrevalence as exc:
                if problems is None:
                    raise
                problems.append(exc)
                continue
        records.append(_build(sid, first, true, pred, size, problems))
    return _check_frames(records, problems)


def _from_counts(sid: str, true: np.ndarray, pred: np.ndarray, size):
    for name, arr in (("true", true), ("pred", pred)):
        if np.any(arr < 0):
            raise NegativeEntry(f"sample {sid}: negative {name} count")
        if not arr.sum() > 0:
            raise NotNormalized(f"sample {sid}: {name} counts sum to 0")
    total = true.sum()
    if size is None and np.all(true == np.round(true)):
        size = int(total)
    return true / total, pred / pred.sum(), size


def _read_json(stream: TextIO, problems=None) -> list[SampleRecord]:
    text = stream.read()
    if not text.strip():
        raise EmptyInput("empty JSON input")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from None
    if not isinstance(data, list):
        raise ParseError("expected a JSON array of sample objects", "record 0")
    if not data:
        raise EmptyInput("JSON array holds no samples")
    records = []
    first = None
    for i, obj in enumerate(data):
        locus = f"record {i}"
        if not isinstance(obj, dict) or not {"id", "true", "pred"} <= set(obj):
            raise ParseError("each record needs 'id', 'true' and 'pred'", locus)
        true, pred = obj["true"], obj["pred"]
        if not isinstance(true, dict) or not isinstance(pred, dict):
            raise ParseError("'true' and 'pred' must map class to number", locus)
        labels = list(true) if first is None else first
        if set(true) != set(labels) or set(pred) != set(labels):
            raise MixedCodeframes(f"sample {obj['id']} has classes {sorted(true)}, expected {labels}")
        first = labels
        size = obj.get("size")
        if size is not None and (isinstance(size, bool) or not isinstance(size, int) or size < 1):
            raise ParseError(f"size must be a positive integer, got {size!r}", locus)
        try:
            tv = [float(true[c]) for c in labels]
            pv = [float(pred[c]) for c in labels]
        except (TypeError, ValueError):
            raise ParseError("prevalences must be numbers", locus) from None
        records.append(_build(str(obj["id"]), labels, tv, pv, size, problems))
    return _check_frames(records, problems)


def ingest(source: str | Path | TextIO, format: str | None = None) -> list[SampleRecord]:
    """Read sample records from CSV (long form) or JSON.

    Args:
        source: a path or an open text stream.
        format: ``"csv"`` or ``"json"``; inferred from the file suffix when
            omitted (default csv).

    Raises:
        ParseError: malformed input, with a line or record locus.
        EmptyInput: no samples.
        MixedCodeframes: samples over different class sets.
        InvalidPrevalence: a sample's values do not form a distribution.
    """
    return _open(source, format, None)


def ingest_collect(
    source: str | Path | TextIO, format: str | None = None
) -> tuple[list[SampleRecord], list[InvalidPrevalence]]:
    """Like :func:`ingest`, but gathers per-sample validation errors.

    Structural problems (ParseError, EmptyInput, MixedCodeframes) still raise.
    """
    problems: list[InvalidPrevalence] = []
    records = _open(source, format, problems)
    return records, problems


def _open(source, format, problems):
    if isinstance(source, (str, Path)):
        path = Path(source)
        fmt = (format or path.suffix.lstrip(".") or "csv").lower()
        with open(path, encoding="utf-8", newline="") as fh:
            return _dispatch(fh, fmt, problems)
    return _dispatch(source, (format or "csv").lower(), problems)


def _dispatch(stream: TextIO, fmt: str, problems) -> list[SampleRecord]:
    if fmt == "csv":
        return _read_csv(stream, problems)
    if fmt == "json":
        return _read_json(stream, problems)
    raise ParseError(f"unknown input format {fmt!r}; use csv or json")


def ingest_text(text: str, format: str = "csv") -> list[SampleRecord]:
    return ingest(io.StringIO(text), format)


__all__ = [
    "MultiSampleReport",
    "SampleRecord",
    "aggregate",
    "evaluate_samples",
    "ingest",
    "ingest_collect",
    "ingest_text",
]
