"""Binned accuracy analysis over similarity or frequency, with correlations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .evaluate import EvalRecord

KEYS = ("freeman", "frequency")
CORRELATION_PAIRS = (
    ("accuracy", "distance"),
    ("frequency", "freeman"),
    ("freeman", "accuracy"),
    ("frequency", "accuracy"),
)
CORRELATION_BASIS = "bin aggregates"
# scores like 3/10 should land in the bin whose edge is written 0.3
_EPS = 1e-9


class EmptyInput(ValueError):
    pass


@dataclass(frozen=True)
class BinRow:
    label: str
    instances: int
    average_frequency: float | None
    matches: int
    accuracy: float | None
    average_distance: float | None
    average_freeman: float | None

    def value(self, name: str) -> float | None:
        return {
            "accuracy": self.accuracy,
            "distance": self.average_distance,
            "frequency": self.average_frequency,
            "freeman": self.average_freeman,
        }[name]


@dataclass(frozen=True)
class BinAnalysis:
    key: str
    rows: list[BinRow]
    correlations: dict[tuple[str, str], float | None] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(r.instances for r in self.rows)

    @property
    def accuracy(self) -> float:
        return sum(r.matches for r in self.rows) / self.total


def _mean(xs: Sequence[float]) -> float | None:
    return sum(xs) / len(xs) if xs else None


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """Pearson r, or None when either side has zero variance or < 2 points."""
    if len(xs) < 2:
        return None
    x, y = np.asarray(xs, float), np.asarray(ys, float)
    dx, dy = x - x.mean(), y - y.mean()
    denom = math.sqrt(float(dx @ dx) * float(dy @ dy))
    if denom == 0.0:
        return None
    return float(dx @ dy) / denom


def _key_value(r: EvalRecord, key: str) -> float:
    v = r.freeman if key == "freeman" else r.frequency
    if v is None:
        raise ValueError(f"record {r.entry_id} has no {key} value")
    return float(v)


def quartile_edges(values: Sequence[float]) -> list[float]:
    return [float(q) for q in np.quantile(np.asarray(values, float), [0, 0.25, 0.5, 0.75, 1])]


def _label(key: str, lo: float, hi: float, k: int, quartiles: bool) -> str:
    if quartiles:
        return f"Q{k + 1}"
    if key == "freeman":
        return f"{hi * 100:g}%"
    return f"{lo:g}-{hi:g}"


def bin_analysis(
    records: Sequence[EvalRecord],
    key: str = "freeman",
    scheme: Sequence[float] | str = "quartiles",
) -> BinAnalysis:
    """Bucket records by ``key`` and aggregate per bucket.

    ``scheme`` is either ``"quartiles"`` or strictly increasing bin edges.
    Bins are right-closed, ``(lo, hi]``, except that the first bin also takes
    values equal to its lower edge.  Values outside the edges are an error.
    """
    if key not in KEYS:
        raise ValueError(f"key must be one of {KEYS}")
    if not records:
        raise EmptyInput("no records to analyze")
    values = [_key_value(r, key) for r in records]
    quartiles = isinstance(scheme, str)
    if quartiles:
        if scheme != "quartiles":
            raise ValueError(f"unknown binning scheme {scheme!r}")
        edges = quartile_edges(values)
    else:
        edges = [float(e) for e in scheme]
        if len(edges) < 2 or any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError("bin edges must be strictly increasing")

    buckets: list[list[EvalRecord]] = [[] for _ in range(len(edges) - 1)]
    for r, v in zip(records, values):
        if v < edges[0] - _EPS or v > edges[-1] + _EPS:
            raise ValueError(f"{key} value {v} outside bin edges")
        k = next(i for i in range(len(buckets)) if v <= edges[i + 1] + _EPS)
        buckets[k].append(r)

    rows = []
    for k, bucket in enumerate(buckets):
        scored = [r.distance for r in bucket if r.distance is not None]
        freemans = [r.freeman for r in bucket if r.freeman is not None]
        matches = sum(r.exact for r in bucket)
        rows.append(
            BinRow(
                label=_label(key, edges[k], edges[k + 1], k, quartiles),
                instances=len(bucket),
                average_frequency=_mean([r.frequency for r in bucket]),
                matches=matches,
                accuracy=matches / len(bucket) if bucket else None,
                average_distance=_mean(scored),
                average_freeman=_mean(freemans),
            )
        )

    filled = [r for r in rows if r.instances]
    correlations = {}
    for a, b in CORRELATION_PAIRS:
        pts = [(r.value(a), r.value(b)) for r in filled]
        pts = [(x, y) for x, y in pts if x is not None and y is not None]
        correlations[(a, b)] = pearson([p[0] for p in pts], [p[1] for p in pts])
    return BinAnalysis(key, rows, correlations)


def _fmt(v: float | None, spec: str) -> str:
    return "NA" if v is None else format(v, spec)


def format_bin_report(analysis: BinAnalysis) -> str:
    lines = [
        f"# key: {analysis.key}",
        f"# correlation basis: {CORRELATION_BASIS}",
        "bin\tinstances\tinstance_pct\tavg_frequency\tmatches\taccuracy\tavg_distance\tavg_freeman",
    ]
    total = analysis.total
    for r in analysis.rows:
        lines.append(
            "\t".join(
                [
                    r.label,
                    str(r.instances),
                    f"{100 * r.instances / total:.1f}",
                    _fmt(r.average_frequency, ".0f"),
                    str(r.matches),
                    _fmt(None if r.accuracy is None else 100 * r.accuracy, ".1f"),
                    _fmt(r.average_distance, ".2f"),
                    _fmt(r.average_freeman, ".3f"),
                ]
            )
        )
    lines.append(f"# total: {total}")
    lines.append(f"# accuracy: {100 * analysis.accuracy:.2f}")
    for (a, b), v in analysis.correlations.items():
        lines.append(f"# pearson {a}~{b}: {_fmt(v, '.3f')}")
    return "\n".join(lines) + "\n"
