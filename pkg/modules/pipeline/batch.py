"""
Batch explanation over a sample of instances, with aggregated statistics.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import psutil

from modules.config import DEFAULT_SEED, JOBS, SAMPLE_LIMIT
from modules.reasoning.abductive import Order, RemovalOrder
from modules.reasoning.explainer import DEFAULT_KINDS, Explainer, ReasonReport, parse_kinds
from modules.reasoning.literals import Instance
from modules.reasoning.tree import DecisionTree
from modules.utils.formatters import format_bytes, format_delta

logger = logging.getLogger(__name__)

_worker: Optional[Explainer] = None


def sample_indices(count: int, limit: Optional[int] = None, seed: Optional[int] = None) -> np.ndarray:
    """At most `limit` distinct indices of range(count), sorted"""
    limit = SAMPLE_LIMIT if limit is None else limit
    seed = DEFAULT_SEED if seed is None else seed
    if count <= limit:
        return np.arange(count)
    chosen = np.random.default_rng(seed).choice(count, size=limit, replace=False)
    return np.sort(chosen)


def _explain(explainer: Explainer, index: int, x: Instance, kinds: Sequence[str]) -> ReasonReport:
    try:
        return explainer.explain(x, kinds, index)
    except Exception as e:
        logger.warning(f"Instance {index} failed: {e}")
        return ReasonReport(index, tuple(int(b) for b in x), error=f"{type(e).__name__}: {e}")


def _init_worker(tree: DecisionTree, cap: Optional[int], order: Order, deltas):
    global _worker
    _worker = Explainer(tree, cap, order, deltas)


def _explain_in_worker(job: Tuple[int, Instance, Sequence[str]]) -> ReasonReport:
    index, x, kinds = job
    return _explain(_worker, index, x, kinds)


@dataclass
class SizeSummary:
    median: float
    max: int
    mean: float
    stddev: float

    @classmethod
    def of(cls, values: Iterable[int]) -> Optional["SizeSummary"]:
        values = np.asarray(list(values), dtype=np.float64)
        if values.size == 0:
            return None
        return cls(float(np.median(values)), int(values.max()), float(values.mean()), float(values.std()))

    def to_dict(self) -> dict:
        return {"median": self.median, "max": self.max, "mean": round(self.mean, 6), "stddev": round(self.stddev, 6)}


@dataclass
class BatchStats:
    instances: int
    errors: int
    node_count: int
    depth: int
    accuracy: Optional[float] = None
    sizes: Dict[str, SizeSummary] = field(default_factory=dict)
    timings: Dict[str, Dict[str, float]] = field(default_factory=dict)
    counts: Dict[str, Dict[str, float]] = field(default_factory=dict)
    size_reduction: Optional[float] = None
    capped: int = 0
    rss_bytes: int = 0

    def to_dict(self) -> dict:
        return {
            "instances": self.instances,
            "errors": self.errors,
            "accuracy": self.accuracy,
            "tree": {"nodes": self.node_count, "depth": self.depth},
            "sizes": {kind: s.to_dict() for kind, s in self.sizes.items()},
            "timings_ms": self.timings,
            "counts": self.counts,
            "size_reduction": self.size_reduction,
            "capped": self.capped,
            "rss_bytes": self.rss_bytes,
            "rss": format_bytes(self.rss_bytes),
        }


def _size_key(kind: str, delta: Fraction) -> str:
    return f"probable@{format_delta(delta)}" if kind == "probable" else kind


def compute_stats(
    reports: Sequence[ReasonReport], tree: DecisionTree, accuracy: Optional[float] = None
) -> BatchStats:
    ok = [r for r in reports if r.error is None]
    stats = BatchStats(len(reports), len(reports) - len(ok), tree.node_count, tree.depth, accuracy)

    sizes: Dict[str, List[int]] = {}
    timings: Dict[str, List[float]] = {}
    for report in ok:
        for reason in report.reasons:
            sizes.setdefault(_size_key(reason.kind, reason.delta), []).append(reason.size)
        for kind, ms in report.timings.items():
            timings.setdefault(kind, []).append(ms)
    stats.sizes = {kind: SizeSummary.of(values) for kind, values in sizes.items()}
    stats.timings = {
        kind: {
            "p50": round(float(np.percentile(values, 50)), 3),
            "p90": round(float(np.percentile(values, 90)), 3),
            "max": round(float(np.max(values)), 3),
        }
        for kind, values in timings.items()
    }

    counts: Dict[str, List[int]] = {}
    for report in ok:
        if report.contrastive is not None:
            counts.setdefault("contrastive", []).append(len(report.contrastive))
        if report.importance is not None:
            counts.setdefault("sufficient", []).append(report.importance.total_count)
            stats.capped += int(not report.importance.exact)
        for kind, enumeration in report.enumerations.items():
            counts.setdefault(kind, []).append(len(enumeration.terms))
            stats.capped += int(not enumeration.complete)
    stats.counts = {
        kind: {"median": float(np.median(values)), "max": int(np.max(values))} for kind, values in counts.items()
    }

    reductions = [
        1 - report.size("minimal") / report.size("direct")
        for report in ok
        if report.size("minimal") is not None and report.size("direct")
    ]
    if reductions:
        stats.size_reduction = round(float(np.mean(reductions)), 6)

    stats.rss_bytes = psutil.Process().memory_info().rss
    return stats


def batch_explain(
    tree: DecisionTree,
    instances: Sequence[Instance],
    kinds: Sequence[str] = DEFAULT_KINDS,
    deltas: Optional[Iterable] = None,
    cap: Optional[int] = None,
    order: Order = RemovalOrder.PATH,
    sample_limit: Optional[int] = None,
    seed: Optional[int] = None,
    jobs: Optional[int] = None,
    accuracy: Optional[float] = None,
) -> Tuple[List[ReasonReport], BatchStats]:
    """
    Explain a seeded sample of the instances.

    Reports come back in input order whatever the number of jobs; a failing instance
    yields a report with `error` set and the batch goes on.
    """
    kinds = parse_kinds(kinds)
    jobs = JOBS if jobs is None else jobs
    chosen = sample_indices(len(instances), sample_limit, seed)
    batch = [(int(i), tuple(int(b) for b in instances[i]), kinds) for i in chosen]
    logger.info(f"Explaining {len(batch)} of {len(instances)} instances with {jobs} job(s)")

    deltas = None if deltas is None else list(deltas)
    explainer = Explainer(tree, cap, order, deltas)
    if jobs > 1 and len(batch) > 1:
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_init_worker, initargs=(tree, cap, order, deltas)
        ) as executor:
            reports = list(executor.map(_explain_in_worker, batch))
    else:
        reports = [_explain(explainer, index, x, k) for index, x, k in batch]

    stats = compute_stats(reports, tree, accuracy)
    if stats.errors:
        logger.warning(f"{stats.errors} of {stats.instances} instances failed")
    return reports, stats
