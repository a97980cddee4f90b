"""
One-instance explanation portfolio.

Explainer holds a tree plus the enumeration cap, removal order and δ list, and turns an
instance into a ReasonReport. Instances classified 0 are explained on the negated tree.
"""
import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from modules.config import DEFAULT_DELTAS, ENUMERATION_CAP
from modules.reasoning.abductive import (
    Order,
    Reason,
    RemovalOrder,
    direct_reason,
    enumerate_minimal_reasons,
    minimal_reason,
    minimal_reason_greedy,
    parse_delta,
    probable_reason,
    removal_sequence,
    sufficient_reason,
)
from modules.reasoning.contrastive import (
    FeatureReport,
    ImportanceMap,
    all_contrastive,
    contrastive_stats,
    count_and_importance,
    enumerate_sufficient_reasons,
    explanatory_features,
)
from modules.reasoning.errors import InputError
from modules.reasoning.literals import Instance, Term
from modules.reasoning.restriction import restrict
from modules.reasoning.tree import DecisionTree, check_instance, evaluate, negate

logger = logging.getLogger(__name__)

ALL_KINDS = (
    "direct",
    "sufficient",
    "minimal",
    "greedy-minimal",
    "probable",
    "contrastive",
    "features",
    "importance",
    "all-minimal",
    "all-sufficient",
)
DEFAULT_KINDS = ("direct", "sufficient", "minimal")


def parse_kinds(value) -> Tuple[str, ...]:
    """'direct,minimal' or 'all' into a tuple of kinds, in canonical order"""
    if isinstance(value, str):
        value = [part.strip() for part in value.split(",") if part.strip()]
    requested = set(value)
    if "all" in requested:
        return ALL_KINDS
    unknown = requested - set(ALL_KINDS)
    if unknown:
        raise InputError(f"unknown kinds {sorted(unknown)}, expected some of {', '.join(ALL_KINDS)}")
    if not requested:
        raise InputError("no explanation kind requested")
    return tuple(kind for kind in ALL_KINDS if kind in requested)


@dataclass
class Enumeration:
    terms: List[Term]
    complete: bool

    def to_dict(self) -> dict:
        return {
            "count": len(self.terms),
            "complete": self.complete,
            "terms": [t.to_ints() for t in self.terms],
        }


@dataclass
class ReasonReport:
    index: int
    instance: Instance
    prediction: Optional[int] = None
    reasons: List[Reason] = field(default_factory=list)
    contrastive: Optional[List[Term]] = None
    features: Optional[FeatureReport] = None
    importance: Optional[ImportanceMap] = None
    enumerations: Dict[str, Enumeration] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)
    error: Optional[str] = None

    def reason(self, kind: str, delta: Optional[Fraction] = None) -> Optional[Reason]:
        for reason in self.reasons:
            if reason.kind == kind and (delta is None or reason.delta == delta):
                return reason
        return None

    def size(self, kind: str, delta: Optional[Fraction] = None) -> Optional[int]:
        reason = self.reason(kind, delta)
        return None if reason is None else reason.size

    def to_dict(self) -> dict:
        data = {
            "index": self.index,
            "instance": "".join(str(b) for b in self.instance),
            "prediction": self.prediction,
            "reasons": [r.to_dict() for r in self.reasons],
        }
        if self.contrastive is not None:
            data["contrastive"] = {
                "terms": [t.to_ints() for t in self.contrastive],
                **contrastive_stats(self.contrastive),
            }
        if self.features is not None:
            data["features"] = self.features.to_dict()
        if self.importance is not None:
            data["importance"] = self.importance.to_dict()
        if self.enumerations:
            data["enumerations"] = {kind: e.to_dict() for kind, e in self.enumerations.items()}
        data["timings_ms"] = {kind: round(ms, 3) for kind, ms in self.timings.items()}
        data["error"] = self.error
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


class Explainer:
    def __init__(
        self,
        tree: DecisionTree,
        cap: Optional[int] = None,
        order: Order = RemovalOrder.PATH,
        deltas: Optional[Iterable] = None,
    ):
        self.tree = tree
        self.negated = negate(tree)
        self.cap = ENUMERATION_CAP if cap is None else cap
        if self.cap < 1:
            raise InputError(f"cap must be a positive integer, got {self.cap}")
        self.order = order
        self.deltas = [parse_delta(d) for d in (DEFAULT_DELTAS if deltas is None else deltas)]

    @contextmanager
    def _timed(self, report: ReasonReport, kind: str):
        start = time.perf_counter()
        yield
        report.timings[kind] = report.timings.get(kind, 0.0) + (time.perf_counter() - start) * 1000

    def explain(self, x, kinds: Sequence[str] = DEFAULT_KINDS, index: int = 0) -> ReasonReport:
        kinds = parse_kinds(kinds)
        x = check_instance(self.tree, x)
        report = ReasonReport(index, x)
        report.prediction = evaluate(self.tree, x)
        tree = self.tree if report.prediction == 1 else self.negated

        with self._timed(report, "restrict"):
            g = restrict(tree, x)
        with self._timed(report, "direct"):
            direct = direct_reason(tree, x)
        if "direct" in kinds:
            report.reasons.append(direct)
        if "sufficient" in kinds:
            with self._timed(report, "sufficient"):
                sequence = removal_sequence(tree, x, self.order)
                report.reasons.append(sufficient_reason(g, direct.term, sequence, origin="direct"))
        if "minimal" in kinds:
            with self._timed(report, "minimal"):
                report.reasons.append(minimal_reason(g))
        if "greedy-minimal" in kinds:
            with self._timed(report, "greedy-minimal"):
                report.reasons.append(minimal_reason_greedy(g))
        if "probable" in kinds:
            with self._timed(report, "probable"):
                for delta in self.deltas:
                    report.reasons.append(probable_reason(tree, x, delta, self.order))
        if "contrastive" in kinds:
            with self._timed(report, "contrastive"):
                report.contrastive = all_contrastive(g)
        if "features" in kinds:
            with self._timed(report, "features"):
                report.features = explanatory_features(g)
        if "importance" in kinds:
            with self._timed(report, "importance"):
                report.importance = count_and_importance(g, self.cap)
        if "all-minimal" in kinds:
            with self._timed(report, "all-minimal"):
                reasons, complete = enumerate_minimal_reasons(g, self.cap)
                report.enumerations["all-minimal"] = Enumeration([r.term for r in reasons], complete)
        if "all-sufficient" in kinds:
            with self._timed(report, "all-sufficient"):
                terms, complete = enumerate_sufficient_reasons(g, self.cap)
                report.enumerations["all-sufficient"] = Enumeration(terms, complete)

        logger.debug(f"Explained instance {index} (T(x)={report.prediction}) with {len(g)} clauses")
        return report
