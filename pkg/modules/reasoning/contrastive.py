"""
Contrastive explanations, explanatory features and importance.

Both families come out of the minimized restricted CNF: its clauses are the contrastive
explanations and its minimal hitting sets are the sufficient reasons.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from pathlib import Path
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from modules.reasoning.abductive import canonical
from modules.reasoning.errors import InputError
from modules.reasoning.hitting_sets import iter_minimal_transversals
from modules.reasoning.literals import Literal, Term
from modules.reasoning.restriction import MonotoneClauseSet, minimize

logger = logging.getLogger(__name__)

IMPORTANCE_COLUMNS = ["variable", "polarity", "importance_num", "importance_den"]


def all_literals(n: int) -> List[Literal]:
    return [Literal(v, polarity) for v in range(n) for polarity in (True, False)]


@dataclass(frozen=True)
class FeatureReport:
    necessary: FrozenSet[Literal]
    relevant: FrozenSet[Literal]
    irrelevant: FrozenSet[Literal]

    def to_dict(self) -> dict:
        return {
            "necessary": sorted(lit.to_int() for lit in self.necessary),
            "relevant": sorted(lit.to_int() for lit in self.relevant),
            "irrelevant": sorted(lit.to_int() for lit in self.irrelevant),
        }


@dataclass(frozen=True)
class ImportanceMap:
    n: int
    total_count: int
    exact: bool
    importance: Dict[Literal, Fraction] = field(default_factory=dict)

    def __getitem__(self, literal: Literal) -> Fraction:
        return self.importance.get(literal, Fraction(0))

    def necessary(self) -> FrozenSet[Literal]:
        return frozenset(lit for lit, value in self.importance.items() if value == 1)

    def relevant(self) -> FrozenSet[Literal]:
        return frozenset(lit for lit, value in self.importance.items() if value > 0)

    def to_dict(self) -> dict:
        return {
            "count": self.total_count,
            "exact": self.exact,
            "importance": [
                [lit.to_int(), f"{value.numerator}/{value.denominator}"]
                for lit, value in sorted(self.importance.items())
                if value
            ],
        }


def _report(n: int, necessary: Iterable[Literal], relevant: Iterable[Literal]) -> FeatureReport:
    relevant = frozenset(relevant)
    irrelevant = frozenset(all_literals(n)) - relevant
    return FeatureReport(frozenset(necessary), relevant, irrelevant)


def _frequencies(n: int, terms: Sequence[Term]) -> Dict[Literal, Fraction]:
    if not terms:
        return {}
    counts = Counter(lit for t in terms for lit in t.literals)
    return {lit: Fraction(counts[lit], len(terms)) for lit in all_literals(n) if counts[lit]}


def all_contrastive(g: MonotoneClauseSet) -> List[Term]:
    """The ⊆-minimal restricted clauses, read as the literals to switch"""
    m = minimize(g)
    return canonical(m.to_term(c) for c in m.clauses)


def explanatory_features(g: MonotoneClauseSet) -> FeatureReport:
    m = minimize(g)
    necessary = [m.literal(c[0]) for c in m.clauses if len(c) == 1]
    relevant = [m.literal(v) for v in m.variables()]
    return _report(g.n, necessary, relevant)


def enumerate_sufficient_reasons(
    g: MonotoneClauseSet,
    cap: int,
    sink: Optional[Callable[[Term], None]] = None,
) -> Tuple[List[Term], bool]:
    """
    Every sufficient reason (minimal transversal of minimize(g)), at most cap of them.

    A capped run keeps the first cap transversals in search order, which depends only on
    g, and returns them sorted. They need not be the first cap of the sorted full list.
    """
    if cap < 1:
        raise InputError(f"cap must be a positive integer, got {cap}")
    m = minimize(g)
    found = list(islice(iter_minimal_transversals(m.clauses), cap + 1))
    complete = len(found) <= cap
    if not complete:
        logger.warning(f"Sufficient reason enumeration stopped at cap {cap}")
    terms = canonical(m.to_term(chosen) for chosen in found[:cap])
    if sink is not None:
        for t in terms:
            sink(t)
    return terms, complete


def count_and_importance(g: MonotoneClauseSet, cap: int) -> ImportanceMap:
    terms, complete = enumerate_sufficient_reasons(g, cap)
    return ImportanceMap(g.n, len(terms), complete, _frequencies(g.n, terms))


def contrastive_stats(explanations: Sequence[Term]) -> dict:
    if not explanations:
        return {"count": 0, "min_size": None, "median_size": None, "max_size": None}
    sizes = np.array([len(t) for t in explanations])
    return {
        "count": len(explanations),
        "min_size": int(sizes.min()),
        "median_size": float(np.median(sizes)),
        "max_size": int(sizes.max()),
    }


def contrastive_features(explanations: Sequence[Term], n: int) -> FeatureReport:
    """Necessary and relevant literals with respect to the contrastive family"""
    if not explanations:
        return _report(n, (), ())
    necessary = frozenset.intersection(*(t.literals for t in explanations))
    relevant = frozenset.union(*(t.literals for t in explanations))
    return _report(n, necessary, relevant)


def contrastive_importance(explanations: Sequence[Term], n: int) -> ImportanceMap:
    return ImportanceMap(n, len(explanations), True, _frequencies(n, explanations))


def importance_rows(imap: ImportanceMap) -> pd.DataFrame:
    """One row per literal, all 2n of them, zero importances included"""
    rows = []
    for lit in all_literals(imap.n):
        value = imap[lit]
        rows.append((lit.variable + 1, int(lit.polarity), value.numerator, value.denominator))
    return pd.DataFrame(rows, columns=IMPORTANCE_COLUMNS)


def write_importance_csv(path: Union[str, Path], imap: ImportanceMap) -> None:
    importance_rows(imap).to_csv(path, index=False)
    logger.info(f"Importance written to {path}")
