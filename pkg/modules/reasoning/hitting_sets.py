"""
Hitting-set algorithms over families of variable sets.

Everything here works on plain tuples of variable indices; polarity lives in the
MonotoneClauseSet that owns the clauses.
"""
import logging
from collections import Counter
from itertools import combinations
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

Family = Sequence[Tuple[int, ...]]


def _as_sets(clauses: Iterable[Iterable[int]]) -> List[FrozenSet[int]]:
    return [frozenset(c) for c in clauses]


def degrees(clauses: Iterable[Iterable[int]]) -> Counter:
    """Number of clauses each variable occurs in"""
    return Counter(v for c in clauses for v in c)


def disjoint_lower_bound(clauses: Iterable[FrozenSet[int]]) -> int:
    """Size of a greedy packing of pairwise-disjoint clauses, shortest first"""
    used = set()
    packed = 0
    for clause in sorted(clauses, key=lambda c: (len(c), sorted(c))):
        if used.isdisjoint(clause):
            used.update(clause)
            packed += 1
    return packed


def greedy_cover(clauses: Family) -> List[int]:
    """Repeatedly take the variable hitting most uncovered clauses, smallest index on ties"""
    uncovered = _as_sets(clauses)
    chosen = []
    while uncovered:
        degree = degrees(uncovered)
        best = min(degree, key=lambda v: (-degree[v], v))
        chosen.append(best)
        uncovered = [c for c in uncovered if best not in c]
    return chosen


def prune(chosen: Sequence[int], clauses: Family, order: Optional[Sequence[int]] = None) -> List[int]:
    """
    Drop redundant variables from a hitting set.

    Variables are tried in `order` (defaults to ascending index); one is removed when
    every clause it hits is hit by another kept variable. The result is a minimal
    hitting set contained in `chosen`.
    """
    kept = set(chosen)
    if order is None:
        order = sorted(kept)
    clauses = _as_sets(clauses)
    hits = [len(c & kept) for c in clauses]
    occurs = {v: [i for i, c in enumerate(clauses) if v in c] for v in kept}
    for v in order:
        if v not in kept:
            continue
        if all(hits[i] > 1 for i in occurs[v]):
            kept.discard(v)
            for i in occurs[v]:
                hits[i] -= 1
    return sorted(kept)


class BranchAndBound:
    """Exact minimum-cardinality hitting set"""

    def __init__(self, clauses: Family):
        self.clauses = _as_sets(clauses)
        self.best: List[int] = []
        self.nodes = 0

    def solve(self) -> List[int]:
        if not self.clauses:
            return []
        initial = greedy_cover(self.clauses)
        self.best = prune(initial, self.clauses)
        logger.debug(f"Branch and bound: {len(self.clauses)} clauses, greedy bound {len(self.best)}")
        self._branch([], self.clauses)
        logger.debug(f"Branch and bound: optimum {len(self.best)} after {self.nodes} nodes")
        return sorted(self.best)

    def _branch(self, chosen: List[int], remaining: List[FrozenSet[int]]):
        self.nodes += 1
        if not remaining:
            if len(chosen) < len(self.best):
                self.best = list(chosen)
            return
        # a clause whose candidates were all excluded cannot be hit any more
        if any(not c for c in remaining):
            return
        if len(chosen) + disjoint_lower_bound(remaining) >= len(self.best):
            return

        clause = min(remaining, key=lambda c: (len(c), sorted(c)))
        degree = degrees(remaining)
        excluded = set()
        for v in sorted(clause, key=lambda u: (-degree[u], u)):
            rest = [c - excluded for c in remaining if v not in c]
            self._branch(chosen + [v], rest)
            excluded.add(v)


def min_hitting_set(clauses: Family) -> List[int]:
    return BranchAndBound(clauses).solve()


def iter_minimum_hitting_sets(clauses: Family, k: int) -> Iterator[Tuple[int, ...]]:
    """
    Every hitting set of size k, lexicographically ordered on sorted indices.

    k must be the optimum: hitting sets found below k stop the branch, so supersets
    padded up to k are never produced.
    """
    clauses = _as_sets(clauses)
    if not clauses:
        if k == 0:
            yield ()
        return
    universe = sorted(set().union(*clauses))

    def search(start: int, chosen: Tuple[int, ...], uncovered: List[FrozenSet[int]]):
        if not uncovered:
            if len(chosen) == k:
                yield chosen
            return
        budget = k - len(chosen)
        if budget <= 0 or disjoint_lower_bound(uncovered) > budget:
            return
        # every uncovered clause needs a variable >= the next candidate
        horizon = min(max(c) for c in uncovered)
        for i in range(start, len(universe)):
            v = universe[i]
            if v > horizon:
                break
            rest = [c for c in uncovered if v not in c]
            if len(rest) == len(uncovered):
                continue
            yield from search(i + 1, chosen + (v,), rest)

    yield from search(0, (), clauses)


def iter_minimal_transversals(clauses: Family) -> Iterator[Tuple[int, ...]]:
    """
    All inclusion-minimal hitting sets, each exactly once.

    Depth-first over a candidate set: branch on an uncovered clause with the fewest
    candidates, and keep for every chosen variable the clauses it alone covers. A
    variable whose critical clauses all disappear would be redundant, so that branch
    is cut.
    """
    clauses = _as_sets(clauses)
    if not clauses:
        yield ()
        return
    occurs = {}
    for i, c in enumerate(clauses):
        for v in c:
            occurs.setdefault(v, set()).add(i)

    def search(chosen: List[int], candidates: set, critical: dict, uncovered: set):
        if not uncovered:
            yield tuple(sorted(chosen))
            return
        target = min(uncovered, key=lambda i: (len(clauses[i] & candidates), i))
        branch_on = sorted(clauses[target] & candidates)
        candidates = candidates - set(branch_on)
        for v in branch_on:
            hit = occurs[v]
            updated = {u: crit - hit for u, crit in critical.items()}
            if all(updated.values()):
                updated[v] = hit & uncovered
                yield from search(chosen + [v], set(candidates), updated, uncovered - hit)
            candidates.add(v)

    yield from search([], set(occurs), {}, set(range(len(clauses))))


def brute_force_transversals(family: Iterable[Iterable[int]]) -> List[Tuple[int, ...]]:
    """Minimal hitting sets by subset enumeration; small families only"""
    sets = _as_sets(family)
    if not sets:
        return [()]
    if any(not s for s in sets):
        return []
    universe = sorted(set().union(*sets))
    found: List[FrozenSet[int]] = []
    for size in range(len(universe) + 1):
        for combo in combinations(universe, size):
            chosen = frozenset(combo)
            if any(f <= chosen for f in found):
                continue
            if all(not chosen.isdisjoint(s) for s in sets):
                found.append(chosen)
    return sorted(tuple(sorted(f)) for f in found)
