"""
Abductive reasons for positive instances: direct, sufficient, minimal and δ-probable.

Instances classified 0 are handled by the caller on the negated tree
(see modules.reasoning.explainer).
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import islice
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from modules.reasoning.errors import InputError
from modules.reasoning.hitting_sets import (
    greedy_cover,
    iter_minimum_hitting_sets,
    min_hitting_set,
    prune,
)
from modules.reasoning.literals import Term
from modules.reasoning.restriction import MonotoneClauseSet, hits_all, minimize
from modules.reasoning.tree import DecisionTree, count_models, direct_path, variables
from modules.utils.contracts import check_positive

logger = logging.getLogger(__name__)

KINDS = ("direct", "sufficient", "minimal", "greedy-minimal", "probable")


class RemovalOrder(str, Enum):
    PATH = "path"  # deepest literal of the direct path first
    INDEX = "index"  # ascending variable index


Order = Union[RemovalOrder, str, Sequence[int], None]


@dataclass(frozen=True)
class Reason:
    term: Term
    kind: str
    delta: Fraction = Fraction(1)
    seed: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown reason kind '{self.kind}'")

    @property
    def size(self) -> int:
        return len(self.term)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "term": self.term.to_ints(),
            "size": self.size,
            "delta": f"{self.delta.numerator}/{self.delta.denominator}",
            "seed": self.seed,
        }


def parse_delta(value) -> Fraction:
    """Exact δ from a Fraction, an int or a 'p/q' string; floats and decimals are refused"""
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"δ must be an exact rational such as 3/4, got {value!r}")
    if isinstance(value, str):
        text = value.strip()
        numerator, slash, denominator = text.partition("/")
        if not slash:
            if not numerator.isdigit():
                raise InputError(f"δ must be written p/q, got '{value}'")
            denominator = "1"
        try:
            value = Fraction(int(numerator), int(denominator))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"δ must be written p/q, got '{value}'") from None
    delta = Fraction(value)
    if not 0 < delta <= 1:
        raise InputError(f"δ must lie in (0, 1], got {delta}")
    return delta


def removal_sequence(tree: DecisionTree, x: Sequence[int], order: Order) -> List[int]:
    """Turn a removal order into the explicit sequence of variables to try"""
    if order is None or order == RemovalOrder.INDEX or order == "index":
        return list(range(tree.n))
    if order == RemovalOrder.PATH or order == "path":
        deepest_first = [lit.variable for lit in reversed(direct_path(tree, x))]
        on_path = set(deepest_first)
        return deepest_first + [v for v in range(tree.n) if v not in on_path]
    if isinstance(order, str):
        raise InputError(f"unknown removal order '{order}', expected path or index")
    return [int(v) for v in order]


@check_positive
def direct_reason(tree: DecisionTree, x) -> Reason:
    return Reason(Term(frozenset(direct_path(tree, x))), "direct", seed="path")


def sufficient_reason(
    g: MonotoneClauseSet, seed: Term, order: Order = None, origin: Optional[str] = None
) -> Reason:
    """
    Greedy prime implicant contained in `seed`.

    Literals are tried in `order`: an explicit variable sequence, or INDEX. PATH needs
    the tree, so resolve it with removal_sequence first.
    """
    if order == RemovalOrder.PATH or order == "path":
        raise InputError("path order depends on the tree; pass removal_sequence(tree, x, 'path')")
    if not hits_all(seed, g):
        raise InputError(f"seed {seed} is not an implicant covering the instance")
    in_seed = seed.variables()
    seed_vars = sorted(in_seed)
    if order is None or order == RemovalOrder.INDEX or order == "index":
        sequence = seed_vars
    else:
        listed = [v for v in order if v in in_seed]
        sequence = listed + sorted(in_seed - set(listed))
    kept = prune(seed_vars, g.clauses, sequence)
    return Reason(g.to_term(kept), "sufficient", seed=origin or _describe(seed, g))


def minimal_reason(g: MonotoneClauseSet) -> Reason:
    m = minimize(g)
    return Reason(m.to_term(min_hitting_set(m.clauses)), "minimal", seed="branch-and-bound")


def minimal_reason_greedy(g: MonotoneClauseSet) -> Reason:
    """Max-degree cover of minimize(g), then pruned to a prime implicant"""
    m = minimize(g)
    cover = greedy_cover(m.clauses)
    kept = prune(cover, m.clauses)
    if len(kept) < len(cover):
        logger.debug(f"Pruning dropped {len(cover) - len(kept)} literals from the greedy cover")
    return Reason(m.to_term(kept), "greedy-minimal", seed="greedy-cover")


def greedy_bound(m: int, opt: int) -> int:
    """Worst-case size of the greedy cover for m clauses with optimum opt"""
    if m <= 1:
        return opt
    return math.ceil((math.log(m) - math.log(math.log(m)) + 0.78) * opt)


def enumerate_minimal_reasons(
    g: MonotoneClauseSet,
    cap: int,
    sink: Optional[Callable[[Reason], None]] = None,
) -> Tuple[List[Reason], bool]:
    """All minimum-size reasons in lexicographic order, at most cap of them"""
    if cap < 1:
        raise InputError(f"cap must be a positive integer, got {cap}")
    m = minimize(g)
    k = len(min_hitting_set(m.clauses))
    found = list(islice(iter_minimum_hitting_sets(m.clauses, k), cap + 1))
    complete = len(found) <= cap
    if not complete:
        logger.warning(f"Minimal reason enumeration stopped at cap {cap}")
    reasons = []
    for chosen in found[:cap]:
        reason = Reason(m.to_term(chosen), "minimal", seed="enumeration")
        reasons.append(reason)
        if sink is not None:
            sink(reason)
    return reasons, complete


def precision(tree: DecisionTree, t: Term) -> Fraction:
    """Share of the completions of t that the tree classifies 1"""
    outside = [lit for lit in t.literals if lit.variable >= tree.n]
    if outside:
        raise InputError(f"term {t} mentions variables beyond n={tree.n}")
    universe = variables(tree) | t.variables()
    free = len(universe) - len(t)
    return Fraction(count_models(tree, t, universe), 1 << free)


@check_positive
def probable_reason(tree: DecisionTree, x, delta=Fraction(1), order: Order = RemovalOrder.PATH) -> Reason:
    """
    δ-probable reason grown down from the direct reason.

    Passes over `order` repeat until no literal can be dropped, so every remaining
    literal is needed to keep precision ≥ δ.
    """
    delta = parse_delta(delta)
    t = Term(frozenset(direct_path(tree, x)))
    sequence = removal_sequence(tree, x, order)
    changed = True
    passes = 0
    while changed:
        changed = False
        passes += 1
        for v in sequence:
            lit = next((lit for lit in t.literals if lit.variable == v), None)
            if lit is None:
                continue
            candidate = t.without(lit)
            if precision(tree, candidate) >= delta:
                t = candidate
                changed = True
    logger.debug(f"Probable reason for δ={delta} after {passes} passes: {t}")
    return Reason(t, "probable", delta=delta, seed="direct")


def is_prime_implicant(t: Term, g: MonotoneClauseSet) -> bool:
    if not hits_all(t, g):
        return False
    return all(not hits_all(t.without(lit), g) for lit in t.literals)


def canonical(terms: Iterable[Term]) -> List[Term]:
    """Lexicographic order on sorted variable indices"""
    return sorted(terms, key=lambda t: t.sort_key())


def _describe(seed: Term, g: MonotoneClauseSet) -> str:
    if seed == g.anchor:
        return "instance"
    return "term" if len(seed) else "empty"
