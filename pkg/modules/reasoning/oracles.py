"""
Brute-force and structural oracles, plus generators for the extremal tree families.

Nothing here goes through the restricted CNF, so the oracles can check it.
"""
import logging
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from modules.config import ORACLE_LIMIT
from modules.reasoning.errors import InputError, OracleLimitExceeded
from modules.reasoning.hitting_sets import brute_force_transversals
from modules.reasoning.literals import Instance, Literal, Term
from modules.reasoning.tree import DecisionTree, Node, evaluate, negate, predict, variables
from modules.utils.contracts import check_positive

logger = logging.getLogger(__name__)


def _check_limit(count: int, limit: Optional[int]):
    limit = ORACLE_LIMIT if limit is None else limit
    if count > limit:
        raise OracleLimitExceeded(f"oracle refuses {count} variables (limit {limit})")


def _assignments(k: int) -> np.ndarray:
    """All 2^k bit vectors, first column most significant"""
    codes = np.arange(1 << k)[:, None]
    return ((codes >> np.arange(k - 1, -1, -1)) & 1).astype(np.int8)


def truth_table(tree: DecisionTree, over: Sequence[int]) -> np.ndarray:
    """Tree outputs indexed by the values of `over`, shape (2,)*len(over)"""
    bits = _assignments(len(over))
    matrix = np.zeros((bits.shape[0], tree.n), dtype=np.int8)
    if over:
        matrix[:, list(over)] = bits
    return predict(tree, matrix).reshape((2,) * len(over))


def _forced(table: np.ndarray, over: Sequence[int], x: Instance, fixed: Iterable[int]) -> np.ndarray:
    position = {v: i for i, v in enumerate(over)}
    index = [slice(None)] * len(over)
    for v in fixed:
        index[position[v]] = x[v]
    return table[tuple(index)]


@check_positive
def brute_force_sufficient_reasons(tree: DecisionTree, x, limit: Optional[int] = None) -> Set[Term]:
    """⊆-minimal subterms of t_x whose every completion the tree classifies 1"""
    over = sorted(variables(tree))
    _check_limit(len(over), limit)
    table = truth_table(tree, over)
    found: List[FrozenSet[int]] = []
    for size in range(len(over) + 1):
        for subset in combinations(over, size):
            chosen = frozenset(subset)
            if any(f <= chosen for f in found):
                continue
            if np.all(_forced(table, over, x, chosen)):
                found.append(chosen)
    return {Term(frozenset(Literal(v, bool(x[v])) for v in f)) for f in found}


@check_positive
def brute_force_contrastive(tree: DecisionTree, x, limit: Optional[int] = None) -> Set[Term]:
    """⊆-minimal subterms t of t_x such that t_x without t is no longer an implicant"""
    over = sorted(variables(tree))
    _check_limit(len(over), limit)
    table = truth_table(tree, over)
    found: List[FrozenSet[int]] = []
    for size in range(len(over) + 1):
        for subset in combinations(over, size):
            switched = frozenset(subset)
            if any(f <= switched for f in found):
                continue
            kept = [v for v in over if v not in switched]
            if not np.all(_forced(table, over, x, kept)):
                found.append(switched)
    return {Term(frozenset(Literal(v, bool(x[v])) for v in f)) for f in found}


def brute_force_count(
    tree: DecisionTree,
    condition: Term = Term(),
    over: Optional[Iterable[int]] = None,
    limit: Optional[int] = None,
) -> int:
    """Model count by evaluating every assignment of `over`"""
    universe = sorted(frozenset(over) if over is not None else variables(tree) | condition.variables())
    _check_limit(len(universe), limit)
    bits = _assignments(len(universe))
    matrix = np.zeros((bits.shape[0], tree.n), dtype=np.int8)
    if universe:
        matrix[:, universe] = bits
    mask = predict(tree, matrix) == 1
    for lit in condition.literals:
        mask &= matrix[:, lit.variable] == int(lit.polarity)
    return int(mask.sum())


def _entails(tree: DecisionTree, t: FrozenSet[Literal], index: int) -> bool:
    """Every leaf of the subtree at `index` consistent with t is a 1-leaf"""
    fixed = {lit.variable: lit.polarity for lit in t}
    stack = [index]
    while stack:
        node = tree.nodes[stack.pop()]
        if node.is_leaf:
            if node.label == 0:
                return False
            continue
        value = fixed.get(node.variable)
        if value is None:
            stack.extend((node.left, node.right))
        else:
            stack.append(node.child(value))
    return True


def _minimal(terms: Iterable[FrozenSet[Literal]]) -> Set[FrozenSet[Literal]]:
    ordered = sorted(set(terms), key=len)
    kept: List[FrozenSet[Literal]] = []
    for t in ordered:
        if not any(k <= t for k in kept):
            kept.append(t)
    return set(kept)


@check_positive
def shannon_sr(tree: DecisionTree, x, limit: Optional[int] = None) -> Set[Term]:
    """
    Sufficient reasons by recursion on the root literal agreed by x.

    sr(1) = {⊤}, sr(0) = {}; otherwise the ⊆-minimal pairwise unions of the reasons of
    both cofactors, plus ℓ ∧ t for every reason t of the agreed cofactor that does not
    entail the other one.
    """
    _check_limit(len(variables(tree)), limit)

    def sr(index: int) -> Set[FrozenSet[Literal]]:
        node = tree.nodes[index]
        if node.is_leaf:
            return {frozenset()} if node.label == 1 else set()
        value = x[node.variable]
        agreed, other = node.child(value), node.child(1 - value)
        literal = Literal(node.variable, bool(value))
        agreed_sr = sr(agreed)
        other_sr = sr(other)
        merged = _minimal(a | b for a in agreed_sr for b in other_sr)
        extended = {t | {literal} for t in agreed_sr if not _entails(tree, t, other)}
        return merged | extended

    return {Term(t) for t in sr(tree.root)}


def minimal_hitting_sets(terms: Iterable[Term]) -> List[Term]:
    """Minimal transversals of a family of terms, by brute force"""
    family = [t.literals for t in terms]
    return [Term(frozenset(chosen)) for chosen in brute_force_transversals(family)]


def make_complete_tree(depth: int) -> DecisionTree:
    """
    Complete tree with breadth-first variable labels.

    Internal node p tests x{p+1}; nodes on the last internal level send 0 left to a
    0-leaf and 1 right to a 1-leaf.
    """
    if depth < 1:
        raise InputError(f"depth must be at least 1, got {depth}")
    internal = (1 << depth) - 1
    first_last = (1 << (depth - 1)) - 1
    nodes = []
    for p in range(internal):
        if p < first_last:
            nodes.append(Node.internal(p, 2 * p + 1, 2 * p + 2))
        else:
            j = p - first_last
            nodes.append(Node.internal(p, internal + 2 * j, internal + 2 * j + 1))
    for _ in range(first_last, internal):
        nodes.extend((Node.leaf(0), Node.leaf(1)))
    return DecisionTree(internal, tuple(nodes), 0)


def make_comb_tree(k: int) -> DecisionTree:
    """
    Comb of k teeth over 2k-1 fresh variables.

    Level i tests v_i, sends 0 to a node on w_i with leaves 0/1 and 1 down the spine;
    the last level is a single v node with leaves 0/1.
    """
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    nodes: List[Node] = []
    next_var = 0
    for _ in range(k - 1):
        v, w = next_var, next_var + 1
        next_var += 2
        base = len(nodes)
        # spine node, then the w node and its leaves; the spine continues at base + 4
        nodes.append(Node.internal(v, base + 1, base + 4))
        nodes.append(Node.internal(w, base + 2, base + 3))
        nodes.append(Node.leaf(0))
        nodes.append(Node.leaf(1))
    base = len(nodes)
    nodes.append(Node.internal(next_var, base + 1, base + 2))
    nodes.append(Node.leaf(0))
    nodes.append(Node.leaf(1))
    return DecisionTree(2 * k - 1, tuple(nodes), 0)


def random_tree(rng: np.random.Generator, max_vars: int = 12, leaf_bias: float = 0.3) -> DecisionTree:
    """Random read-once tree over at most max_vars variables; the root is always internal"""
    if max_vars < 1:
        raise InputError(f"max_vars must be at least 1, got {max_vars}")
    n = int(rng.integers(1, max_vars + 1))
    nodes: List[Optional[Node]] = []

    def grow(free: Tuple[int, ...], depth: int) -> int:
        index = len(nodes)
        nodes.append(None)
        if not free or (depth > 0 and rng.random() < leaf_bias):
            nodes[index] = Node.leaf(int(rng.integers(0, 2)))
            return index
        v = int(free[rng.integers(0, len(free))])
        rest = tuple(u for u in free if u != v)
        left = grow(rest, depth + 1)
        right = grow(rest, depth + 1)
        nodes[index] = Node.internal(v, left, right)
        return index

    grow(tuple(range(n)), 0)
    return DecisionTree(n, tuple(nodes), 0)


def random_positive_query(
    rng: np.random.Generator, max_vars: int = 12, leaf_bias: float = 0.3
) -> Tuple[DecisionTree, Instance]:
    """(tree, x) with tree(x) = 1; the tree is negated when x lands on a 0-leaf"""
    tree = random_tree(rng, max_vars, leaf_bias)
    x = tuple(int(b) for b in rng.integers(0, 2, size=tree.n))
    if evaluate(tree, x) == 0:
        tree = negate(tree)
    return tree, x
