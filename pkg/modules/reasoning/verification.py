"""
Randomized agreement suite between the reasoning layer and the oracles.

Each check takes one positive query and returns True/False; run_suite tallies them into
a matrix of (check, passed, failed). With inject_fault the oracle side sees a tree
with one leaf flipped, which the oracle checks are expected to notice.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from modules.config import DEFAULT_SEED, ENUMERATION_CAP
from modules.reasoning.abductive import (
    direct_reason,
    enumerate_minimal_reasons,
    greedy_bound,
    is_prime_implicant,
    minimal_reason,
    minimal_reason_greedy,
    precision,
    probable_reason,
    removal_sequence,
    sufficient_reason,
)
from modules.reasoning.contrastive import (
    all_contrastive,
    count_and_importance,
    enumerate_sufficient_reasons,
    explanatory_features,
)
from modules.reasoning.literals import Instance, Term, term_of_instance
from modules.reasoning.oracles import (
    brute_force_contrastive,
    brute_force_count,
    brute_force_sufficient_reasons,
    minimal_hitting_sets,
    random_positive_query,
    shannon_sr,
)
from modules.reasoning.restriction import MonotoneClauseSet, hits_all, minimize, restrict
from modules.reasoning.tree import DecisionTree, Node, count_models

logger = logging.getLogger(__name__)

SUITE_DELTAS = (Fraction(1), Fraction(95, 100), Fraction(9, 10), Fraction(3, 4), Fraction(1, 2))


def flip_leaf(tree: DecisionTree, x: Instance, rng: np.random.Generator) -> DecisionTree:
    """Copy of the tree with one leaf flipped, never the leaf x reaches"""
    reached = tree.root
    while not tree.nodes[reached].is_leaf:
        reached = tree.nodes[reached].child(x[tree.nodes[reached].variable])
    leaves = [i for i, node in enumerate(tree.nodes) if node.is_leaf and i != reached]
    if not leaves:
        return tree
    target = leaves[int(rng.integers(0, len(leaves)))]
    nodes = list(tree.nodes)
    nodes[target] = Node.leaf(1 - nodes[target].label)
    return DecisionTree(tree.n, tuple(nodes), tree.root, tree.features)


class Query:
    """One positive query with lazily computed shared results"""

    def __init__(self, tree: DecisionTree, x: Instance, oracle_tree: DecisionTree, rng):
        self.tree = tree
        self.x = x
        self.oracle_tree = oracle_tree
        self.rng = rng

    @cached_property
    def g(self) -> MonotoneClauseSet:
        return restrict(self.tree, self.x)

    @cached_property
    def oracle_sr(self) -> Set[Term]:
        return brute_force_sufficient_reasons(self.oracle_tree, self.x)

    @cached_property
    def min_size(self) -> int:
        return min(len(t) for t in self.oracle_sr)


def check_oracle_agreement(q: Query) -> bool:
    enumerated, complete = enumerate_sufficient_reasons(q.g, ENUMERATION_CAP)
    return complete and set(enumerated) == q.oracle_sr == shannon_sr(q.oracle_tree, q.x)


def check_minimal(q: Query) -> bool:
    exact = minimal_reason(q.g)
    if exact.size != q.min_size or not is_prime_implicant(exact.term, q.g):
        return False
    reasons, complete = enumerate_minimal_reasons(q.g, ENUMERATION_CAP)
    expected = {t for t in q.oracle_sr if len(t) == q.min_size}
    return complete and {r.term for r in reasons} == expected


def check_duality(q: Query) -> bool:
    contrastive = set(all_contrastive(q.g))
    if set(minimal_hitting_sets(q.oracle_sr)) != contrastive:
        return False
    return set(minimal_hitting_sets(contrastive)) == q.oracle_sr


def check_contrastive(q: Query) -> bool:
    return set(all_contrastive(q.g)) == brute_force_contrastive(q.oracle_tree, q.x)


def check_features(q: Query) -> bool:
    report = explanatory_features(q.g)
    reasons = [t.literals for t in q.oracle_sr]
    necessary = frozenset.intersection(*reasons) if reasons else frozenset()
    relevant = frozenset().union(*reasons)
    return report.necessary == necessary and report.relevant == relevant


def check_importance(q: Query) -> bool:
    imap = count_and_importance(q.g, ENUMERATION_CAP)
    if not imap.exact or imap.total_count != len(q.oracle_sr):
        return False
    for lit in {lit for t in q.oracle_sr for lit in t.literals} | set(imap.importance):
        expected = Fraction(sum(1 for t in q.oracle_sr if lit in t.literals), len(q.oracle_sr))
        if imap[lit] != expected:
            return False
    features = explanatory_features(q.g)
    return imap.necessary() == features.necessary and imap.relevant() == features.relevant


def check_greedy(q: Query) -> bool:
    greedy = minimal_reason_greedy(q.g)
    opt = minimal_reason(q.g).size
    m = len(minimize(q.g))
    return is_prime_implicant(greedy.term, q.g) and greedy.size <= greedy_bound(m, opt)


def check_size_chain(q: Query) -> bool:
    direct = direct_reason(q.tree, q.x)
    minimal = minimal_reason(q.g).size
    for order in ("path", "index"):
        sequence = removal_sequence(q.tree, q.x, order)
        sufficient = sufficient_reason(q.g, direct.term, sequence)
        if sufficient.term not in q.oracle_sr:
            return False
        if not minimal <= sufficient.size <= direct.size <= q.tree.n:
            return False
    return True


def check_probable(q: Query) -> bool:
    direct = direct_reason(q.tree, q.x)
    path = removal_sequence(q.tree, q.x, "path")
    if probable_reason(q.tree, q.x, Fraction(1), "path").term != sufficient_reason(q.g, direct.term, path).term:
        return False
    for delta in SUITE_DELTAS:
        reason = probable_reason(q.tree, q.x, delta, "path")
        if precision(q.tree, reason.term) < delta:
            return False
    return True


def check_model_count(q: Query) -> bool:
    t_x = term_of_instance(q.x)
    chosen = [lit for lit in t_x.sorted() if q.rng.random() < 0.5]
    t = Term(frozenset(chosen))
    return count_models(q.tree, t) == brute_force_count(q.tree, t)


def check_implicants(q: Query) -> bool:
    """hits_all on random subterms agrees with the truth table"""
    t_x = term_of_instance(q.x)
    for _ in range(4):
        t = Term(frozenset(lit for lit in t_x.literals if q.rng.random() < 0.5))
        is_implicant = precision(q.oracle_tree, t) == 1
        if hits_all(t, q.g) != is_implicant:
            return False
    return True


CHECKS: Dict[str, Callable[[Query], bool]] = {
    "oracle-agreement": check_oracle_agreement,
    "minimal": check_minimal,
    "duality": check_duality,
    "contrastive": check_contrastive,
    "features": check_features,
    "importance": check_importance,
    "greedy-bound": check_greedy,
    "size-chain": check_size_chain,
    "probable": check_probable,
    "model-count": check_model_count,
    "implicants": check_implicants,
}


@dataclass
class CheckTally:
    passed: int = 0
    failed: int = 0


@dataclass
class SuiteResult:
    trials: int
    tallies: Dict[str, CheckTally] = field(default_factory=dict)
    greedy_ratios: List[float] = field(default_factory=list)
    probable_means: Dict[Fraction, float] = field(default_factory=dict)

    @property
    def probable_monotone(self) -> bool:
        """Mean probable-reason size does not grow as δ decreases"""
        means = [self.probable_means[d] for d in sorted(self.probable_means, reverse=True)]
        return all(a >= b for a, b in zip(means, means[1:]))

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.tallies.values()) and self.probable_monotone

    def matrix(self) -> List[Tuple[str, int, int]]:
        rows = [(name, t.passed, t.failed) for name, t in self.tallies.items()]
        if self.probable_means:
            monotone = self.probable_monotone
            rows.append(("probable-mean-monotone", int(monotone), int(not monotone)))
        return rows

    def to_dict(self) -> dict:
        ratios = np.array(self.greedy_ratios) if self.greedy_ratios else np.array([1.0])
        return {
            "trials": self.trials,
            "ok": self.ok,
            "checks": [{"check": c, "passed": p, "failed": f} for c, p, f in self.matrix()],
            "greedy_ratio": {"mean": float(ratios.mean()), "max": float(ratios.max())},
            "probable_mean_size": {
                f"{d.numerator}/{d.denominator}": m for d, m in sorted(self.probable_means.items(), reverse=True)
            },
        }


def run_suite(
    trials: int,
    max_vars: int = 12,
    seed: Optional[int] = None,
    inject_fault: bool = False,
    checks: Optional[Sequence[str]] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> SuiteResult:
    seed = DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    names = list(checks) if checks else list(CHECKS)
    result = SuiteResult(trials, {name: CheckTally() for name in names})
    # mean probable-reason sizes are tracked with the probable check
    sizes: Dict[Fraction, List[int]] = {d: [] for d in SUITE_DELTAS} if "probable" in names else {}

    for trial in range(trials):
        tree, x = random_positive_query(rng, max_vars)
        oracle_tree = flip_leaf(tree, x, rng) if inject_fault else tree
        q = Query(tree, x, oracle_tree, rng)
        for name in names:
            try:
                passed = CHECKS[name](q)
            except Exception as e:
                logger.warning(f"Check {name} raised on trial {trial}: {e}")
                passed = False
            tally = result.tallies[name]
            if passed:
                tally.passed += 1
            else:
                tally.failed += 1
                logger.info(f"Check {name} failed on trial {trial}: n={tree.n}, x={x}")

        opt = minimal_reason(q.g).size
        if opt:
            result.greedy_ratios.append(minimal_reason_greedy(q.g).size / opt)
        for delta in sizes:
            sizes[delta].append(probable_reason(tree, x, delta, "path").size)
        if progress is not None:
            progress(trial + 1, trials)

    result.probable_means = {d: float(np.mean(s)) if s else 0.0 for d, s in sizes.items()}
    logger.info(f"Verification finished: {trials} trials, ok={result.ok}")
    return result
