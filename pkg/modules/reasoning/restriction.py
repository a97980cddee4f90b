"""
The instance-restricted monotone CNF g = {c ∩ t_x : c ∈ CNF(T)}.

Every literal of g has the polarity it has in the anchor t_x, so clauses are stored as
sorted tuples of variable indices and the anchor supplies the polarity.
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Tuple

from modules.reasoning.errors import InputError
from modules.reasoning.literals import Literal, Term, term_of_instance
from modules.reasoning.tree import DecisionTree
from modules.utils.contracts import check_positive

logger = logging.getLogger(__name__)

VarClause = Tuple[int, ...]


@dataclass(frozen=True)
class MonotoneClauseSet:
    n: int
    anchor: Term
    clauses: Tuple[VarClause, ...]
    minimized: bool = False

    def __post_init__(self):
        clauses = tuple(sorted({tuple(sorted(c)) for c in self.clauses}))
        anchor_vars = self.anchor.variables()
        for clause in clauses:
            if not clause:
                raise InputError("restricted clause set contains an empty clause")
            if not anchor_vars.issuperset(clause):
                raise InputError(f"clause {clause} is not contained in the anchor")
        object.__setattr__(self, "clauses", clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def literal(self, variable: int) -> Literal:
        return Literal(variable, self.anchor.polarity(variable))

    def to_term(self, variables: Iterable[int]) -> Term:
        polarity = self._polarities()
        return Term(frozenset(Literal(v, polarity[v]) for v in variables))

    def variables(self) -> FrozenSet[int]:
        return frozenset(v for c in self.clauses for v in c)

    def _polarities(self) -> Dict[int, bool]:
        return {lit.variable: lit.polarity for lit in self.anchor.literals}


@check_positive
def restrict(tree: DecisionTree, x) -> MonotoneClauseSet:
    """
    Intersect every 0-path clause with t_x.

    c ∩ t_x keeps the variables on the 0-path whose value in x disagrees with the
    branch taken, so one traversal is enough.
    """
    clauses = set()
    stack = [(tree.root, ())]
    while stack:
        index, disagree = stack.pop()
        node = tree.nodes[index]
        if node.is_leaf:
            if node.label == 0:
                # T(x)=1 means x leaves every 0-path somewhere
                assert disagree, "instance reaches a 0-leaf"
                clauses.add(disagree)
            continue
        v = node.variable
        if x[v]:
            stack.append((node.left, disagree + (v,)))
            stack.append((node.right, disagree))
        else:
            stack.append((node.left, disagree))
            stack.append((node.right, disagree + (v,)))
    g = MonotoneClauseSet(tree.n, term_of_instance(x), tuple(clauses))
    logger.debug(f"Restricted {tree.node_count}-node tree to {len(g)} clauses")
    return g


def minimize(g: MonotoneClauseSet) -> MonotoneClauseSet:
    """Drop every clause that strictly contains another one"""
    if g.minimized:
        return g
    by_length = sorted(g.clauses, key=len)
    kept = []
    kept_sets = []
    for clause in by_length:
        as_set = frozenset(clause)
        if any(k <= as_set for k in kept_sets):
            continue
        kept.append(clause)
        kept_sets.append(as_set)
    return MonotoneClauseSet(g.n, g.anchor, tuple(kept), minimized=True)


def hits_all(t: Term, g: MonotoneClauseSet) -> bool:
    if not t.literals <= g.anchor.literals:
        raise InputError(f"term {t} is not contained in the instance term")
    chosen = t.variables()
    return all(not chosen.isdisjoint(c) for c in g.clauses)

