import numpy as np
import pytest

from modules.reasoning.abductive import minimal_reason
from modules.reasoning.errors import ContractViolation, InputError
from modules.reasoning.hitting_sets import min_hitting_set
from modules.reasoning.literals import Literal, Term, term_of_instance
from modules.reasoning.oracles import random_positive_query
from modules.reasoning.restriction import MonotoneClauseSet, hits_all, minimize, restrict


def test_restrict_cattleya(cattleya, x_all_ones):
    g = restrict(cattleya, x_all_ones)
    assert len(g) == 7
    assert set(g.clauses) == {(0, 1), (0, 2), (0, 3), (1, 2, 3), (1, 3), (2, 3), (3,)}
    assert g.anchor == term_of_instance(x_all_ones)


def test_minimize_drops_supersets(cattleya, x_all_ones):
    m = minimize(restrict(cattleya, x_all_ones))
    assert m.minimized
    assert m.clauses == ((0, 1), (0, 2), (3,))
    assert minimize(m) is m


def test_polarity_follows_instance():
    from modules.reasoning.tree import DecisionTree, Node

    # 1 iff x1 = 0 and x2 = 1
    tree = DecisionTree(2, (
        Node.internal(0, 1, 4),
        Node.internal(1, 2, 3),
        Node.leaf(0),
        Node.leaf(1),
        Node.leaf(0),
    ), 0)
    g = restrict(tree, (0, 1))
    assert set(g.clauses) == {(0,), (1,)}
    assert g.literal(0) == Literal(0, False)
    assert g.to_term([0, 1]) == Term.from_ints([-1, 2])


def test_restrict_refuses_negative_instances(cattleya):
    with pytest.raises(ContractViolation):
        restrict(cattleya, (0, 0, 0, 0))


def test_hits_all(cattleya, x_all_ones):
    g = restrict(cattleya, x_all_ones)
    assert hits_all(Term.from_ints([1, 4]), g)
    assert hits_all(Term.from_ints([2, 3, 4]), g)
    assert not hits_all(Term.from_ints([1, 2, 3]), g)


def test_hits_all_needs_subterm_of_instance(cattleya, x_all_ones):
    g = restrict(cattleya, x_all_ones)
    with pytest.raises(InputError):
        hits_all(Term.from_ints([-1, 4]), g)


def test_clause_outside_anchor_rejected():
    with pytest.raises(InputError):
        MonotoneClauseSet(2, Term.from_ints([1]), ((0, 1),))


def test_empty_clause_rejected():
    with pytest.raises(InputError):
        MonotoneClauseSet(1, Term.from_ints([1]), ((),))


@pytest.fixture
def queries():
    rng = np.random.default_rng(11)
    return [random_positive_query(rng, max_vars=10) for _ in range(40)]


class TestRandomQueries:
    def test_minimize_keeps_the_hitting_sets(self, queries):
        rng = np.random.default_rng(12)
        for tree, x in queries:
            g = restrict(tree, x)
            m = minimize(g)
            t_x = term_of_instance(x)
            for _ in range(10):
                t = Term(frozenset(lit for lit in t_x.literals if rng.random() < 0.5))
                assert hits_all(t, g) == hits_all(t, m)

    def test_minimized_clauses_are_subsumed_originals(self, queries):
        for tree, x in queries:
            g = restrict(tree, x)
            m = minimize(g)
            assert set(m.clauses) <= set(g.clauses)
            assert all(any(set(k) <= set(c) for k in m.clauses) for c in g.clauses)
            assert minimize(m) == m

    def test_minimal_size_ignores_clause_order_and_names(self, queries):
        rng = np.random.default_rng(13)
        for tree, x in queries:
            g = restrict(tree, x)
            size = minimal_reason(g).size
            clauses = [list(c) for c in g.clauses]
            rename = rng.permutation(tree.n)
            for _ in range(3):
                order = rng.permutation(len(clauses))
                shuffled = [tuple(int(rename[v]) for v in clauses[i][::-1]) for i in order]
                assert len(min_hitting_set(shuffled)) == size
