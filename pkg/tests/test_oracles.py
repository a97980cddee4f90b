import numpy as np
import pytest

from modules.reasoning.contrastive import all_contrastive, enumerate_sufficient_reasons
from modules.reasoning.errors import InputError, OracleLimitExceeded
from modules.reasoning.literals import Term
from modules.reasoning.oracles import (
    brute_force_contrastive,
    brute_force_count,
    brute_force_sufficient_reasons,
    make_comb_tree,
    make_complete_tree,
    minimal_hitting_sets,
    random_positive_query,
    random_tree,
    shannon_sr,
    truth_table,
)
from modules.reasoning.restriction import restrict
from modules.reasoning.tree import count_models, evaluate


def T(*ints):
    return Term.from_ints(ints)


class TestCattleyaOracles:
    def test_sufficient_reasons(self, cattleya, x_all_ones):
        expected = {T(1, 4), T(2, 3, 4)}
        assert brute_force_sufficient_reasons(cattleya, x_all_ones) == expected
        assert shannon_sr(cattleya, x_all_ones) == expected

    def test_contrastive(self, cattleya, x_all_ones):
        assert brute_force_contrastive(cattleya, x_all_ones) == {T(1, 2), T(1, 3), T(4)}

    def test_duality(self, cattleya, x_all_ones):
        reasons = brute_force_sufficient_reasons(cattleya, x_all_ones)
        assert set(minimal_hitting_sets(reasons)) == {T(1, 2), T(1, 3), T(4)}

    def test_truth_table_layout(self, cattleya):
        table = truth_table(cattleya, [0, 1, 2, 3])
        assert table.shape == (2, 2, 2, 2)
        assert table[1, 0, 0, 1] == 1
        assert table[0, 1, 1, 1] == 1
        assert table[0, 1, 1, 0] == 0

    def test_brute_force_count(self, cattleya):
        assert brute_force_count(cattleya) == 5
        assert brute_force_count(cattleya, T(4)) == 5

    def test_limit(self, cattleya, x_all_ones):
        with pytest.raises(OracleLimitExceeded):
            brute_force_sufficient_reasons(cattleya, x_all_ones, limit=3)
        with pytest.raises(OracleLimitExceeded):
            shannon_sr(cattleya, x_all_ones, limit=3)


class TestGenerators:
    def test_complete_tree_shape(self):
        tree = make_complete_tree(3)
        assert tree.n == 7
        assert tree.depth == 3
        assert tree.leaf_count == 8

    def test_comb_tree_shape(self):
        tree = make_comb_tree(4)
        assert tree.n == 7
        assert tree.node_count == 15
        assert evaluate(tree, (1,) * 7) == 1

    @pytest.mark.parametrize("k", range(2, 6))
    def test_comb_tree_reasons(self, k):
        tree = make_comb_tree(k)
        x = (1,) * tree.n
        reasons = brute_force_sufficient_reasons(tree, x)
        assert len(reasons) == 2 ** (k - 1)
        assert {len(t) for t in reasons} == {k}

    @pytest.mark.parametrize("depth, count", [(1, 1), (2, 2), (3, 6)])
    def test_complete_tree_reasons_by_subset_enumeration(self, depth, count):
        tree = make_complete_tree(depth)
        assert len(brute_force_sufficient_reasons(tree, (1,) * tree.n)) == count

    def test_generators_reject_empty(self):
        with pytest.raises(InputError):
            make_complete_tree(0)
        with pytest.raises(InputError):
            make_comb_tree(0)

    def test_random_positive_query(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            tree, x = random_positive_query(rng, max_vars=6)
            assert evaluate(tree, x) == 1
            assert not tree.is_constant

    def test_random_tree_is_seeded(self):
        a = random_tree(np.random.default_rng(5), max_vars=8)
        b = random_tree(np.random.default_rng(5), max_vars=8)
        assert a == b


class TestAgreementOnRandomTrees:
    def test_restricted_cnf_matches_oracles(self):
        rng = np.random.default_rng(21)
        for _ in range(40):
            tree, x = random_positive_query(rng, max_vars=7)
            g = restrict(tree, x)
            reasons, complete = enumerate_sufficient_reasons(g, cap=10_000)
            oracle = brute_force_sufficient_reasons(tree, x)
            assert complete
            assert set(reasons) == oracle == shannon_sr(tree, x)
            assert set(all_contrastive(g)) == brute_force_contrastive(tree, x)

    def test_model_counts_agree(self):
        rng = np.random.default_rng(22)
        for _ in range(40):
            tree, x = random_positive_query(rng, max_vars=7)
            condition = Term.from_ints([(v + 1) if x[v] else -(v + 1) for v in range(tree.n) if rng.random() < 0.5])
            assert count_models(tree, condition) == brute_force_count(tree, condition)
