import itertools
import json

import numpy as np
import pytest

from modules.reasoning.errors import DanglingChildError, InputError, MalformedTreeError, ReadOnceViolation
from modules.reasoning.literals import Literal, Term, as_instance
from modules.reasoning.oracles import random_tree
from modules.reasoning.tree import (
    DecisionTree,
    Node,
    count_models,
    direct_path,
    evaluate,
    load_tree,
    negate,
    parse_tree,
    predict,
    serialize_tree,
    to_cnf,
    to_dnf,
    variables,
)


class TestStructure:
    def test_cattleya_shape(self, cattleya):
        assert cattleya.n == 4
        assert cattleya.node_count == 23
        assert cattleya.leaf_count == 12
        assert cattleya.depth == 4
        assert variables(cattleya) == frozenset({0, 1, 2, 3})

    def test_repeated_variable_on_path(self):
        nodes = (
            Node.internal(0, 1, 2),
            Node.internal(0, 3, 4),
            Node.leaf(1),
            Node.leaf(0),
            Node.leaf(1),
        )
        with pytest.raises(ReadOnceViolation) as info:
            DecisionTree(1, nodes, 0)
        assert info.value.variable == 0

    def test_dangling_child(self):
        with pytest.raises(DanglingChildError):
            DecisionTree(1, (Node.internal(0, 1, 7), Node.leaf(0)), 0)

    def test_variable_out_of_range(self):
        with pytest.raises(MalformedTreeError):
            DecisionTree(1, (Node.internal(3, 1, 2), Node.leaf(0), Node.leaf(1)), 0)

    def test_bad_leaf_label(self):
        with pytest.raises(MalformedTreeError):
            DecisionTree(0, (Node.leaf(2),), 0)

    def test_constant_tree(self):
        tree = DecisionTree(3, (Node.leaf(1),), 0)
        assert tree.is_constant
        assert evaluate(tree, (0, 1, 0)) == 1


class TestEvaluation:
    def test_evaluate_matches_formula(self, cattleya):
        for code in range(16):
            x = tuple((code >> (3 - i)) & 1 for i in range(4))
            expected = int((x[0] and x[3]) or (x[1] and x[2] and x[3]))
            assert evaluate(cattleya, x) == expected

    def test_predict_is_vectorised_evaluate(self, cattleya):
        matrix = np.array([[(c >> (3 - i)) & 1 for i in range(4)] for c in range(16)])
        expected = [evaluate(cattleya, tuple(row)) for row in matrix]
        assert predict(cattleya, matrix).tolist() == expected

    def test_instance_length_checked(self, cattleya):
        with pytest.raises(InputError):
            evaluate(cattleya, (1, 1, 1))

    def test_negate_flips_every_output(self, cattleya):
        negated = negate(cattleya)
        for code in range(16):
            x = tuple((code >> i) & 1 for i in range(4))
            assert evaluate(negated, x) == 1 - evaluate(cattleya, x)

    def test_direct_path_root_first(self, cattleya, x_all_ones):
        assert direct_path(cattleya, x_all_ones) == tuple(Literal(v, True) for v in range(4))


class TestNormalForms:
    def test_cnf_has_one_clause_per_zero_leaf(self, cattleya):
        clauses = to_cnf(cattleya)
        assert len(clauses) == 7
        for code in range(16):
            x = tuple((code >> i) & 1 for i in range(4))
            assert all(c.satisfied_by(x) for c in clauses) == bool(evaluate(cattleya, x))

    def test_dnf_covers_exactly_the_models(self, cattleya):
        terms = to_dnf(cattleya)
        assert len(terms) == 5
        for code in range(16):
            x = tuple((code >> i) & 1 for i in range(4))
            assert any(t.covers(x) for t in terms) == bool(evaluate(cattleya, x))


class TestModelCounting:
    def test_count_all_models(self, cattleya):
        # x1∧x4 has 4 models, x2∧x3∧x4∧¬x1 adds 1
        assert count_models(cattleya) == 5

    def test_count_under_condition(self, cattleya):
        assert count_models(cattleya, Term.from_ints([1, 4])) == 4
        assert count_models(cattleya, Term.from_ints([4])) == 5
        assert count_models(cattleya, Term.from_ints([-4])) == 0

    def test_count_over_wider_universe(self, cattleya):
        assert count_models(cattleya, over=range(6)) == 20

    def test_universe_must_contain_tested_variables(self, cattleya):
        with pytest.raises(InputError):
            count_models(cattleya, over=[0, 1])


class TestSerialization:
    def test_round_trip_keeps_semantics(self, cattleya):
        restored = parse_tree(serialize_tree(cattleya))
        assert restored == cattleya

    def test_load_from_file(self, cattleya, cattleya_path):
        assert load_tree(cattleya_path) == cattleya

    def test_node_ids_need_not_be_positions(self):
        text = json.dumps({
            "n": 1,
            "root": "r",
            "nodes": [{"id": 5, "leaf": 0}, {"id": "r", "var": 0, "left": 5, "right": 9}, {"id": 9, "leaf": 1}],
        })
        tree = parse_tree(text)
        assert evaluate(tree, (1,)) == 1
        assert evaluate(tree, (0,)) == 0

    def test_invalid_json(self):
        with pytest.raises(MalformedTreeError):
            parse_tree("{not json")

    def test_missing_child_id(self):
        text = json.dumps({"n": 1, "root": 0, "nodes": [{"id": 0, "var": 0, "left": 1, "right": 2}, {"id": 1, "leaf": 0}]})
        with pytest.raises(DanglingChildError):
            parse_tree(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            load_tree(tmp_path / "absent.json")


class TestInstances:
    @pytest.mark.parametrize("text", ["1011", "1,0,1,1", " 1 0 1 1 "])
    def test_bit_vector_forms(self, text):
        assert as_instance(text, 4) == (1, 0, 1, 1)

    def test_rejects_other_values(self):
        with pytest.raises(InputError):
            as_instance("1021")


def tree_text(nodes, n=1, root=0, **extra):
    return json.dumps({"n": n, "root": root, "nodes": nodes, **extra})


SMALL = [{"id": 0, "var": 0, "left": 1, "right": 2}, {"id": 1, "leaf": 0}, {"id": 2, "leaf": 1}]


class TestValueTypes:
    @pytest.mark.parametrize("var", [1.9, "0", True, None, [0]])
    def test_variable_must_be_integral(self, var):
        nodes = [dict(SMALL[0], var=var)] + SMALL[1:]
        with pytest.raises(MalformedTreeError):
            parse_tree(tree_text(nodes))

    def test_integral_float_is_accepted(self):
        nodes = [dict(SMALL[0], var=0.0)] + SMALL[1:]
        assert parse_tree(tree_text(nodes)).nodes[0].variable == 0

    @pytest.mark.parametrize("label", [0.5, True, "1", None])
    def test_leaf_label_must_be_integral(self, label):
        nodes = SMALL[:2] + [{"id": 2, "leaf": label}]
        with pytest.raises(MalformedTreeError):
            parse_tree(tree_text(nodes))

    @pytest.mark.parametrize("node_id", [[0], {"a": 0}, 0.5, True])
    def test_ids_are_integers_or_strings(self, node_id):
        nodes = [dict(SMALL[0], id=node_id)] + SMALL[1:]
        with pytest.raises(MalformedTreeError):
            parse_tree(tree_text(nodes, root=node_id))

    @pytest.mark.parametrize("child", [[1], 1.5, False])
    def test_child_references_are_checked(self, child):
        nodes = [dict(SMALL[0], left=child)] + SMALL[1:]
        with pytest.raises(MalformedTreeError):
            parse_tree(tree_text(nodes))

    @pytest.mark.parametrize("n", [1.5, "1", True, None])
    def test_n_must_be_integral(self, n):
        with pytest.raises(MalformedTreeError):
            parse_tree(tree_text(SMALL, n=n))

    def test_unhashable_root(self):
        with pytest.raises(MalformedTreeError):
            parse_tree(tree_text(SMALL, root=[0]))

    @pytest.mark.parametrize("features", [
        [{"column": "a"}],
        "a",
        [{"column": "a", "threshold": "high"}],
        [{"column": "a", "threshold": None}],
        ["a > 1"],
        {"column": "a", "threshold": 1.0},
    ])
    def test_invalid_features(self, features):
        with pytest.raises(MalformedTreeError):
            parse_tree(tree_text(SMALL, features=features))

    def test_valid_features_are_kept(self):
        tree = parse_tree(tree_text(SMALL, features=[{"column": "a", "threshold": 2}]))
        assert tree.features == ({"column": "a", "threshold": 2.0},)

    def test_feature_count_must_match(self):
        features = [{"column": "a", "threshold": 1.0}, {"column": "b", "category": "x"}]
        with pytest.raises(MalformedTreeError):
            parse_tree(tree_text(SMALL, features=features))


class TestEvaluateInputs:
    @pytest.mark.parametrize("x", [(2, 1, 1, 1), (-1, 1, 1, 1), (1, 1, 1, 7)])
    def test_non_bits_are_rejected(self, cattleya, x):
        with pytest.raises(InputError):
            evaluate(cattleya, x)

    def test_bit_strings_are_accepted(self, cattleya):
        assert evaluate(cattleya, "1111") == 1


def all_assignments(n):
    return list(itertools.product((0, 1), repeat=n))


class TestRandomTrees:
    @pytest.fixture
    def trees(self):
        rng = np.random.default_rng(2024)
        return [random_tree(rng, max_vars=10) for _ in range(30)]

    def test_negation_is_an_involution(self, trees):
        for tree in trees:
            assert negate(negate(tree)) == tree

    def test_negation_flips_every_assignment(self, trees):
        for tree in trees:
            matrix = np.array(all_assignments(tree.n), dtype=np.int8)
            assert (predict(negate(tree), matrix) == 1 - predict(tree, matrix)).all()

    def test_cnf_and_dnf_are_equivalent_to_the_tree(self, trees):
        for tree in trees[:15]:
            cnf = to_cnf(tree)
            dnf = to_dnf(tree)
            for x in all_assignments(tree.n):
                value = evaluate(tree, x)
                assert all(c.satisfied_by(x) for c in cnf) == bool(value)
                assert any(t.covers(x) for t in dnf) == bool(value)

    def test_counts_of_a_tree_and_its_negation_add_up(self, trees):
        for tree in trees:
            assert count_models(tree) + count_models(negate(tree)) == 2 ** len(variables(tree))

    def test_count_matches_enumeration(self, trees):
        for tree in trees:
            matrix = np.array(all_assignments(tree.n), dtype=np.int8)
            assert count_models(tree, over=range(tree.n)) == int(predict(tree, matrix).sum())

    def test_counts_shrink_as_the_condition_grows(self, trees):
        rng = np.random.default_rng(7)
        for tree in trees:
            x = rng.integers(0, 2, size=tree.n)
            order = rng.permutation(tree.n)
            counts = []
            for k in range(tree.n + 1):
                condition = Term(frozenset(Literal(int(v), bool(x[v])) for v in order[:k]))
                counts.append(count_models(tree, condition, over=range(tree.n)))
            assert counts == sorted(counts, reverse=True)
            assert counts[-1] == evaluate(tree, tuple(int(b) for b in x))

    def test_round_trip(self, trees):
        for tree in trees:
            assert parse_tree(serialize_tree(tree)) == tree
