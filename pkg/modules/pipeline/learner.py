"""
Top-down Gini tree learner producing read-once Boolean decision trees.

Each split is a Predicate on one column; predicates are registered into the tree's
FeatureMap, so variable i of the tree is feature_map[i].
"""
import logging
from typing import List, Optional, Set, Tuple

import numpy as np

from modules.pipeline.dataset import BinarizedDataset, FeatureMap, Predicate
from modules.reasoning.errors import InputError
from modules.reasoning.tree import DecisionTree, Node, predict

logger = logging.getLogger(__name__)


def gini(positives, totals):
    """Binary Gini impurity, vectorised over arrays of counts"""
    totals = np.asarray(totals, dtype=np.float64)
    p = np.divide(positives, totals, out=np.zeros_like(totals), where=totals > 0)
    return 2.0 * p * (1.0 - p)


def best_threshold(values: np.ndarray, labels: np.ndarray) -> Tuple[Optional[float], float]:
    """
    (threshold, weighted impurity decrease) of the best split of one column.

    Rows are sorted once; cumulative positive counts give every split between distinct
    values, and thresholds are the midpoints. (None, 0.0) when the column is constant.
    """
    n = values.shape[0]
    order = np.argsort(values, kind="mergesort")
    v = values[order]
    y = labels[order]
    valid = v[1:] != v[:-1]
    if not valid.any():
        return None, 0.0

    left_n = np.arange(1, n)
    left_pos = np.cumsum(y)[:-1]
    total_pos = y.sum()
    right_n = n - left_n
    right_pos = total_pos - left_pos
    weighted = (left_n * gini(left_pos, left_n) + right_n * gini(right_pos, right_n)) / n
    gain = gini(total_pos, n) - weighted
    gain = np.where(valid, gain, -np.inf)
    i = int(np.argmax(gain))
    return float((v[i] + v[i + 1]) / 2.0), float(gain[i])


class TreeLearner:
    def __init__(self, data: BinarizedDataset, min_gain: float = 0.0):
        self.data = data
        self.min_gain = min_gain
        self.features = FeatureMap()
        self.nodes: List[Optional[Node]] = []

    def fit(self) -> DecisionTree:
        if len(self.data) == 0:
            raise InputError("cannot learn a tree from an empty training set")
        self._grow(np.arange(len(self.data)), set())
        tree = DecisionTree(len(self.features), tuple(self.nodes), 0, self.features.to_dicts())
        logger.debug(f"Learned tree: {tree.node_count} nodes, depth {tree.depth}, {tree.n} features")
        return tree

    def _leaf(self, index: int, labels: np.ndarray):
        self.nodes[index] = Node.leaf(int(2 * labels.sum() > labels.size))

    def _grow(self, rows: np.ndarray, used: Set[Predicate]) -> int:
        index = len(self.nodes)
        self.nodes.append(None)
        labels = self.data.labels[rows]
        if labels.min() == labels.max():
            self._leaf(index, labels)
            return index

        split = self._best_split(rows, labels, used)
        if split is None:
            self._leaf(index, labels)
            return index

        column, threshold, predicate = split
        goes_right = self.data.values[rows, column] > threshold
        variable = self.features.register(predicate)
        left = self._grow(rows[~goes_right], used | {predicate})
        right = self._grow(rows[goes_right], used | {predicate})
        self.nodes[index] = Node.internal(variable, left, right)
        return index

    def _best_split(self, rows, labels, used) -> Optional[Tuple[int, float, Predicate]]:
        best = None
        best_gain = self.min_gain
        for j, column in enumerate(self.data.columns):
            threshold, gain = best_threshold(self.data.values[rows, j], labels)
            if threshold is None or gain <= best_gain:
                continue
            predicate = column.predicate(threshold)
            if predicate in used:
                continue
            best, best_gain = (j, threshold, predicate), gain
        return best


def learn_tree(train: BinarizedDataset, min_gain: float = 0.0) -> DecisionTree:
    return TreeLearner(train, min_gain).fit()


def tree_predicates(tree: DecisionTree) -> List[Predicate]:
    if len(tree.features) != tree.n:
        raise InputError("tree carries no feature predicates; give bit-vector instances instead")
    return list(FeatureMap.from_dicts(tree.features).predicates)


def accuracy(tree: DecisionTree, data: BinarizedDataset) -> float:
    if len(data) == 0:
        return 0.0
    matrix = data.binarize(tree_predicates(tree)) if tree.n else np.zeros((len(data), 0), dtype=np.int8)
    return float(np.mean(predict(tree, matrix) == data.labels))
