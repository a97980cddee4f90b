import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from modules.config import DEFAULT_FOLDS, DEFAULT_SEED
from modules.pipeline.dataset import BinarizedDataset
from modules.pipeline.learner import accuracy, learn_tree
from modules.reasoning.errors import UsageError
from modules.reasoning.tree import DecisionTree

logger = logging.getLogger(__name__)


@dataclass
class FoldResult:
    fold: int
    tree: DecisionTree
    test_rows: np.ndarray
    accuracy: float
    train_accuracy: float

    def summary(self) -> dict:
        return {
            "fold": self.fold,
            "test_rows": int(self.test_rows.size),
            "accuracy": round(self.accuracy, 6),
            "train_accuracy": round(self.train_accuracy, 6),
            "nodes": self.tree.node_count,
            "depth": self.tree.depth,
            "features": self.tree.n,
        }


def fold_indices(rows: int, folds: int, seed: int) -> List[np.ndarray]:
    """Seeded partition of range(rows) into folds; a function of (seed, rows, folds) only"""
    if folds < 2:
        raise UsageError(f"cross-validation needs at least 2 folds, got {folds}")
    if rows < 2 * folds:
        raise UsageError(f"{rows} rows are too few for {folds} folds (need at least {2 * folds})")
    permutation = np.random.default_rng(seed).permutation(rows)
    return [np.sort(part) for part in np.array_split(permutation, folds)]


def cross_validate(
    data: BinarizedDataset, folds: Optional[int] = None, seed: Optional[int] = None
) -> List[FoldResult]:
    folds = DEFAULT_FOLDS if folds is None else folds
    seed = DEFAULT_SEED if seed is None else seed
    parts = fold_indices(len(data), folds, seed)
    results = []
    for k, test_rows in enumerate(parts):
        train_rows = np.concatenate([p for i, p in enumerate(parts) if i != k])
        train = data.subset(train_rows)
        test = data.subset(test_rows)
        tree = learn_tree(train)
        result = FoldResult(k, tree, test_rows, accuracy(tree, test), accuracy(tree, train))
        logger.info(
            f"Fold {k + 1}/{folds}: {tree.node_count} nodes, accuracy {result.accuracy:.3f} "
            f"on {test_rows.size} rows"
        )
        results.append(result)
    return results
