"""
Read-once Boolean decision trees stored as a flat node pool.

Left child = variable assigned 0, right child = variable assigned 1.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from modules.reasoning.errors import (
    DanglingChildError,
    InputError,
    MalformedTreeError,
    ReadOnceViolation,
)
from modules.reasoning.literals import Clause, Instance, Literal, Term, as_instance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Node:
    variable: int = -1
    left: int = -1
    right: int = -1
    label: Optional[int] = None

    @classmethod
    def leaf(cls, label: int) -> "Node":
        return cls(label=int(label))

    @classmethod
    def internal(cls, variable: int, left: int, right: int) -> "Node":
        return cls(variable=int(variable), left=int(left), right=int(right))

    @property
    def is_leaf(self) -> bool:
        return self.label is not None

    def child(self, value: int) -> int:
        return self.right if value else self.left


@dataclass(frozen=True)
class DecisionTree:
    n: int
    nodes: Tuple[Node, ...]
    root: int = 0
    # one predicate dict per variable when the tree was learned from a CSV
    features: Tuple[dict, ...] = field(default=(), compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "features", tuple(self.features))
        self._validate()

    def _validate(self):
        if self.n < 0:
            raise MalformedTreeError(f"feature count must be nonnegative, got {self.n}")
        if not self.nodes:
            raise MalformedTreeError("tree has no nodes")
        if not 0 <= self.root < len(self.nodes):
            raise DanglingChildError(-1, self.root)
        if self.features and len(self.features) != self.n:
            raise MalformedTreeError(
                f"{len(self.features)} feature predicates for {self.n} variables"
            )

        seen = set()
        stack = [(self.root, frozenset())]
        while stack:
            index, on_path = stack.pop()
            if index in seen:
                raise MalformedTreeError(f"node {index} has more than one parent or lies on a cycle")
            seen.add(index)
            node = self.nodes[index]
            if node.is_leaf:
                if node.label not in (0, 1):
                    raise MalformedTreeError(f"leaf {index} has label {node.label}, expected 0 or 1")
                continue
            if not 0 <= node.variable < self.n:
                raise MalformedTreeError(
                    f"node {index} tests x{node.variable + 1} but the tree declares n={self.n}"
                )
            if node.variable in on_path:
                raise ReadOnceViolation(node.variable, index)
            for child in (node.left, node.right):
                if not 0 <= child < len(self.nodes):
                    raise DanglingChildError(index, child)
                stack.append((child, on_path | {node.variable}))

        if len(seen) != len(self.nodes):
            orphans = sorted(set(range(len(self.nodes))) - seen)
            raise MalformedTreeError(f"nodes {orphans[:5]} are not reachable from the root")

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def leaf_count(self) -> int:
        return sum(1 for node in self.nodes if node.is_leaf)

    @property
    def depth(self) -> int:
        best = 0
        stack = [(self.root, 0)]
        while stack:
            index, d = stack.pop()
            node = self.nodes[index]
            if node.is_leaf:
                best = max(best, d)
            else:
                stack.append((node.left, d + 1))
                stack.append((node.right, d + 1))
        return best

    @property
    def is_constant(self) -> bool:
        return self.nodes[self.root].is_leaf


def variables(tree: DecisionTree) -> frozenset:
    """Var(T): the variables tested somewhere in the tree"""
    return frozenset(node.variable for node in tree.nodes if not node.is_leaf)


def evaluate(tree: DecisionTree, x: Sequence[int]) -> int:
    x = as_instance(x, tree.n)
    node = tree.nodes[tree.root]
    while not node.is_leaf:
        node = tree.nodes[node.child(x[node.variable])]
    return node.label


def predict(tree: DecisionTree, matrix) -> np.ndarray:
    """Vectorised evaluate over the rows of a 0/1 matrix"""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[1] != tree.n:
        raise InputError(f"expected a matrix with {tree.n} columns, got shape {matrix.shape}")
    out = np.zeros(matrix.shape[0], dtype=np.int8)
    stack = [(tree.root, np.arange(matrix.shape[0]))]
    while stack:
        index, rows = stack.pop()
        if rows.size == 0:
            continue
        node = tree.nodes[index]
        if node.is_leaf:
            out[rows] = node.label
            continue
        ones = matrix[rows, node.variable].astype(bool)
        stack.append((node.left, rows[~ones]))
        stack.append((node.right, rows[ones]))
    return out


def negate(tree: DecisionTree) -> DecisionTree:
    nodes = tuple(Node.leaf(1 - node.label) if node.is_leaf else node for node in tree.nodes)
    return DecisionTree(tree.n, nodes, tree.root, tree.features)


def paths(tree: DecisionTree) -> Iterator[Tuple[int, Tuple[Literal, ...]]]:
    """(leaf label, literals from root to leaf) for every leaf, left-first"""
    stack = [(tree.root, ())]
    while stack:
        index, path = stack.pop()
        node = tree.nodes[index]
        if node.is_leaf:
            yield node.label, path
            continue
        stack.append((node.right, path + (Literal(node.variable, True),)))
        stack.append((node.left, path + (Literal(node.variable, False),)))


def to_cnf(tree: DecisionTree) -> List[Clause]:
    """One clause per 0-leaf: the negation of the path term"""
    return [Term(frozenset(path)).negation() for label, path in paths(tree) if label == 0]


def to_dnf(tree: DecisionTree) -> List[Term]:
    """One term per 1-leaf"""
    return [Term(frozenset(path)) for label, path in paths(tree) if label == 1]


def direct_path(tree: DecisionTree, x: Sequence[int]) -> Tuple[Literal, ...]:
    """Literals of the root-to-leaf path compatible with x, root first"""
    if len(x) != tree.n:
        raise InputError(f"instance has {len(x)} values, the tree expects {tree.n}")
    path = []
    node = tree.nodes[tree.root]
    while not node.is_leaf:
        value = x[node.variable]
        path.append(Literal(node.variable, bool(value)))
        node = tree.nodes[node.child(value)]
    return tuple(path)


def count_models(
    tree: DecisionTree,
    condition: Term = Term(),
    over: Optional[Iterable[int]] = None,
) -> int:
    """
    Number of assignments to `over` satisfying both the tree and the condition.

    Defaults to Var(T) ∪ Var(condition). Exact Python integer.
    """
    condition_vars = condition.variables()
    tested = variables(tree)
    universe = frozenset(over) if over is not None else tested | condition_vars
    missing = (tested | condition_vars) - universe
    if missing:
        raise InputError(f"variables {sorted(v + 1 for v in missing)} are outside the counting universe")

    fixed = {lit.variable: lit.polarity for lit in condition.literals}
    base = len(universe) - len(condition_vars)
    total = 0
    stack = [(tree.root, 0)]
    while stack:
        index, bound = stack.pop()
        node = tree.nodes[index]
        if node.is_leaf:
            if node.label == 1:
                total += 1 << (base - bound)
            continue
        polarity = fixed.get(node.variable)
        if polarity is None:
            stack.append((node.left, bound + 1))
            stack.append((node.right, bound + 1))
        else:
            stack.append((node.child(polarity), bound))
    return total


def _integer(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedTreeError(f"{what} must be an integer, got {value!r}")
    if isinstance(value, float) and not value.is_integer():
        raise MalformedTreeError(f"{what} must be an integer, got {value!r}")
    return int(value)


def _node_id(value, what: str):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise MalformedTreeError(f"{what} must be an integer or a string, got {value!r}")
    return value


def _features(raw) -> Tuple[dict, ...]:
    # the predicate model lives with the CSV pipeline
    from modules.pipeline.dataset import FeatureMap

    if not isinstance(raw, list) or not all(isinstance(item, dict) for item in raw):
        raise MalformedTreeError("'features' must be a list of predicate objects")
    try:
        predicates = FeatureMap.from_dicts(raw).predicates
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedTreeError(f"'features' holds an invalid predicate: {e}") from None
    if len(predicates) != len(raw):
        raise MalformedTreeError("'features' lists the same predicate twice")
    return tuple(p.to_dict() for p in predicates)


def parse_tree(text: Union[str, bytes]) -> DecisionTree:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedTreeError(f"tree file is not valid JSON: {e}") from None
    if not isinstance(data, dict):
        raise MalformedTreeError("tree file must contain a JSON object")
    for key in ("n", "root", "nodes"):
        if key not in data:
            raise MalformedTreeError(f"tree file has no '{key}' entry")

    raw_nodes = data["nodes"]
    if not isinstance(raw_nodes, list):
        raise MalformedTreeError("'nodes' must be a list")
    position: Dict[Union[int, str], int] = {}
    for i, raw in enumerate(raw_nodes):
        if not isinstance(raw, dict) or "id" not in raw:
            raise MalformedTreeError(f"node entry {i} has no id")
        node_id = _node_id(raw["id"], f"id of node entry {i}")
        if node_id in position:
            raise MalformedTreeError(f"duplicate node id {node_id}")
        position[node_id] = i

    nodes = []
    for raw in raw_nodes:
        name = raw["id"]
        if "leaf" in raw:
            nodes.append(Node.leaf(_integer(raw["leaf"], f"label of leaf {name}")))
            continue
        if "var" not in raw:
            raise MalformedTreeError(f"node {name} is missing 'var'")
        children = []
        for side in ("left", "right"):
            child = raw.get(side)
            if child is None:
                raise DanglingChildError(name, child)
            child = _node_id(child, f"{side} child of node {name}")
            if child not in position:
                raise DanglingChildError(name, child)
            children.append(position[child])
        nodes.append(Node.internal(_integer(raw["var"], f"variable of node {name}"), *children))

    root = _node_id(data["root"], "'root'")
    if root not in position:
        raise DanglingChildError(-1, root)
    n = _integer(data["n"], "'n'")
    features = _features(data["features"]) if "features" in data else ()
    return DecisionTree(n, tuple(nodes), position[root], features)


def serialize_tree(tree: DecisionTree, indent: Optional[int] = None) -> str:
    nodes = []
    for i, node in enumerate(tree.nodes):
        if node.is_leaf:
            nodes.append({"id": i, "leaf": node.label})
        else:
            nodes.append({"id": i, "var": node.variable, "left": node.left, "right": node.right})
    data = {"n": tree.n, "root": tree.root, "nodes": nodes}
    if tree.features:
        data["features"] = list(tree.features)
    return json.dumps(data, indent=indent)


def load_tree(path: Union[str, Path]) -> DecisionTree:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read tree file {path}: {e}") from None
    tree = parse_tree(text)
    logger.debug(f"Loaded tree {path}: n={tree.n}, {tree.node_count} nodes")
    return tree


def save_tree(path: Union[str, Path], tree: DecisionTree) -> None:
    Path(path).write_text(serialize_tree(tree, indent=1) + "\n", encoding="utf-8")


def check_instance(tree: DecisionTree, x: Union[str, Sequence[int]]) -> Instance:
    return as_instance(x, tree.n)
