import itertools

import pytest

from modules.reasoning.tree import DecisionTree, Node, save_tree


def build_cattleya() -> DecisionTree:
    """f = x1∧x4 ∨ x2∧x3∧x4, the four-variable orchid classifier"""
    nodes = []

    def add(node: Node) -> int:
        nodes.append(node)
        return len(nodes) - 1

    def x4_node() -> int:
        index = add(None)
        nodes[index] = Node.internal(3, add(Node.leaf(0)), add(Node.leaf(1)))
        return index

    def x3_full() -> int:
        index = add(None)
        left = x4_node()
        right = x4_node()
        nodes[index] = Node.internal(2, left, right)
        return index

    root = add(None)

    left_x2 = add(None)
    zero = add(Node.leaf(0))
    left_x3 = add(None)
    zero_x3 = add(Node.leaf(0))
    nodes[left_x3] = Node.internal(2, zero_x3, x4_node())
    nodes[left_x2] = Node.internal(1, zero, left_x3)

    right_x2 = add(None)
    a = x3_full()
    b = x3_full()
    nodes[right_x2] = Node.internal(1, a, b)

    nodes[root] = Node.internal(0, left_x2, right_x2)
    return DecisionTree(4, tuple(nodes), root)


@pytest.fixture
def cattleya() -> DecisionTree:
    return build_cattleya()


@pytest.fixture
def cattleya_path(tmp_path, cattleya):
    path = tmp_path / "cattleya.json"
    save_tree(path, cattleya)
    return path


@pytest.fixture
def x_all_ones():
    return (1, 1, 1, 1)


def monk1_rows():
    """Full MONK-1 attribute grid; class = (a1 == a2) or (a5 == 1)"""
    ranges = [range(1, 4), range(1, 4), range(1, 3), range(1, 4), range(1, 5), range(1, 3)]
    for values in itertools.product(*ranges):
        a1, a2, _, _, a5, _ = values
        yield values + (int(a1 == a2 or a5 == 1),)


@pytest.fixture
def monk1_csv(tmp_path):
    path = tmp_path / "monk1.csv"
    lines = ["a1,a2,a3,a4,a5,a6,class"]
    lines += [",".join(str(v) for v in row) for row in monk1_rows()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
