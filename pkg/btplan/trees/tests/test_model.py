import pytest

from btplan.trees import (
    AmbiguousMain,
    DanglingMain,
    NamedTree,
    RawNode,
    TreeModel,
    parse,
    select_main_tree,
)


def make_model(*tree_ids, main=None):
    trees = [NamedTree(tree_id, [RawNode("AlwaysSuccess")]) for tree_id in tree_ids]
    return TreeModel(trees, main_tree_id=main)


def test_select_main_tree():
    """test determining the entry point of a document"""
    assert select_main_tree(make_model("Only")) == "Only"
    model = make_model("MainTree", "Sub", main="MainTree")
    assert select_main_tree(model) == "MainTree"
    assert model.select_main_tree() == "MainTree"

    with pytest.raises(AmbiguousMain):
        select_main_tree(make_model("A", "B"))
    with pytest.raises(DanglingMain):
        select_main_tree(make_model("A", "B", main="C"))
    with pytest.raises(DanglingMain):
        select_main_tree(make_model("A", main="C"))


def test_node_paths():
    """test addressing nodes by paths"""
    model = parse(
        '<root><BehaviorTree ID="T"><Sequence><A/><Fallback><B/></Fallback>'
        "</Sequence></BehaviorTree></root>"
    )
    paths = [path for path, _ in model.iter_nodes()]
    assert paths == [(0, 0), (0, 0, 0), (0, 0, 1), (0, 0, 1, 0)]
    assert model.node_at(()) is model
    assert model.node_at((0,)).id == "T"
    assert model.node_at((0, 0, 1, 0)).element_name == "B"
    for path, node in model.iter_nodes():
        assert model.node_at(path) is node
    with pytest.raises(IndexError):
        model.node_at((0, 0, 5))


def test_model_copy():
    """test that copies are independent"""
    model = make_model("A")
    clone = model.copy()
    clone.trees[0].nodes.clear()
    assert model.count_nodes() == 1
    assert clone.count_nodes() == 0
    assert model.get_tree("A") is model.trees[0]
    with pytest.raises(KeyError):
        model.get_tree("B")
