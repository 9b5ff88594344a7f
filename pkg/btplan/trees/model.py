"""
Document model of behavior-tree XML files

The model keeps every element of a document, including elements and attributes that
are unknown to the dialect, so that lint and repair can operate on invalid trees.

.. autosummary::
   :nosignatures:

   RawNode
   NamedTree
   TreeModel
   select_main_tree
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

NodePath = Tuple[int, ...]
SourceSpan = Tuple[int, int]


class MainTreeError(ValueError):
    """the entry point of a document cannot be determined"""


class AmbiguousMain(MainTreeError):
    """several trees exist but none is marked as main tree"""


class DanglingMain(MainTreeError):
    """the main tree attribute names a tree that does not exist"""


@dataclass
class RawNode:
    """a single element of the document

    Equality ignores the source span, so models compare equal after a round trip.
    """

    element_name: str
    attributes: Dict[str, str] = field(default_factory=dict)
    children: List[RawNode] = field(default_factory=list)
    source_span: Optional[SourceSpan] = field(default=None, compare=False)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def iter_nodes(self, path: NodePath = ()) -> Iterator[Tuple[NodePath, RawNode]]:
        """iterate over this node and all its descendants in document order

        Args:
            path (tuple): The path of this node, which is prepended to all paths

        Yields:
            tuple: the path and the node
        """
        yield path, self
        for i, child in enumerate(self.children):
            yield from child.iter_nodes(path + (i,))

    def count_nodes(self) -> int:
        """int: number of nodes in the subtree rooted at this node"""
        return 1 + sum(child.count_nodes() for child in self.children)

    def structure(self) -> Tuple[Any, ...]:
        """return a nested tuple capturing names, ordered attributes, and children"""
        return (
            self.element_name,
            tuple(self.attributes.items()),
            tuple(child.structure() for child in self.children),
        )


@dataclass
class NamedTree:
    """a `BehaviorTree` element of the document

    A well-formed tree has exactly one top-level node, but documents produced by
    language models may contain none or several, so all of them are kept.
    """

    id: str
    nodes: List[RawNode] = field(default_factory=list)
    attributes: Dict[str, str] = field(default_factory=dict)
    source_span: Optional[SourceSpan] = field(default=None, compare=False)

    @property
    def root(self) -> Optional[RawNode]:
        """:class:`RawNode`: the single top-level node or `None`"""
        if len(self.nodes) == 1:
            return self.nodes[0]
        return None

    def structure(self) -> Tuple[Any, ...]:
        return (
            self.id,
            tuple(self.attributes.items()),
            tuple(node.structure() for node in self.nodes),
        )


@dataclass
class TreeModel:
    """parsed representation of a complete behavior-tree document"""

    trees: List[NamedTree] = field(default_factory=list)
    main_tree_id: Optional[str] = None
    format_version: Optional[str] = None
    attributes: Dict[str, str] = field(default_factory=dict)
    """ dict: other attributes of the root element """
    extras: List[RawNode] = field(default_factory=list)
    """ list: root-level elements that are not tree definitions """

    @property
    def tree_ids(self) -> List[str]:
        return [tree.id for tree in self.trees]

    def get_tree(self, tree_id: str) -> NamedTree:
        """return the tree with the given identifier

        Raises:
            KeyError: if the tree does not exist
        """
        for tree in self.trees:
            if tree.id == tree_id:
                return tree
        raise KeyError(tree_id)

    def has_tree(self, tree_id: str) -> bool:
        return any(tree.id == tree_id for tree in self.trees)

    def tree_index(self, tree_id: str) -> int:
        """int: position of the tree with the given identifier"""
        for i, tree in enumerate(self.trees):
            if tree.id == tree_id:
                return i
        raise KeyError(tree_id)

    def iter_nodes(self) -> Iterator[Tuple[NodePath, RawNode]]:
        """iterate over all nodes of all trees in document order

        Paths start with the index of the tree, followed by the index of the top-level
        node and the child indices leading to the node.
        """
        for t, tree in enumerate(self.trees):
            for i, node in enumerate(tree.nodes):
                yield from node.iter_nodes((t, i))

    def node_at(self, path: NodePath):
        """resolve a path to the element it denotes

        Args:
            path (tuple):
                An empty path denotes the document, a path of length one a tree
                definition, and longer paths nodes inside trees.

        Returns:
            The model, a :class:`NamedTree`, or a :class:`RawNode`

        Raises:
            IndexError: if the path does not resolve
        """
        if len(path) == 0:
            return self
        tree = self.trees[path[0]]
        if len(path) == 1:
            return tree
        node = tree.nodes[path[1]]
        for i in path[2:]:
            node = node.children[i]
        return node

    def count_nodes(self) -> int:
        return sum(node.count_nodes() for tree in self.trees for node in tree.nodes)

    def copy(self) -> TreeModel:
        """return a deep copy of the model"""
        return copy.deepcopy(self)

    def structure(self) -> Tuple[Any, ...]:
        """nested tuples describing the document without source positions"""
        return (
            self.format_version,
            self.main_tree_id,
            tuple(self.attributes.items()),
            tuple(tree.structure() for tree in self.trees),
            tuple(node.structure() for node in self.extras),
        )

    def select_main_tree(self) -> str:
        """determine the identifier of the tree that is executed"""
        return select_main_tree(self)


def select_main_tree(model: TreeModel) -> str:
    """determine the entry point of a document

    Args:
        model (:class:`TreeModel`): The parsed document

    Returns:
        str: the identifier of the main tree

    Raises:
        :class:`DanglingMain`: the main tree attribute names a missing tree
        :class:`AmbiguousMain`: several trees exist without a main tree attribute
    """
    if model.main_tree_id is not None:
        if model.has_tree(model.main_tree_id):
            return model.main_tree_id
        raise DanglingMain(
            f"Main tree `{model.main_tree_id}` is not defined (trees: "
            f"{', '.join(model.tree_ids)})"
        )
    if len(model.trees) == 1:
        return model.trees[0].id
    if not model.trees:
        raise AmbiguousMain("Document does not define any tree")
    raise AmbiguousMain(
        f"Document defines {len(model.trees)} trees but no `main_tree_to_execute`"
    )
