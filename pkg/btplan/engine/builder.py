"""
Building executable trees from parsed documents

.. autosummary::
   :nosignatures:

   build_tree
   BuildError
"""

from __future__ import annotations

import logging
from typing import Dict, Optional, Tuple

from ..analysis.catalog import CONDITION, NodeClass, classify_node
from ..tools.parameters import convert_bool
from ..trees.model import MainTreeError, RawNode, TreeModel
from ..trees.nodes import SUBTREE_RESERVED
from .blackboard import Blackboard, parse_reference
from .hosts import ActionHost
from .nodes import ActionNode, ConditionNode, TreeNode
from .runner import ExecutableTree


class BuildError(ValueError):
    """a document cannot be turned into an executable tree"""


class UnknownAction(BuildError):
    """a leaf is neither part of the dialect nor offered by the host"""


class EmptyControl(BuildError):
    """a control node or decorator has no children"""


class UnresolvedSubTree(BuildError):
    """a `SubTree` element references a tree that does not exist"""


class MissingRequiredPort(BuildError):
    """a node lacks a port it requires"""


class InvalidTree(BuildError):
    """the structure of the document does not describe an executable tree"""


class _Builder:
    def __init__(self, model: TreeModel, host: ActionHost):
        self.model = model
        self.catalog = host.catalog
        self.next_id = 0

    def build_tree(
        self, tree_id: str, blackboard: Blackboard, stack: Tuple[str, ...]
    ) -> TreeNode:
        """build the single root node of the tree `tree_id`"""
        tree = self.model.get_tree(tree_id)
        if len(tree.nodes) != 1:
            raise InvalidTree(
                f"Tree `{tree_id}` must have exactly one root node, found "
                f"{len(tree.nodes)}"
            )
        return self.build_node(tree.nodes[0], blackboard, stack + (tree_id,))

    def build_node(
        self, raw: RawNode, blackboard: Blackboard, stack: Tuple[str, ...]
    ) -> TreeNode:
        node_class, resolved, schema = classify_node(raw, self.catalog)
        node_id = self.next_id
        self.next_id += 1
        line = raw.source_span[0] if raw.source_span else "?"
        where = f"(line {line})"

        if resolved.generic is not None and resolved.type_name is None:
            raise InvalidTree(f"`{resolved.generic}` without `ID` {where}")
        name = resolved.type_name
        parameters = resolved.parameters

        if node_class in {NodeClass.UNKNOWN_LEAF, NodeClass.UNKNOWN_COMPOSITE}:
            raise UnknownAction(f"Node type `{name}` is not available {where}")

        if node_class == NodeClass.SUBTREE:
            return self._build_subtree(node_id, raw, blackboard, stack, where)

        if resolved.definition is not None:
            definition = resolved.definition
            required = definition.required
            allowed = definition.ports
        else:
            assert schema is not None
            definition = None
            required = schema.required
            allowed = schema.ports

        missing = sorted(required - set(parameters))
        if missing:
            raise MissingRequiredPort(f"`{name}` lacks ports {missing} {where}")

        if node_class in {NodeClass.CONTROL, NodeClass.DECORATOR}:
            if not raw.children:
                raise EmptyControl(f"`{name}` has no children {where}")
            if node_class == NodeClass.DECORATOR and len(raw.children) > 1:
                raise InvalidTree(f"Decorator `{name}` has several children {where}")
            for port in definition.integer_ports & set(parameters):
                try:
                    int(parameters[port])
                except ValueError:
                    raise InvalidTree(
                        f"Port `{port}` of `{name}` must be an integer {where}"
                    ) from None
            # unknown attributes of controls do not affect execution
            parameters = {k: v for k, v in parameters.items() if k in allowed}
            children = [self.build_node(c, blackboard, stack) for c in raw.children]
            return TreeNode.from_name(
                definition.name, node_id, parameters, blackboard, children
            )

        # leaves
        if raw.children:
            raise InvalidTree(f"Leaf `{name}` has children {where}")
        unknown = sorted(set(parameters) - allowed)
        if unknown:
            raise InvalidTree(f"`{name}` has unknown ports {unknown} {where}")

        if node_class == NodeClass.BUILTIN_LEAF:
            return TreeNode.from_name(definition.name, node_id, parameters, blackboard)
        leaf_class = ConditionNode if schema.kind == CONDITION else ActionNode
        return leaf_class(node_id, parameters, blackboard, name=name)

    def _build_subtree(self, node_id, raw, blackboard, stack, where) -> TreeNode:
        tree_id = raw.attributes.get("ID")
        if tree_id is None:
            raise InvalidTree(f"`{raw.element_name}` without `ID` {where}")
        if not self.model.has_tree(tree_id):
            raise UnresolvedSubTree(f"Tree `{tree_id}` does not exist {where}")
        if tree_id in stack:
            raise InvalidTree(f"Tree `{tree_id}` references itself {where}")

        autoremap = raw.attributes.get("_autoremap", raw.attributes.get("__autoremap"))
        remapping: Dict[str, str] = {}
        literals: Dict[str, str] = {}
        for key, value in raw.attributes.items():
            if key in SUBTREE_RESERVED:
                continue
            reference = parse_reference(value)
            if reference is None:
                literals[key] = value
            else:
                remapping[key] = reference

        scope = Blackboard(
            blackboard,
            remapping,
            autoremap=convert_bool(autoremap) if autoremap is not None else False,
        )
        for key, value in literals.items():
            scope.define(key, value)

        parameters = {
            k: v for k, v in raw.attributes.items() if k not in SUBTREE_RESERVED
        }
        node = TreeNode.from_name("SubTree", node_id, parameters, blackboard)
        node.tree_id = tree_id
        node.children.append(self.build_tree(tree_id, scope, stack))
        return node


def build_tree(model: TreeModel, host: ActionHost, tree_id: Optional[str] = None):
    """create an executable tree from a document

    Args:
        model (:class:`~btplan.trees.model.TreeModel`):
            The document
        host (:class:`~btplan.engine.hosts.ActionHost`):
            Provides the actions used by the leaves. A new session of the host is
            opened for the executable tree.
        tree_id (str, optional):
            The tree to execute. The default is the main tree of the document.

    Returns:
        :class:`~btplan.engine.runner.ExecutableTree`

    Raises:
        :class:`UnknownAction`, :class:`EmptyControl`, :class:`UnresolvedSubTree`,
        :class:`MissingRequiredPort`, :class:`InvalidTree`
    """
    if tree_id is None:
        try:
            tree_id = model.select_main_tree()
        except MainTreeError as err:
            raise InvalidTree(str(err)) from err
    elif not model.has_tree(tree_id):
        raise UnresolvedSubTree(f"Tree `{tree_id}` does not exist")
    if len(set(model.tree_ids)) != len(model.trees):
        raise InvalidTree("Tree identifiers are not unique")

    builder = _Builder(model, host)
    blackboard = Blackboard()
    root = builder.build_tree(tree_id, blackboard, ())
    tree = ExecutableTree(root, blackboard, host.open_session(), main_tree_id=tree_id)
    logger = logging.getLogger(__name__)
    logger.debug(f"Built tree `{tree_id}` with {len(tree)} nodes")
    return tree
