"""
Subtractive repair of generated behavior trees

Repair removes what the linter rejects instead of guessing what was meant: parameters
that a leaf does not accept, leaves that are not in the catalog, unknown wrappers
around a single child, and control nodes that lost all their children. It never adds
nodes and never renames anything.

.. autosummary::
   :nosignatures:

   RepairKind
   RepairEdit
   RepairOutcome
   NonConvergence
   repair
   render_diff
   format_edits
"""

from __future__ import annotations

import difflib
import enum
import logging
from dataclasses import dataclass, field
from typing import List, Mapping, Tuple

from ..trees.model import NodePath, RawNode, TreeModel
from ..trees.serializer import serialize
from .catalog import NodeClass, PortSchema, classify_node
from .lint import Diagnostic, DiagnosticCode, Severity


class NonConvergence(RuntimeError):
    """repair did not reach a fixpoint within its iteration budget"""


class RepairKind(str, enum.Enum):
    DROP_PORT = "DropPort"
    DROP_NODE = "DropNode"
    PROMOTE_CHILD = "PromoteChild"
    PRUNE_EMPTY_CONTROL = "PruneEmptyControl"


@dataclass(frozen=True)
class RepairEdit:
    """a single modification applied by :func:`repair`

    The path refers to the model as it was at the start of the pass that applied the
    edit.
    """

    kind: RepairKind
    path: NodePath
    detail: str

    def __str__(self) -> str:
        path = "/".join(str(i) for i in self.path)
        return f"{self.kind.value} {self.detail} at {path}"


@dataclass
class RepairOutcome:
    repaired: TreeModel
    edits: List[RepairEdit] = field(default_factory=list)
    converged: bool = True
    diagnostics: List[Diagnostic] = field(default_factory=list)
    """ list: warnings about the repaired model, e.g. trees that became empty """

    @property
    def changed(self) -> bool:
        return len(self.edits) > 0


def _children_list(model: TreeModel, parent_path: NodePath) -> List[RawNode]:
    """the list holding the children of the element at `parent_path`"""
    parent = model.node_at(parent_path)
    if len(parent_path) == 1:
        return parent.nodes
    return parent.children


def _allowed_parameters(node_class, resolved, schema) -> frozenset:
    if node_class == NodeClass.CATALOG_LEAF:
        return schema.ports
    return resolved.definition.ports


def _drop_ports(model, catalog) -> List[RepairEdit]:
    edits: List[RepairEdit] = []
    targets: List[Tuple[RawNode, str]] = []
    for path, node in model.iter_nodes():
        node_class, resolved, schema = classify_node(node, catalog)
        if node_class not in {NodeClass.CATALOG_LEAF, NodeClass.BUILTIN_LEAF}:
            continue
        allowed = _allowed_parameters(node_class, resolved, schema)
        for name in resolved.parameters:
            if name not in allowed:
                edits.append(RepairEdit(RepairKind.DROP_PORT, path, name))
                targets.append((node, name))
    for node, name in reversed(targets):
        del node.attributes[name]
    return edits


def _is_droppable(node: RawNode, catalog) -> bool:
    if node.children:
        return False
    node_class, resolved, _ = classify_node(node, catalog)
    if node_class in {NodeClass.UNKNOWN_LEAF, NodeClass.UNKNOWN_COMPOSITE}:
        return True
    # generic forms without a node type
    return resolved.generic is not None and resolved.type_name is None


def _drop_nodes(model, catalog) -> List[RepairEdit]:
    edits = []
    for path, node in model.iter_nodes():
        if _is_droppable(node, catalog):
            name = node.attributes.get("ID", node.element_name)
            edits.append(RepairEdit(RepairKind.DROP_NODE, path, name))
    for edit in reversed(edits):
        del _children_list(model, edit.path[:-1])[edit.path[-1]]
    return edits


def _promote_children(model, catalog) -> List[RepairEdit]:
    edits = []
    for path, node in model.iter_nodes():
        if len(node.children) != 1:
            continue
        node_class, resolved, _ = classify_node(node, catalog)
        unknown = node_class == NodeClass.UNKNOWN_COMPOSITE
        if unknown or (resolved.generic is not None and resolved.type_name is None):
            name = node.attributes.get("ID", node.element_name)
            edits.append(RepairEdit(RepairKind.PROMOTE_CHILD, path, name))
    # reversed preorder replaces inner wrappers before outer ones
    for edit in reversed(edits):
        siblings = _children_list(model, edit.path[:-1])
        siblings[edit.path[-1]] = siblings[edit.path[-1]].children[0]
    return edits


def _prune_empty_controls(model, catalog) -> List[RepairEdit]:
    edits: List[RepairEdit] = []

    def prune(children: List[RawNode], parent_path: NodePath):
        # iterate backwards so removals keep the indices of earlier siblings valid
        for i in reversed(range(len(children))):
            child = children[i]
            path = parent_path + (i,)
            prune(child.children, path)
            if child.children:
                continue
            node_class, resolved, _ = classify_node(child, catalog)
            if node_class in {NodeClass.CONTROL, NodeClass.DECORATOR}:
                edits.append(
                    RepairEdit(RepairKind.PRUNE_EMPTY_CONTROL, path, resolved.type_name)
                )
                del children[i]

    for t, tree in enumerate(model.trees):
        edits_before = len(edits)
        prune(tree.nodes, (t,))
        # restore document order within each tree after the backwards traversal
        edits[edits_before:] = _postorder(edits[edits_before:])
    return edits


def _postorder(edits: List[RepairEdit]) -> List[RepairEdit]:
    """sort edits such that children precede parents and siblings keep their order"""

    def key(edit):
        # a path sorts after all paths it is a prefix of
        return tuple(edit.path) + (float("inf"),)

    return sorted(edits, key=key)


def repair(
    model: TreeModel, catalog: Mapping[str, PortSchema], *, promote_child: bool = None
) -> RepairOutcome:
    """remove the parts of a document that the linter rejects

    The passes `DropPort`, `DropNode`, `PromoteChild`, and `PruneEmptyControl` are
    applied in this order until an iteration produces no edit.

    Args:
        model (:class:`~btplan.trees.model.TreeModel`):
            The document, which is not modified
        catalog (:class:`~btplan.analysis.catalog.ActionCatalog`):
            The actions and conditions the robot offers
        promote_child (bool, optional):
            Whether unknown wrappers with a single child are replaced by that child.
            The default is taken from the configuration value `repair.promote_child`.

    Returns:
        :class:`RepairOutcome`

    Raises:
        :class:`NonConvergence`: if the fixpoint is not reached within the number of
        nodes plus one iterations
    """
    if promote_child is None:
        from .. import config

        promote_child = config["repair.promote_child"]
    logger = logging.getLogger(__name__)

    passes = [_drop_ports, _drop_nodes]
    if promote_child:
        passes.append(_promote_children)
    passes.append(_prune_empty_controls)

    repaired = model.copy()
    edits: List[RepairEdit] = []
    budget = model.count_nodes() + 1
    for iteration in range(budget):
        new_edits: List[RepairEdit] = []
        for repair_pass in passes:
            new_edits.extend(repair_pass(repaired, catalog))
        if not new_edits:
            break
        logger.debug(f"Iteration {iteration} applied {len(new_edits)} edits")
        edits.extend(new_edits)
    else:
        raise NonConvergence(f"Repair did not converge within {budget} iterations")

    diagnostics = []
    for t, tree in enumerate(repaired.trees):
        if not tree.nodes and model.trees[t].nodes:
            diagnostics.append(
                Diagnostic(
                    DiagnosticCode.EMPTY_TREE_AFTER_REPAIR,
                    Severity.WARNING,
                    f"Tree `{tree.id}` is empty after repair",
                    tree.source_span,
                    (t,),
                )
            )
    if edits:
        logger.info(f"Repair applied {len(edits)} edits")
    return RepairOutcome(repaired, edits, True, diagnostics)


def format_edits(edits: List[RepairEdit]) -> str:
    return "\n".join(str(edit) for edit in edits)


def render_diff(
    original: TreeModel,
    repaired: TreeModel,
    *,
    fromfile: str = "generated.xml",
    tofile: str = "repaired.xml",
) -> str:
    """unified diff between the canonical forms of two documents"""
    before = serialize(original).splitlines(keepends=True)
    after = serialize(repaired).splitlines(keepends=True)
    diff = difflib.unified_diff(before, after, fromfile=fromfile, tofile=tofile)
    return "".join(line if line.endswith("\n") else line + "\n" for line in diff)
