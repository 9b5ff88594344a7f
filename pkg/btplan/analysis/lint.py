"""
Static checks of behavior-tree documents against the dialect and an action catalog

A document is *syntactically correct* for a catalog if linting in strict mode reports
no errors. Warnings never affect this verdict.

.. autosummary::
   :nosignatures:

   Severity
   DiagnosticCode
   Diagnostic
   lint
   is_syntactically_correct
   count_errors
   format_diagnostics
   diagnostics_to_json
"""

from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Set

from ..trees.model import (
    AmbiguousMain,
    DanglingMain,
    NodePath,
    RawNode,
    SourceSpan,
    TreeModel,
)
from ..trees.nodes import NodeKind
from .catalog import ACTION, CONDITION, NodeClass, PortSchema, classify_node

ALLOWED_EXTRA_ELEMENTS = frozenset({"TreeNodesModel"})
""" frozenset: elements besides trees that may appear below the root element """

_logger = logging.getLogger(__name__)


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


class DiagnosticCode(str, enum.Enum):
    """kinds of findings reported by :func:`lint`"""

    # errors
    UNKNOWN_NODE_KIND = "UnknownNodeKind"
    UNKNOWN_ACTION = "UnknownAction"
    UNKNOWN_PORT = "UnknownPort"
    MISSING_REQUIRED_PORT = "MissingRequiredPort"
    INVALID_PORT_VALUE = "InvalidPortValue"
    DECORATOR_ARITY = "DecoratorArity"
    CONTROL_NO_CHILDREN = "ControlNoChildren"
    LEAF_WITH_CHILDREN = "LeafWithChildren"
    MISSING_NODE_ID = "MissingNodeId"
    UNRESOLVED_SUBTREE = "UnresolvedSubTree"
    RECURSIVE_SUBTREE = "RecursiveSubTree"
    AMBIGUOUS_MAIN = "AmbiguousMain"
    DANGLING_MAIN = "DanglingMain"
    DUPLICATE_TREE_ID = "DuplicateTreeId"
    TREE_ROOT_ARITY = "TreeRootArity"
    EMPTY_TREE = "EmptyTree"
    # warnings
    UNUSED_TREE = "UnusedTree"
    UNKNOWN_ATTRIBUTE_ON_CONTROL = "UnknownAttributeOnControl"
    UNKNOWN_ROOT_ELEMENT = "UnknownRootElement"
    KIND_MISMATCH = "KindMismatch"
    EMPTY_TREE_AFTER_REPAIR = "EmptyTreeAfterRepair"


@dataclass(frozen=True)
class Diagnostic:
    """a single finding of the linter"""

    code: DiagnosticCode
    severity: Severity
    message: str
    span: Optional[SourceSpan]
    """ tuple: line and column of the offending element, if known """
    path: NodePath
    """ tuple: `()` for the document, `(t,)` for tree `t`, and longer paths for nodes
    as used by :meth:`~btplan.trees.model.TreeModel.node_at` """

    @property
    def is_error(self) -> bool:
        return self.severity == Severity.ERROR

    def to_dict(self) -> Dict[str, Any]:
        line, column = self.span if self.span else (None, None)
        return {
            "code": self.code.value,
            "severity": self.severity.value,
            "message": self.message,
            "line": line,
            "column": column,
            "path": list(self.path),
        }

    def __str__(self) -> str:
        location = f"{self.span[0]}:{self.span[1]}" if self.span else "-"
        return f"{location} {self.severity.value} {self.code.value}: {self.message}"


class _Linter:
    """collects the diagnostics of a single document"""

    def __init__(self, model: TreeModel, catalog: Mapping[str, PortSchema], lenient):
        self.model = model
        self.catalog = catalog
        self.lenient = lenient
        self.diagnostics: List[Diagnostic] = []
        # subtree references of each tree: list of (referenced id, path, span)
        self.references: Dict[int, List[tuple]] = {}

    def add(self, code, path, span, message, severity=Severity.ERROR):
        self.diagnostics.append(Diagnostic(code, severity, message, span, tuple(path)))

    def run(self) -> List[Diagnostic]:
        model = self.model
        main_index: Optional[int] = None
        try:
            main_index = model.tree_index(model.select_main_tree())
        except AmbiguousMain as err:
            self.add(DiagnosticCode.AMBIGUOUS_MAIN, (), None, str(err))
        except DanglingMain as err:
            self.add(DiagnosticCode.DANGLING_MAIN, (), None, str(err))

        for element in model.extras:
            if element.element_name not in ALLOWED_EXTRA_ELEMENTS:
                self.add(
                    DiagnosticCode.UNKNOWN_ROOT_ELEMENT,
                    (),
                    element.source_span,
                    f"Element `{element.element_name}` is ignored",
                    Severity.WARNING,
                )

        seen: Set[str] = set()
        for t, tree in enumerate(model.trees):
            if tree.id in seen:
                self.add(
                    DiagnosticCode.DUPLICATE_TREE_ID,
                    (t,),
                    tree.source_span,
                    f"Tree `{tree.id}` is defined more than once",
                )
            seen.add(tree.id)

            if not tree.nodes:
                self.add(
                    DiagnosticCode.EMPTY_TREE,
                    (t,),
                    tree.source_span,
                    f"Tree `{tree.id}` has no root node",
                )
            elif len(tree.nodes) > 1:
                self.add(
                    DiagnosticCode.TREE_ROOT_ARITY,
                    (t,),
                    tree.source_span,
                    f"Tree `{tree.id}` has {len(tree.nodes)} root nodes",
                )

            self.references[t] = []
            for i, root in enumerate(tree.nodes):
                for path, node in root.iter_nodes((t, i)):
                    self.check_node(path, node)

        self.check_references(main_index)
        self.diagnostics.sort(key=lambda d: (d.path, d.code.value))
        return self.diagnostics

    def check_parameters(self, path, node, resolved, definition):
        """check the parameters of built-in nodes"""
        for name, value in resolved.parameters.items():
            if name not in definition.ports:
                if definition.kind in {NodeKind.CONTROL, NodeKind.DECORATOR}:
                    self.add(
                        DiagnosticCode.UNKNOWN_ATTRIBUTE_ON_CONTROL,
                        path,
                        node.source_span,
                        f"`{definition.name}` ignores attribute `{name}`",
                        Severity.WARNING,
                    )
                else:
                    self.add(
                        DiagnosticCode.UNKNOWN_PORT,
                        path,
                        node.source_span,
                        f"`{definition.name}` has no port `{name}`",
                    )
            elif name in definition.integer_ports and not _is_integer(value):
                self.add(
                    DiagnosticCode.INVALID_PORT_VALUE,
                    path,
                    node.source_span,
                    f"Port `{name}` of `{definition.name}` expects an integer, "
                    f"got `{value}`",
                )
        for name in sorted(definition.required - set(resolved.parameters)):
            self.add(
                DiagnosticCode.MISSING_REQUIRED_PORT,
                path,
                node.source_span,
                f"`{definition.name}` requires port `{name}`",
            )

    def check_node(self, path: NodePath, node: RawNode):
        span = node.source_span
        node_class, resolved, schema = classify_node(node, self.catalog)

        if resolved.generic is not None and resolved.type_name is None:
            self.add(
                DiagnosticCode.MISSING_NODE_ID,
                path,
                span,
                f"`{resolved.generic}` element lacks the `ID` attribute",
            )
            if resolved.kind == NodeKind.LEAF and node.children:
                self.add(
                    DiagnosticCode.LEAF_WITH_CHILDREN,
                    path,
                    span,
                    f"`{resolved.generic}` cannot have children",
                )
            return

        name = resolved.type_name
        definition = resolved.definition

        if node_class == NodeClass.CONTROL:
            if not node.children:
                self.add(
                    DiagnosticCode.CONTROL_NO_CHILDREN,
                    path,
                    span,
                    f"Control node `{name}` has no children",
                )
            self.check_parameters(path, node, resolved, definition)

        elif node_class == NodeClass.DECORATOR:
            if not node.children:
                self.add(
                    DiagnosticCode.CONTROL_NO_CHILDREN,
                    path,
                    span,
                    f"Decorator `{name}` has no child",
                )
            elif len(node.children) > 1:
                self.add(
                    DiagnosticCode.DECORATOR_ARITY,
                    path,
                    span,
                    f"Decorator `{name}` has {len(node.children)} children",
                )
            self.check_parameters(path, node, resolved, definition)

        elif node_class == NodeClass.BUILTIN_LEAF:
            self._check_leaf_children(path, node, name)
            self.check_parameters(path, node, resolved, definition)

        elif node_class == NodeClass.SUBTREE:
            self._check_leaf_children(path, node, name)
            tree_id = node.attributes.get("ID")
            if tree_id is None:
                self.add(
                    DiagnosticCode.MISSING_NODE_ID,
                    path,
                    span,
                    f"`{node.element_name}` lacks the `ID` attribute",
                )
            else:
                self.references[path[0]].append((tree_id, path, span))

        elif node_class == NodeClass.CATALOG_LEAF:
            assert schema is not None
            self._check_leaf_children(path, node, name)
            for port in resolved.parameters:
                if port not in schema.ports:
                    self.add(
                        DiagnosticCode.UNKNOWN_PORT,
                        path,
                        span,
                        f"`{name}` has no port `{port}`",
                    )
            for port in sorted(schema.required - set(resolved.parameters)):
                self.add(
                    DiagnosticCode.MISSING_REQUIRED_PORT,
                    path,
                    span,
                    f"`{name}` requires port `{port}`",
                )
            declared = {"Action": ACTION, "Condition": CONDITION}.get(
                resolved.generic or ""
            )
            if declared is not None and declared != schema.kind:
                self.add(
                    DiagnosticCode.KIND_MISMATCH,
                    path,
                    span,
                    f"`{name}` is a {schema.kind} but used as {declared}",
                    Severity.WARNING,
                )

        elif node_class == NodeClass.UNKNOWN_COMPOSITE:
            self.add(
                DiagnosticCode.UNKNOWN_NODE_KIND,
                path,
                span,
                f"Unknown node type `{name}`",
            )

        else:  # unknown leaf
            severity = Severity.WARNING if self.lenient else Severity.ERROR
            self.add(
                DiagnosticCode.UNKNOWN_ACTION,
                path,
                span,
                f"Action `{name}` is not in the catalog",
                severity,
            )

    def _check_leaf_children(self, path, node, name):
        if node.children:
            self.add(
                DiagnosticCode.LEAF_WITH_CHILDREN,
                path,
                node.source_span,
                f"`{name}` cannot have children",
            )

    def check_references(self, main_index: Optional[int]):
        """check subtree references for dangling ids, recursion and unused trees"""
        model = self.model
        for refs in self.references.values():
            for tree_id, path, span in refs:
                if not model.has_tree(tree_id):
                    self.add(
                        DiagnosticCode.UNRESOLVED_SUBTREE,
                        path,
                        span,
                        f"Referenced tree `{tree_id}` does not exist",
                    )

        # detect cycles with a depth-first search over all trees
        state: Dict[int, int] = {}  # 1 = on stack, 2 = done

        def visit(t: int):
            state[t] = 1
            for tree_id, path, span in self.references.get(t, []):
                if not model.has_tree(tree_id):
                    continue
                target = model.tree_index(tree_id)
                if state.get(target) == 1:
                    self.add(
                        DiagnosticCode.RECURSIVE_SUBTREE,
                        path,
                        span,
                        f"Reference to `{tree_id}` closes a cycle of subtrees",
                    )
                elif target not in state:
                    visit(target)
            state[t] = 2

        for t in range(len(model.trees)):
            if t not in state:
                visit(t)

        if main_index is None:
            return
        reachable = {main_index}
        stack = [main_index]
        while stack:
            t = stack.pop()
            for tree_id, _, _ in self.references.get(t, []):
                if model.has_tree(tree_id):
                    target = model.tree_index(tree_id)
                    if target not in reachable:
                        reachable.add(target)
                        stack.append(target)
        for t, tree in enumerate(model.trees):
            if t not in reachable:
                self.add(
                    DiagnosticCode.UNUSED_TREE,
                    (t,),
                    tree.source_span,
                    f"Tree `{tree.id}` is never referenced from the main tree",
                    Severity.WARNING,
                )


def _is_integer(value: str) -> bool:
    try:
        int(value.strip())
    except ValueError:
        return False
    return True


def lint(
    model: TreeModel, catalog: Mapping[str, PortSchema], *, lenient: bool = None
) -> List[Diagnostic]:
    """check a document for structural and catalog errors

    Args:
        model (:class:`~btplan.trees.model.TreeModel`):
            The parsed document
        catalog (:class:`~btplan.analysis.catalog.ActionCatalog`):
            The actions and conditions the robot offers
        lenient (bool, optional):
            Report leaves missing from the catalog as warnings. The default is taken
            from the configuration value `lint.lenient`.

    Returns:
        list: The diagnostics sorted by node path and code
    """
    if lenient is None:
        from .. import config

        lenient = config["lint.lenient"]

    diagnostics = _Linter(model, catalog, lenient).run()
    _logger.debug(f"Lint found {count_errors(diagnostics)} errors")
    return diagnostics


def count_errors(diagnostics: Sequence[Diagnostic]) -> int:
    return sum(1 for d in diagnostics if d.is_error)


def is_syntactically_correct(
    model: TreeModel, catalog: Mapping[str, PortSchema]
) -> bool:
    """whether strict linting reports no errors"""
    return count_errors(lint(model, catalog, lenient=False)) == 0


def format_diagnostics(diagnostics: Sequence[Diagnostic]) -> str:
    """render diagnostics as human-readable lines"""
    return "\n".join(str(d) for d in diagnostics)


def diagnostics_to_json(diagnostics: Sequence[Diagnostic]) -> str:
    """render diagnostics as a JSON report"""
    data = {
        "errors": count_errors(diagnostics),
        "warnings": sum(1 for d in diagnostics if not d.is_error),
        "diagnostics": [d.to_dict() for d in diagnostics],
    }
    return json.dumps(data, indent=2)
