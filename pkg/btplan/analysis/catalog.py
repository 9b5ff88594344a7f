"""
Action catalogs describing the leaves a robot offers

.. autosummary::
   :nosignatures:

   PortSchema
   ActionCatalog
   NodeClass
   classify_node
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple

from ..trees.model import RawNode
from ..trees.nodes import NodeKind, ResolvedNode, resolve_node

ACTION = "action"
CONDITION = "condition"


@dataclass(frozen=True)
class PortSchema:
    """ports of a single action or condition"""

    required: FrozenSet[str] = frozenset()
    optional: FrozenSet[str] = frozenset()
    kind: str = ACTION

    def __post_init__(self):
        # normalize iterables passed by callers
        object.__setattr__(self, "required", frozenset(self.required))
        object.__setattr__(self, "optional", frozenset(self.optional))
        overlap = self.required & self.optional
        if overlap:
            raise ValueError(
                f"Ports {sorted(overlap)} are declared required and optional"
            )
        if self.kind not in {ACTION, CONDITION}:
            raise ValueError(f"Unknown kind `{self.kind}`")

    @property
    def ports(self) -> FrozenSet[str]:
        """frozenset: all accepted ports"""
        return self.required | self.optional

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "required": sorted(self.required),
            "optional": sorted(self.optional),
        }


@dataclass(frozen=True)
class ActionCatalog(Mapping):
    """mapping of action and condition names to their port schemas"""

    entries: Dict[str, PortSchema] = field(default_factory=dict)

    def __getitem__(self, name: str) -> PortSchema:
        return self.entries[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ActionCatalog:
        """create a catalog from plain data

        Args:
            data (dict):
                Maps names to dictionaries with the optional keys `required`,
                `optional` (lists of port names), and `kind` (`action` or
                `condition`)
        """
        entries = {}
        for name, schema in data.items():
            schema = schema or {}
            if not isinstance(schema, Mapping):
                raise ValueError(f"Ports of `{name}` must be given as a mapping")
            entries[str(name)] = PortSchema(
                required=frozenset(schema.get("required", ())),
                optional=frozenset(schema.get("optional", ())),
                kind=schema.get("kind", ACTION),
            )
        return cls(entries)

    def to_dict(self) -> Dict[str, Any]:
        return {name: schema.to_dict() for name, schema in self.entries.items()}

    def action_names(self) -> Iterable[str]:
        return self.entries.keys()


class NodeClass(enum.Enum):
    """role of an element with respect to the dialect and a catalog"""

    CONTROL = "control"
    DECORATOR = "decorator"
    BUILTIN_LEAF = "builtin_leaf"
    SUBTREE = "subtree"
    CATALOG_LEAF = "catalog_leaf"
    UNKNOWN_LEAF = "unknown_leaf"
    UNKNOWN_COMPOSITE = "unknown_composite"


def classify_node(
    node: RawNode, catalog: Mapping[str, PortSchema]
) -> Tuple[NodeClass, ResolvedNode, Optional[PortSchema]]:
    """determine how an element is interpreted

    Built-in node types take precedence over catalog entries of the same name.
    Elements that are neither built in nor in the catalog are unknown leaves when they
    have no children and unknown composites otherwise.

    Args:
        node (:class:`~btplan.trees.model.RawNode`): The element
        catalog (:class:`ActionCatalog`): The available actions

    Returns:
        tuple: the class, the resolved node, and the port schema for catalog leaves
    """
    resolved = resolve_node(node)
    definition = resolved.definition
    if definition is not None:
        if definition.kind == NodeKind.CONTROL:
            return NodeClass.CONTROL, resolved, None
        elif definition.kind == NodeKind.DECORATOR:
            return NodeClass.DECORATOR, resolved, None
        elif definition.kind == NodeKind.SUBTREE:
            return NodeClass.SUBTREE, resolved, None
        return NodeClass.BUILTIN_LEAF, resolved, None

    generic_kind = resolved.kind
    if generic_kind in {None, NodeKind.LEAF} and resolved.type_name in catalog:
        return NodeClass.CATALOG_LEAF, resolved, catalog[resolved.type_name]
    if node.children or generic_kind in {NodeKind.CONTROL, NodeKind.DECORATOR}:
        return NodeClass.UNKNOWN_COMPOSITE, resolved, None
    return NodeClass.UNKNOWN_LEAF, resolved, None
