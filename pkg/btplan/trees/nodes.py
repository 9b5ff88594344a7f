"""
Node kinds of the behavior-tree dialect

Defines which element names denote controls, decorators, built-in leaves and subtree
references, which parameters they accept, and how the generic forms (for instance
`<Action ID="MoveTo"/>`) are resolved to the node type they describe.

.. autosummary::
   :nosignatures:

   NodeKind
   NodeDefinition
   ResolvedNode
   resolve_node
   get_definition
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Optional

from .model import RawNode


class NodeKind(str, enum.Enum):
    """structural role of a node"""

    CONTROL = "control"
    DECORATOR = "decorator"
    LEAF = "leaf"
    SUBTREE = "subtree"


@dataclass(frozen=True)
class NodeDefinition:
    """description of a node type known to the dialect"""

    name: str
    kind: NodeKind
    ports: FrozenSet[str] = frozenset()
    required: FrozenSet[str] = frozenset()
    integer_ports: FrozenSet[str] = frozenset()
    aliases: FrozenSet[str] = field(default_factory=frozenset)

    @property
    def is_composite(self) -> bool:
        """bool: whether the node routes ticks to children"""
        return self.kind in {NodeKind.CONTROL, NodeKind.DECORATOR}


def _defn(name, kind, ports=(), required=(), integer=None, aliases=()):
    ports = frozenset(ports) | frozenset(required)
    integer = ports if integer is None else frozenset(integer)
    return NodeDefinition(
        name, kind, ports, frozenset(required), integer, frozenset(aliases)
    )


_PARALLEL_PORTS = ("success_count", "failure_count", "success_threshold")
_PARALLEL_PORTS += ("failure_threshold",)

_DEFINITIONS = [
    # controls
    _defn("Sequence", NodeKind.CONTROL),
    _defn("ReactiveSequence", NodeKind.CONTROL),
    _defn("Fallback", NodeKind.CONTROL),
    _defn("ReactiveFallback", NodeKind.CONTROL),
    _defn("Parallel", NodeKind.CONTROL, ports=_PARALLEL_PORTS),
    # decorators
    _defn("Inverter", NodeKind.DECORATOR),
    _defn("ForceSuccess", NodeKind.DECORATOR),
    _defn("ForceFailure", NodeKind.DECORATOR),
    _defn("KeepRunningUntilFailure", NodeKind.DECORATOR),
    _defn(
        "RetryUntilSuccessful",
        NodeKind.DECORATOR,
        required=["num_attempts"],
        aliases=["RetryUntilSuccesful"],
    ),
    _defn("Repeat", NodeKind.DECORATOR, required=["num_cycles"]),
    _defn("Timeout", NodeKind.DECORATOR, required=["msec"]),
    # built-in leaves
    _defn("AlwaysSuccess", NodeKind.LEAF),
    _defn("AlwaysFailure", NodeKind.LEAF),
    _defn("SetBlackboard", NodeKind.LEAF, required=["value", "output_key"], integer=[]),
    # references to other trees
    _defn("SubTree", NodeKind.SUBTREE, aliases=["SubTreePlus"], integer=[]),
]

BUILTIN_NODES: Dict[str, NodeDefinition] = {}
for _definition in _DEFINITIONS:
    BUILTIN_NODES[_definition.name] = _definition
    for _alias in _definition.aliases:
        BUILTIN_NODES[_alias] = _definition

GENERIC_FORMS: Dict[str, NodeKind] = {
    "Action": NodeKind.LEAF,
    "Condition": NodeKind.LEAF,
    "Control": NodeKind.CONTROL,
    "Decorator": NodeKind.DECORATOR,
}
""" dict: element names whose node type is given by the `ID` attribute """

COMMON_ATTRIBUTES = frozenset({"name"})
""" frozenset: attributes every node may carry without affecting execution """

SUBTREE_RESERVED = frozenset({"ID", "name", "_autoremap", "__autoremap"})
""" frozenset: attributes of subtree references that are not port remappings """


def get_definition(type_name: Optional[str]) -> Optional[NodeDefinition]:
    """return the built-in definition of a node type, if there is one"""
    if type_name is None:
        return None
    return BUILTIN_NODES.get(type_name)


@dataclass(frozen=True)
class ResolvedNode:
    """the node type an element denotes together with its parameters"""

    type_name: Optional[str]
    """ str: the node type, e.g. `Sequence` or `MoveTo`; `None` if the generic form
    lacks an `ID` """
    generic: Optional[str]
    """ str: the generic element name (`Action`, ...) if a generic form was used """
    definition: Optional[NodeDefinition]
    """ :class:`NodeDefinition`: set for node types built into the dialect """
    parameters: Dict[str, str]
    """ dict: the attributes that are parameters (ports) of the node """

    @property
    def kind(self) -> Optional[NodeKind]:
        if self.definition is not None:
            return self.definition.kind
        if self.generic is not None:
            return GENERIC_FORMS[self.generic]
        return None

    @property
    def is_condition(self) -> bool:
        return self.generic == "Condition"


def resolve_node(node: RawNode) -> ResolvedNode:
    """determine the node type and the parameters of an element

    Args:
        node (:class:`~btplan.trees.model.RawNode`): The element

    Returns:
        :class:`ResolvedNode`
    """
    attributes = node.attributes
    if node.element_name in GENERIC_FORMS:
        generic: Optional[str] = node.element_name
        type_name = attributes.get("ID")
        definition = get_definition(type_name)
        generic_kind = GENERIC_FORMS[node.element_name]
        if definition is not None and definition.kind != generic_kind:
            # e.g. `<Action ID="Sequence"/>` does not denote a control node
            definition = None
        skip = COMMON_ATTRIBUTES | {"ID"}
    else:
        generic = None
        type_name = node.element_name
        definition = get_definition(type_name)
        if definition is not None and definition.kind == NodeKind.SUBTREE:
            skip = SUBTREE_RESERVED
        else:
            skip = COMMON_ATTRIBUTES

    parameters = {k: v for k, v in attributes.items() if k not in skip}
    return ResolvedNode(type_name, generic, definition, parameters)
