"""
Records of executed trees

.. autosummary::
   :nosignatures:

   TraceEvent
   ExecutionTrace
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterator, List, Optional

from .status import NodeStatus


@dataclass(frozen=True)
class TraceEvent:
    """the result of ticking a single node once"""

    tick: int
    node_id: int
    kind: str
    """ str: `control`, `decorator`, `leaf`, `subtree`, `action`, or `condition` """
    name: str
    """ str: the node type, e.g. `Sequence` or `MoveTo` """
    status: NodeStatus
    ports: Dict[str, str] = field(default_factory=dict)
    invocation: Optional[int] = None
    """ int: zero-based count of earlier invocations of the same action """

    @property
    def action(self) -> Optional[str]:
        """str: the action name for events of action and condition leaves"""
        if self.kind in {"action", "condition"}:
            return self.name
        return None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["status"] = self.status.value
        return data

    def __str__(self) -> str:
        ports = " ".join(f'{k}="{v}"' for k, v in self.ports.items())
        text = f"[{self.tick}] #{self.node_id} {self.name}"
        if ports:
            text += f" {ports}"
        return f"{text} -> {self.status.value}"


class ExecutionTrace:
    """ordered list of :class:`TraceEvent` with non-decreasing tick indices"""

    def __init__(self, events: List[TraceEvent] = None):
        self.events: List[TraceEvent] = []
        for event in events or []:
            self.append(event)

    def append(self, event: TraceEvent) -> None:
        if self.events and event.tick < self.events[-1].tick:
            raise ValueError("Events must be appended in tick order")
        self.events.append(event)

    def __iter__(self) -> Iterator[TraceEvent]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def __getitem__(self, index):
        return self.events[index]

    def __eq__(self, other):
        if not isinstance(other, ExecutionTrace):
            return NotImplemented
        return self.events == other.events

    def action_events(self, *, halts: bool = False) -> List[TraceEvent]:
        """the events of action and condition leaves

        Args:
            halts (bool): Whether the `IDLE` events of halted leaves are included

        Returns:
            list of :class:`TraceEvent`
        """
        return [
            event
            for event in self.events
            if event.action is not None
            and (halts or event.status != NodeStatus.IDLE)
        ]

    def to_list(self) -> List[Dict[str, Any]]:
        return [event.to_dict() for event in self.events]

    def format(self, *, actions_only: bool = True) -> str:
        """human-readable rendering, one event per line"""
        events = self.action_events() if actions_only else self.events
        return "\n".join(str(event) for event in events)
