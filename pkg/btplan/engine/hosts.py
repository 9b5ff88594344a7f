"""
Action hosts executing the leaves of a tree

A host offers an action catalog and opens one session per executed tree. Sessions
count invocations per action so that scripted behaviors can depend on how often an
action was called before.

.. autosummary::
   :nosignatures:

   Outcome
   HostScriptError
   HostSession
   ActionHost
   ScriptedHost
"""

from __future__ import annotations

import collections
from abc import ABCMeta, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Tuple, Union

from ..analysis.catalog import ActionCatalog
from .status import NodeStatus


class HostScriptError(RuntimeError):
    """a host answered an invocation in a way the engine cannot accept"""


@dataclass(frozen=True)
class Outcome:
    """answer of a host to a single invocation"""

    status: NodeStatus
    outputs: Dict[str, str] = field(default_factory=dict)
    """ dict: values for output ports, written to the blackboard when the port of the
    node holds a reference `{key}` """


BehaviorResult = Union[NodeStatus, Outcome]


class HostSession(metaclass=ABCMeta):
    """state of a host while it serves a single tree"""

    def __init__(self):
        self.invocations: Dict[str, int] = collections.Counter()

    def invoke(self, action: str, ports: Mapping[str, str]) -> Tuple[int, Outcome]:
        """execute an action

        Args:
            action (str): The name of the action
            ports (dict): The port values after resolving blackboard references

        Returns:
            tuple: the zero-based invocation index of this action and the outcome
        """
        index = self.invocations[action]
        self.invocations[action] += 1
        outcome = self.respond(action, dict(ports), index)
        if isinstance(outcome, NodeStatus):
            outcome = Outcome(outcome)
        if (
            not isinstance(outcome, Outcome)
            or not isinstance(outcome.status, NodeStatus)
            or outcome.status == NodeStatus.IDLE
        ):
            raise HostScriptError(f"`{action}` returned {outcome!r}")
        return index, outcome

    @abstractmethod
    def respond(
        self, action: str, ports: Dict[str, str], invocation: int
    ) -> BehaviorResult:
        pass


class ActionHost(metaclass=ABCMeta):
    """base class for objects providing actions to executed trees"""

    def __init__(self, catalog: ActionCatalog):
        self.catalog = catalog

    @abstractmethod
    def open_session(self) -> HostSession:
        """create the state used while executing one tree"""


class _FunctionSession(HostSession):
    def __init__(self, behavior):
        super().__init__()
        self.behavior = behavior

    def respond(self, action, ports, invocation):
        return self.behavior(action, ports, invocation)


def _always_succeed(action, ports, invocation) -> NodeStatus:
    return NodeStatus.SUCCESS


class ScriptedHost(ActionHost):
    """host whose actions are answered by a python function

    Example:
        A host whose `MoveTo` action fails twice before succeeding:

        .. code-block:: python

            def behavior(action, ports, invocation):
                return NodeStatus.SUCCESS if invocation >= 2 else NodeStatus.FAILURE

            host = ScriptedHost(catalog, behavior)
    """

    def __init__(
        self,
        catalog: ActionCatalog,
        behavior: Callable[[str, Dict[str, str], int], BehaviorResult] = None,
    ):
        """
        Args:
            catalog (:class:`~btplan.analysis.catalog.ActionCatalog`):
                The actions offered by the host
            behavior (callable, optional):
                Function called with the action name, the port values and the
                invocation index. The default lets every action succeed.
        """
        super().__init__(catalog)
        self.behavior = _always_succeed if behavior is None else behavior

    def open_session(self) -> HostSession:
        return _FunctionSession(self.behavior)
