"""
Deterministic tick engine executing behavior trees against action hosts

.. autosummary::
   :nosignatures:

   ~builder.build_tree
   ~runner.tick_once
   ~runner.run_to_completion
   ~runner.ExecutableTree
   ~hosts.ScriptedHost
   ~status.NodeStatus
   ~trace.ExecutionTrace
"""

from .blackboard import Blackboard
from .builder import (
    BuildError,
    EmptyControl,
    InvalidTree,
    MissingRequiredPort,
    UnknownAction,
    UnresolvedSubTree,
    build_tree,
)
from .hosts import ActionHost, HostScriptError, HostSession, Outcome, ScriptedHost
from .runner import ExecutableTree, RunResult, run_to_completion, tick_once
from .status import NodeStatus
from .trace import ExecutionTrace, TraceEvent
