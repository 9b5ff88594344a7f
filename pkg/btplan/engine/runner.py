"""
Running executable trees

.. autosummary::
   :nosignatures:

   ExecutableTree
   RunResult
   tick_once
   run_to_completion
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

from .blackboard import Blackboard
from .hosts import HostSession
from .nodes import TreeNode
from .status import NodeStatus
from .trace import ExecutionTrace, TraceEvent


class ExecutableTree:
    """a built tree together with its blackboard, host session and trace

    Instances are ticked from a single thread. Distinct instances are independent.
    """

    def __init__(
        self,
        root: TreeNode,
        blackboard: Blackboard,
        session: HostSession,
        *,
        main_tree_id: str = None,
    ):
        self.root = root
        self.blackboard = blackboard
        self.session = session
        self.main_tree_id = main_tree_id
        self.nodes: List[TreeNode] = list(root.iter_nodes())
        self.tick_count = 0
        self.trace = ExecutionTrace()
        self._logger = logging.getLogger(self.__class__.__name__)

    @property
    def node_table(self) -> Dict[int, Tuple[str, str, Dict[str, str], List[int]]]:
        """dict: kind, type, parameters and child ids of every node by id"""
        return {
            node.node_id: (
                node.kind,
                node.name,
                dict(node.parameters),
                [child.node_id for child in node.children],
            )
            for node in self.nodes
        }

    def __len__(self) -> int:
        return len(self.nodes)

    def record(self, node: TreeNode, status: NodeStatus) -> None:
        """append the result of ticking `node` to the trace"""
        event = TraceEvent(
            tick=self.tick_count,
            node_id=node.node_id,
            kind=node.kind,
            name=node.name,
            status=status,
            ports=dict(node.last_ports),
            invocation=node.last_invocation,
        )
        self.trace.append(event)

    def tick(self) -> NodeStatus:
        """propagate one tick from the root"""
        self.tick_count += 1
        status = self.root.tick(self)
        self._logger.debug(f"Tick {self.tick_count} returned {status.value}")
        return status


@dataclass
class RunResult:
    status: NodeStatus
    trace: ExecutionTrace
    ticks_used: int
    truncated: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "ticks_used": self.ticks_used,
            "truncated": self.truncated,
            "trace": self.trace.to_list(),
        }


def tick_once(tree: ExecutableTree) -> NodeStatus:
    """tick the root of a tree once

    Args:
        tree (:class:`ExecutableTree`): The tree

    Returns:
        :class:`~btplan.engine.status.NodeStatus`: the status of the root
    """
    return tree.tick()


def run_to_completion(tree: ExecutableTree, max_ticks: int = None) -> RunResult:
    """tick a tree until the root finishes or the tick budget is exhausted

    Args:
        tree (:class:`ExecutableTree`):
            The tree
        max_ticks (int, optional):
            Maximal number of root ticks. The default is taken from the configuration
            value `engine.max_ticks`.

    Returns:
        :class:`RunResult`: the result, which is marked as truncated when the root
        was still running after the last tick
    """
    if max_ticks is None:
        from .. import config

        max_ticks = config["engine.max_ticks"]
    if max_ticks < 1:
        raise ValueError("At least one tick is required")

    status = NodeStatus.RUNNING
    ticks = 0
    while ticks < max_ticks:
        status = tick_once(tree)
        ticks += 1
        if status.is_terminal:
            break

    truncated = status == NodeStatus.RUNNING
    if truncated:
        tree.root.halt()
        logging.getLogger(__name__).info(f"Run truncated after {ticks} ticks")
    return RunResult(status, tree.trace, ticks, truncated)
