"""
Executable nodes of behavior trees

Node classes of the dialect register themselves under their element name, so the
builder can create them with :meth:`TreeNode.from_name`. Leaves provided by an action
host are represented by :class:`ActionNode` and :class:`ConditionNode`.

.. autosummary::
   :nosignatures:

   TreeNode
   SequenceNode
   ReactiveSequenceNode
   FallbackNode
   ReactiveFallbackNode
   ParallelNode
   InverterNode
   ForceSuccessNode
   ForceFailureNode
   RetryUntilSuccessfulNode
   RepeatNode
   KeepRunningUntilFailureNode
   TimeoutNode
   AlwaysSuccessNode
   AlwaysFailureNode
   SetBlackboardNode
   SubTreeNode
   ActionNode
   ConditionNode
"""

from __future__ import annotations

import logging
from abc import ABCMeta, abstractmethod
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple, Type

from ..tools.misc import classproperty
from .blackboard import Blackboard, parse_reference
from .hosts import HostScriptError, Outcome
from .status import NodeStatus

if TYPE_CHECKING:
    from .runner import ExecutableTree  # @UnusedImport

SUCCESS = NodeStatus.SUCCESS
FAILURE = NodeStatus.FAILURE
RUNNING = NodeStatus.RUNNING


class TreeNode(metaclass=ABCMeta):
    """base class for all executable nodes"""

    _subclasses: Dict[str, Type[TreeNode]] = {}  # node classes of the dialect

    type_name: Optional[str] = None
    """ str: the element name under which the class is registered """
    aliases: Tuple[str, ...] = ()
    kind: str = "leaf"

    def __init__(
        self,
        node_id: int,
        parameters: Dict[str, str],
        blackboard: Blackboard,
        children: Sequence[TreeNode] = (),
        *,
        name: str = None,
    ):
        """
        Args:
            node_id (int):
                Position of the node in a preorder traversal of the executed tree
            parameters (dict):
                The ports of the node as given in the document
            blackboard (:class:`~btplan.engine.blackboard.Blackboard`):
                The scope used to resolve port references
            children (list):
                The child nodes
            name (str, optional):
                The node type; defaults to the registered type name
        """
        self.node_id = node_id
        self.parameters = dict(parameters)
        self.blackboard = blackboard
        self.children: List[TreeNode] = list(children)
        self.name = name or self.type_name or self.__class__.__name__
        self.status: Optional[NodeStatus] = None
        self.last_ports: Dict[str, str] = {}
        self.last_invocation: Optional[int] = None
        self._tree: Optional[ExecutableTree] = None
        self._logger = logging.getLogger(self.__class__.__name__)

    def __init_subclass__(cls, **kwargs):  # @NoSelf
        """register all node types of the dialect"""
        super().__init_subclass__(**kwargs)
        for name in (cls.type_name,) + tuple(cls.aliases):
            if name:
                cls._subclasses[name] = cls

    @classmethod
    def from_name(cls, type_name: str, *args, **kwargs) -> TreeNode:
        """create a node of the dialect based on its element name

        Args:
            type_name (str): The element name, e.g. `Sequence`
            *args, **kwargs: Arguments for the constructor of the node

        Returns:
            An instance of a subclass of :class:`TreeNode`
        """
        try:
            node_class = cls._subclasses[type_name]
        except KeyError:
            names = ", ".join(sorted(cls._subclasses))
            raise ValueError(
                f"Unknown node type `{type_name}`. Registered types are {names}"
            ) from None
        return node_class(*args, **kwargs)

    @classproperty
    def registered_nodes(cls) -> List[str]:  # @NoSelf
        """list of str: the names of the registered node types"""
        return sorted(cls._subclasses.keys())

    def tick(self, tree: ExecutableTree) -> NodeStatus:
        """tick the node once and record the result in the trace of `tree`"""
        self._tree = tree
        status = self._tick(tree)
        self.status = status
        tree.record(self, status)
        return status

    @abstractmethod
    def _tick(self, tree: ExecutableTree) -> NodeStatus:
        pass

    def reset_state(self) -> None:
        """forget progress kept between ticks"""

    def halt(self) -> None:
        """stop the node and all its descendants

        Nodes that were running record an `IDLE` event at the current tick.
        """
        for child in self.children:
            child.halt()
        if self.status == RUNNING and self._tree is not None:
            self._tree.record(self, NodeStatus.IDLE)
        self.reset_state()
        self.status = None

    def halt_children(self, start: int = 0) -> None:
        for child in self.children[start:]:
            child.halt()

    def iter_nodes(self):
        """iterate over this node and its descendants in preorder"""
        yield self
        for child in self.children:
            yield from child.iter_nodes()

    def __repr__(self):
        return f"{self.__class__.__name__}(node_id={self.node_id}, name={self.name!r})"


class ControlNode(TreeNode):
    kind = "control"


class _MemoryControl(ControlNode):
    """control node that resumes at the child that was running"""

    continue_on: NodeStatus

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.current = 0

    def reset_state(self):
        self.current = 0

    def _tick(self, tree):
        while self.current < len(self.children):
            status = self.children[self.current].tick(tree)
            if status == RUNNING:
                return RUNNING
            if status != self.continue_on:
                self.halt_children()
                self.current = 0
                return status
            self.current += 1
        self.halt_children()
        self.current = 0
        return self.continue_on


class SequenceNode(_MemoryControl):
    """ticks children in order until one fails"""

    type_name = "Sequence"
    continue_on = SUCCESS


class FallbackNode(_MemoryControl):
    """ticks children in order until one succeeds"""

    type_name = "Fallback"
    continue_on = FAILURE


class _ReactiveControl(ControlNode):
    """control node that starts from the first child at every tick"""

    continue_on: NodeStatus

    def _tick(self, tree):
        for i, child in enumerate(self.children):
            status = child.tick(tree)
            if status == RUNNING:
                # halt children that were running before but are skipped now
                for j, other in enumerate(self.children):
                    if j != i and other.status == RUNNING:
                        other.halt()
                return RUNNING
            if status != self.continue_on:
                self.halt_children()
                return status
        self.halt_children()
        return self.continue_on


class ReactiveSequenceNode(_ReactiveControl):
    type_name = "ReactiveSequence"
    continue_on = SUCCESS


class ReactiveFallbackNode(_ReactiveControl):
    type_name = "ReactiveFallback"
    continue_on = FAILURE


class ParallelNode(ControlNode):
    """ticks all children and counts their results

    Succeeds once `success_count` children succeeded (default: all) and fails once
    `failure_count` children failed (default: one) or success became impossible.
    Negative thresholds count from the number of children, so `-1` means all.
    """

    type_name = "Parallel"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        num = len(self.children)
        success = self.parameters.get("success_count")
        if success is None:
            success = self.parameters.get("success_threshold", "-1")
        failure = self.parameters.get("failure_count")
        if failure is None:
            failure = self.parameters.get("failure_threshold", "1")
        self.success_threshold = self._threshold(int(success), num)
        self.failure_threshold = self._threshold(int(failure), num)
        self.results: Dict[int, NodeStatus] = {}

    @staticmethod
    def _threshold(value: int, num: int) -> int:
        return num + value + 1 if value < 0 else value

    def reset_state(self):
        self.results = {}

    def _finish(self, status: NodeStatus) -> NodeStatus:
        self.halt_children()
        self.results = {}
        return status

    def _tick(self, tree):
        num = len(self.children)
        for i, child in enumerate(self.children):
            if i in self.results:
                continue  # finished children are not ticked again
            status = child.tick(tree)
            if status.is_terminal:
                self.results[i] = status

            successes = sum(s == SUCCESS for s in self.results.values())
            failures = sum(s == FAILURE for s in self.results.values())
            if successes >= self.success_threshold:
                return self._finish(SUCCESS)
            if failures >= self.failure_threshold or num - failures < (
                self.success_threshold
            ):
                return self._finish(FAILURE)
        return RUNNING


class DecoratorNode(TreeNode):
    kind = "decorator"

    @property
    def child(self) -> TreeNode:
        return self.children[0]


class InverterNode(DecoratorNode):
    type_name = "Inverter"

    def _tick(self, tree):
        return self.child.tick(tree).inverted()


class ForceSuccessNode(DecoratorNode):
    type_name = "ForceSuccess"

    def _tick(self, tree):
        status = self.child.tick(tree)
        return RUNNING if status == RUNNING else SUCCESS


class ForceFailureNode(DecoratorNode):
    type_name = "ForceFailure"

    def _tick(self, tree):
        status = self.child.tick(tree)
        return RUNNING if status == RUNNING else FAILURE


class RetryUntilSuccessfulNode(DecoratorNode):
    """repeats a failing child up to `num_attempts` times

    Finite attempts are used up within a single tick. With `num_attempts="-1"` the
    child is retried indefinitely, one attempt per tick.
    """

    type_name = "RetryUntilSuccessful"
    aliases = ("RetryUntilSuccesful",)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.max_attempts = int(self.parameters["num_attempts"])
        self.attempts = 0

    def reset_state(self):
        self.attempts = 0

    def _tick(self, tree):
        while self.max_attempts < 0 or self.attempts < self.max_attempts:
            status = self.child.tick(tree)
            if status == RUNNING:
                return RUNNING
            self.child.halt()
            if status == SUCCESS:
                self.attempts = 0
                return SUCCESS
            self.attempts += 1
            self._logger.debug(f"Attempt {self.attempts} of node {self.node_id} failed")
            if self.max_attempts < 0:
                return RUNNING
        self.attempts = 0
        return FAILURE


class RepeatNode(DecoratorNode):
    """repeats a succeeding child `num_cycles` times

    Negative values repeat indefinitely, one cycle per tick.
    """

    type_name = "Repeat"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.max_cycles = int(self.parameters["num_cycles"])
        self.cycles = 0

    def reset_state(self):
        self.cycles = 0

    def _tick(self, tree):
        while self.max_cycles < 0 or self.cycles < self.max_cycles:
            status = self.child.tick(tree)
            if status == RUNNING:
                return RUNNING
            self.child.halt()
            if status == FAILURE:
                self.cycles = 0
                return FAILURE
            self.cycles += 1
            if self.max_cycles < 0:
                return RUNNING
        self.cycles = 0
        return SUCCESS


class KeepRunningUntilFailureNode(DecoratorNode):
    type_name = "KeepRunningUntilFailure"

    def _tick(self, tree):
        status = self.child.tick(tree)
        if status == SUCCESS:
            self.child.halt()
            return RUNNING
        return status


class TimeoutNode(DecoratorNode):
    """fails when the child keeps running for more than `msec` ticks

    The duration is measured in ticks of the tree, not in wall-clock time.
    """

    type_name = "Timeout"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.budget = int(self.parameters["msec"])
        self.elapsed = 0

    def reset_state(self):
        self.elapsed = 0

    def _tick(self, tree):
        self.elapsed += 1
        if self.elapsed > self.budget:
            self.halt_children()
            self.elapsed = 0
            return FAILURE
        status = self.child.tick(tree)
        if status.is_terminal:
            self.elapsed = 0
        return status


class LeafNode(TreeNode):
    kind = "leaf"


class AlwaysSuccessNode(LeafNode):
    type_name = "AlwaysSuccess"

    def _tick(self, tree):
        return SUCCESS


class AlwaysFailureNode(LeafNode):
    type_name = "AlwaysFailure"

    def _tick(self, tree):
        return FAILURE


class SetBlackboardNode(LeafNode):
    """stores `value` under the key given by `output_key`"""

    type_name = "SetBlackboard"

    def _tick(self, tree):
        output_key = self.parameters["output_key"]
        key = parse_reference(output_key) or output_key.strip()
        value = self.blackboard.resolve(self.parameters["value"])
        self.blackboard.set(key, value)
        self.last_ports = {"value": value, "output_key": key}
        return SUCCESS


class SubTreeNode(TreeNode):
    """executes the root of a referenced tree in its own blackboard scope"""

    type_name = "SubTree"
    aliases = ("SubTreePlus",)
    kind = "subtree"
    tree_id: Optional[str] = None

    def _tick(self, tree):
        return self.children[0].tick(tree)


class ActionNode(TreeNode):
    """a leaf executed by the action host"""

    kind = "action"

    def _check(self, outcome: Outcome) -> None:
        """validate the answer of the host"""

    def _tick(self, tree):
        ports = {k: self.blackboard.resolve(v) for k, v in self.parameters.items()}
        index, outcome = tree.session.invoke(self.name, ports)
        self.last_ports = ports
        self.last_invocation = index
        self._check(outcome)
        for port, value in outcome.outputs.items():
            key = parse_reference(self.parameters.get(port, ""))
            if key is None:
                self._logger.debug(f"Output `{port}` of `{self.name}` is discarded")
            else:
                self.blackboard.set(key, value)
        return outcome.status


class ConditionNode(ActionNode):
    """a leaf executed by the action host that never keeps running"""

    kind = "condition"

    def _check(self, outcome: Outcome) -> None:
        if outcome.status == RUNNING:
            raise HostScriptError(f"Condition `{self.name}` returned RUNNING")
