"""
Deciding whether a behavior tree solves a task

.. autosummary::
   :nosignatures:

   FailureClass
   Verdict
   validate
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..analysis.lint import lint
from ..engine.builder import BuildError, build_tree
from ..engine.hosts import HostScriptError
from ..engine.runner import run_to_completion
from ..engine.status import NodeStatus
from ..engine.trace import ExecutionTrace
from ..trees.model import TreeModel
from .environment import EnvironmentHost
from .matching import find_mismatches
from .spec import TaskSpec


class FailureClass(str, enum.Enum):
    """stage at which a tree failed, listed in decreasing priority"""

    LINT = "lint"
    BUILD = "build"
    RUNTIME = "runtime"
    TRUNCATED = "truncated"
    ROOT_FAILURE = "root_failure"
    FORBIDDEN = "forbidden"
    MISSING = "missing"
    ORDER = "order"
    PRECEDENCE = "precedence"


_PRIORITY = list(FailureClass)


@dataclass
class Verdict:
    passed: bool
    reasons: List[str] = field(default_factory=list)
    trace: ExecutionTrace = field(default_factory=ExecutionTrace)
    truncated: bool = False
    failure_class: Optional[FailureClass] = None
    root_status: Optional[NodeStatus] = None
    ticks_used: int = 0

    def to_dict(self) -> Dict[str, Any]:
        failure_class = self.failure_class
        root_status = self.root_status
        return {
            "passed": self.passed,
            "reasons": list(self.reasons),
            "failure_class": None if failure_class is None else failure_class.value,
            "root_status": None if root_status is None else root_status.value,
            "truncated": self.truncated,
            "ticks_used": self.ticks_used,
            "trace": self.trace.to_list(),
        }


def _failed(failure_class: FailureClass, reasons: List[str], **kwargs) -> Verdict:
    return Verdict(False, reasons, failure_class=failure_class, **kwargs)


def validate(model: TreeModel, spec: TaskSpec) -> Verdict:
    """execute a tree in the environment of a task and check the resulting trace

    The tree is linted strictly against the task catalog, built, run for at most
    `spec.max_ticks` ticks, and the trace is matched against the success pattern.
    Every failure is reported in the verdict; no exception is raised.

    Args:
        model (:class:`~btplan.trees.model.TreeModel`):
            The document holding the tree
        spec (:class:`~btplan.tasks.spec.TaskSpec`):
            The task

    Returns:
        :class:`Verdict`
    """
    logger = logging.getLogger(__name__)
    catalog = spec.action_catalog

    errors = [d for d in lint(model, catalog, lenient=False) if d.is_error]
    if errors:
        logger.debug(f"Task {spec.id}: {len(errors)} lint errors")
        return _failed(FailureClass.LINT, [str(d) for d in errors])

    host = EnvironmentHost(catalog, spec.environment)
    try:
        tree = build_tree(model, host)
    except BuildError as err:
        return _failed(FailureClass.BUILD, [str(err)])

    try:
        result = run_to_completion(tree, spec.max_ticks)
    except HostScriptError as err:
        return _failed(FailureClass.RUNTIME, [str(err)], trace=tree.trace)

    classes: List[FailureClass] = []
    reasons: List[str] = []
    if result.truncated:
        classes.append(FailureClass.TRUNCATED)
        reasons.append(f"Root still running after {result.ticks_used} ticks")
    elif spec.success.require_root_success and result.status != NodeStatus.SUCCESS:
        classes.append(FailureClass.ROOT_FAILURE)
        reasons.append(f"Root finished with {result.status.value}")

    for mismatch in find_mismatches(result.trace, spec.success):
        classes.append(FailureClass(mismatch.kind.value))
        reasons.append(str(mismatch))

    failure_class = min(classes, key=_PRIORITY.index) if classes else None
    verdict = Verdict(
        passed=not reasons,
        reasons=reasons,
        trace=result.trace,
        truncated=result.truncated,
        failure_class=failure_class,
        root_status=result.status,
        ticks_used=result.ticks_used,
    )
    logger.debug(f"Task {spec.id}: passed={verdict.passed}")
    return verdict

