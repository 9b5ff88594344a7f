"""
Matching execution traces against task patterns

Only events of action and condition leaves take part in matching. Ordered events are
matched as a subsequence, so unrelated actions may be interleaved.

.. autosummary::
   :nosignatures:

   MismatchKind
   TraceMismatch
   find_mismatches
   match_trace
"""

from __future__ import annotations

import collections
import enum
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ..engine.trace import ExecutionTrace, TraceEvent
from .spec import EventMatcher, TracePattern


class MismatchKind(str, enum.Enum):
    MISSING = "missing"
    """ an ordered event occurs fewer times than required """
    ORDER = "order"
    """ all ordered events occur, but not in the required order """
    FORBIDDEN = "forbidden"
    PRECEDENCE = "precedence"


@dataclass(frozen=True)
class TraceMismatch:
    kind: MismatchKind
    message: str

    def __str__(self) -> str:
        return self.message


def _candidates(events: Sequence[TraceEvent], matcher: EventMatcher) -> List[int]:
    """indices of the events selected by a matcher"""
    indices = [i for i, event in enumerate(events) if matcher.matches(event)]
    if matcher.occurrence is None:
        return indices
    if matcher.occurrence < len(indices):
        return [indices[matcher.occurrence]]
    return []


def _first(events: Sequence[TraceEvent], matcher: EventMatcher) -> Optional[int]:
    indices = _candidates(events, matcher)
    return indices[0] if indices else None


def _match_ordered(events, matchers: List[EventMatcher]) -> List[TraceMismatch]:
    candidates = [set(_candidates(events, m)) for m in matchers]

    # events that are required more often than they occur cannot be reordered
    mismatches = []
    required = collections.Counter(str(m) for m in matchers)
    for m, c in zip(matchers, candidates):
        needed = required.pop(str(m), None)
        if needed is not None and len(c) < needed:
            if c:
                message = f"Expected event `{m}` occurred {len(c)} of {needed} times"
            else:
                message = f"Expected event `{m}` did not occur"
            mismatches.append(TraceMismatch(MismatchKind.MISSING, message))
    if mismatches:
        return mismatches

    # leftmost matching of each matcher is optimal for subsequences
    position = 0
    for k, matcher in enumerate(matchers):
        index = next(
            (i for i in range(position, len(events)) if i in candidates[k]), None
        )
        if index is None:
            previous = f" after `{matchers[k - 1]}`" if k > 0 else ""
            message = f"Expected event `{matcher}` did not occur{previous}"
            return [TraceMismatch(MismatchKind.ORDER, message)]
        position = index + 1
    return []


def _match_forbidden(events, matchers: List[EventMatcher]) -> List[TraceMismatch]:
    mismatches = []
    for matcher in matchers:
        for index in _candidates(events, matcher):
            tick = events[index].tick
            mismatches.append(
                TraceMismatch(
                    MismatchKind.FORBIDDEN,
                    f"Forbidden event `{matcher}` occurred in tick {tick}",
                )
            )
            break
    return mismatches


def _match_precedence(events, pattern: TracePattern) -> List[TraceMismatch]:
    mismatches = []
    for constraint in pattern.precedence:
        before = [(m, _first(events, m)) for m in constraint.before]
        after = [(m, _first(events, m)) for m in constraint.after]
        absent = [m for m, index in before + after if index is None]
        if absent:
            names = ", ".join(f"`{m}`" for m in absent)
            mismatches.append(
                TraceMismatch(
                    MismatchKind.PRECEDENCE,
                    f"Events {names} required by a precedence constraint did not occur",
                )
            )
            continue
        last_before, last_matcher = max((i, str(m)) for m, i in before)
        first_after, first_matcher = min((i, str(m)) for m, i in after)
        if last_before >= first_after:
            mismatches.append(
                TraceMismatch(
                    MismatchKind.PRECEDENCE,
                    f"`{first_matcher}` occurred before `{last_matcher}`",
                )
            )
    return mismatches


def find_mismatches(
    trace: ExecutionTrace, pattern: TracePattern
) -> List[TraceMismatch]:
    """determine all ways in which a trace violates a pattern

    Args:
        trace (:class:`~btplan.engine.trace.ExecutionTrace`):
            The trace of an executed tree
        pattern (:class:`~btplan.tasks.spec.TracePattern`):
            The pattern

    Returns:
        list of :class:`TraceMismatch`, which is empty if the trace matches
    """
    events = trace.action_events()
    mismatches = _match_ordered(events, pattern.ordered)
    mismatches += _match_forbidden(events, pattern.forbidden)
    mismatches += _match_precedence(events, pattern)
    return mismatches


def match_trace(trace: ExecutionTrace, pattern: TracePattern) -> Tuple[bool, List[str]]:
    """check whether a trace satisfies a pattern

    Returns:
        tuple: whether the trace matches and the reasons why it does not
    """
    reasons = [str(mismatch) for mismatch in find_mismatches(trace, pattern)]
    return not reasons, reasons
