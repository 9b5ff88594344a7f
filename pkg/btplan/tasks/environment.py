"""
Scripted environments answering the actions of a task

.. autosummary::
   :nosignatures:

   EnvironmentHost
   EnvironmentSession
"""

from __future__ import annotations

import logging
from typing import Dict, List

from ..analysis.catalog import ActionCatalog
from ..engine.hosts import ActionHost, HostSession, Outcome
from .spec import EnvironmentScript, TaskSpec, ports_match


class EnvironmentSession(HostSession):
    """state of a scripted environment while a single tree runs

    Flags start with the values given in the script and are changed by toggles after
    the invocation that completes their count was answered.
    """

    def __init__(self, script: EnvironmentScript):
        super().__init__()
        self.script = script
        self.flags: Dict[str, bool] = dict(script.flags)
        self._toggle_counts: List[int] = [0] * len(script.toggles)
        self._logger = logging.getLogger(self.__class__.__name__)

    def respond(self, action, ports, invocation) -> Outcome:
        rule = self.script.find_rule(action, ports, invocation, self.flags)
        if rule is None:
            outcome = Outcome(self.script.default_status(action))
        else:
            outcome = Outcome(rule.status, dict(rule.outputs))
        self._update_flags(action, ports)
        return outcome

    def _update_flags(self, action, ports) -> None:
        for i, toggle in enumerate(self.script.toggles):
            if toggle.action != action or not ports_match(toggle.ports, ports):
                continue
            self._toggle_counts[i] += 1
            if self._toggle_counts[i] == toggle.count:
                self.flags[toggle.flag] = toggle.value
                self._logger.debug(f"Flag `{toggle.flag}` set to {toggle.value}")


class EnvironmentHost(ActionHost):
    """host whose actions follow an :class:`~btplan.tasks.spec.EnvironmentScript`"""

    def __init__(self, catalog: ActionCatalog, script: EnvironmentScript):
        super().__init__(catalog)
        self.script = script

    @classmethod
    def from_task(cls, spec: TaskSpec) -> EnvironmentHost:
        """create the environment of a task"""
        return cls(spec.action_catalog, spec.environment)

    def open_session(self) -> EnvironmentSession:
        return EnvironmentSession(self.script)
