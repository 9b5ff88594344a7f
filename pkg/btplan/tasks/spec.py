"""
Machine-checkable task specifications

A task file is a YAML document with the sections `catalog`, `environment`, `success`
and `max_ticks` next to the prompt text and an optional one-shot example:

.. code-block:: yaml

    id: 1
    title: Navigation
    prompt: The behavior tree represents a mobile robot ...
    catalog:
      MoveTo: {required: [goal]}
    environment:
      rules:
        - {action: MoveTo, ports: {goal: "4,2"}, status: FAILURE}
    success:
      ordered:
        - {action: MoveTo, ports: {goal: "0,0"}, status: SUCCESS}
    max_ticks: 50

.. autosummary::
   :nosignatures:

   EventMatcher
   Rule
   Toggle
   EnvironmentScript
   PrecedenceConstraint
   TracePattern
   TaskSpec
   SchemaError
   UnknownActionInRule
   load_task_spec
   load_task_file
   load_bundled_task
   bundled_task_ids
   bundled_mutants
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Any, Dict, Iterator, List, Literal, Mapping, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..analysis.catalog import ActionCatalog
from ..engine.status import NodeStatus
from ..engine.trace import TraceEvent

RESOURCES = Path(__file__).parent / "resources"

_WHITESPACE = re.compile(r"\s+")


class SchemaError(ValueError):
    """a task document does not conform to the schema"""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class UnknownActionInRule(SchemaError):
    """a rule, toggle or matcher names an action missing from the catalog"""


def normalize_value(value: str) -> str:
    """remove all whitespace so that `4, 7` and `4,7` compare equal"""
    return _WHITESPACE.sub("", value)


def ports_match(expected: Mapping[str, str], ports: Mapping[str, str]) -> bool:
    """check whether all expected ports are present with equal values"""
    for name, value in expected.items():
        if name not in ports:
            return False
        if normalize_value(ports[name]) != normalize_value(value):
            return False
    return True


def _stringify(value):
    # YAML turns values like `1` into numbers
    if isinstance(value, Mapping):
        return {str(k): str(v) for k, v in value.items()}
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class CatalogEntry(_Section):
    kind: Literal["action", "condition"] = "action"
    required: List[str] = Field(default_factory=list)
    optional: List[str] = Field(default_factory=list)


class EventMatcher(_Section):
    """pattern selecting events of action and condition leaves"""

    action: str
    ports: Dict[str, str] = Field(default_factory=dict)
    status: Optional[NodeStatus] = None
    occurrence: Optional[int] = Field(default=None, ge=0)
    """ int: only the n-th (zero-based) event matching the other fields is selected """

    @field_validator("ports", mode="before")
    @classmethod
    def stringify_ports(cls, value):
        return _stringify(value)

    def matches(self, event: TraceEvent) -> bool:
        """check the event, ignoring `occurrence`"""
        if event.action != self.action:
            return False
        if self.status is not None and event.status != self.status:
            return False
        return ports_match(self.ports, event.ports)

    def __str__(self) -> str:
        text = self.action
        if self.ports:
            text += "(" + ", ".join(f"{k}={v}" for k, v in self.ports.items()) + ")"
        if self.status is not None:
            text += f" -> {self.status.value}"
        if self.occurrence is not None:
            text += f" #{self.occurrence}"
        return text


class Rule(_Section):
    """scripted answer of the environment to matching invocations"""

    action: str
    ports: Dict[str, str] = Field(default_factory=dict)
    invocations: Optional[List[int]] = None
    """ list: zero-based invocation indices of the action the rule applies to """
    when: Optional[str] = None
    """ str: flag that must be set for the rule to apply """
    unless: Optional[str] = None
    """ str: flag that must be unset for the rule to apply """
    status: NodeStatus
    outputs: Dict[str, str] = Field(default_factory=dict)

    @field_validator("ports", "outputs", mode="before")
    @classmethod
    def stringify_ports(cls, value):
        return _stringify(value)

    def applies(
        self,
        action: str,
        ports: Mapping[str, str],
        invocation: int,
        flags: Mapping[str, bool],
    ) -> bool:
        if action != self.action or not ports_match(self.ports, ports):
            return False
        if self.invocations is not None and invocation not in self.invocations:
            return False
        if self.when is not None and not flags.get(self.when, False):
            return False
        if self.unless is not None and flags.get(self.unless, False):
            return False
        return True


class Toggle(_Section):
    """flag that is set after a number of matching invocations"""

    flag: str
    action: str
    ports: Dict[str, str] = Field(default_factory=dict)
    count: int = Field(default=1, ge=1)
    value: bool = True

    @field_validator("ports", mode="before")
    @classmethod
    def stringify_ports(cls, value):
        return _stringify(value)


class EnvironmentScript(_Section):
    """deterministic behavior of the actions offered to a task"""

    rules: List[Rule] = Field(default_factory=list)
    defaults: Dict[str, NodeStatus] = Field(default_factory=dict)
    toggles: List[Toggle] = Field(default_factory=list)
    flags: Dict[str, bool] = Field(default_factory=dict)
    """ dict: initial values of flags """

    def find_rule(
        self,
        action: str,
        ports: Mapping[str, str],
        invocation: int,
        flags: Mapping[str, bool],
    ) -> Optional[Rule]:
        """return the first rule applying to an invocation"""
        for rule in self.rules:
            if rule.applies(action, ports, invocation, flags):
                return rule
        return None

    def default_status(self, action: str) -> NodeStatus:
        return self.defaults.get(action, NodeStatus.SUCCESS)


class PrecedenceConstraint(_Section):
    """all events in `before` occur before any event in `after`"""

    before: List[EventMatcher] = Field(min_length=1)
    after: List[EventMatcher] = Field(min_length=1)


class TracePattern(_Section):
    ordered: List[EventMatcher] = Field(default_factory=list)
    """ list: events that must appear in this order, other events may be interleaved """
    forbidden: List[EventMatcher] = Field(default_factory=list)
    precedence: List[PrecedenceConstraint] = Field(default_factory=list)
    require_root_success: bool = True

    def iter_matchers(self) -> Iterator[Tuple[str, EventMatcher]]:
        """iterate over all matchers together with their location in the pattern"""
        for i, matcher in enumerate(self.ordered):
            yield f"ordered.{i}", matcher
        for i, matcher in enumerate(self.forbidden):
            yield f"forbidden.{i}", matcher
        for i, constraint in enumerate(self.precedence):
            for j, matcher in enumerate(constraint.before):
                yield f"precedence.{i}.before.{j}", matcher
            for j, matcher in enumerate(constraint.after):
                yield f"precedence.{i}.after.{j}", matcher


class ExampleSection(_Section):
    description: str
    tree: str


class TaskSpec(_Section):
    """a task together with everything needed to decide whether a tree solves it"""

    id: int = Field(ge=1, le=9)
    title: str
    prompt: str = Field(min_length=1)
    example: Optional[ExampleSection] = None
    catalog: Dict[str, CatalogEntry] = Field(min_length=1)
    environment: EnvironmentScript = Field(default_factory=EnvironmentScript)
    success: TracePattern = Field(default_factory=TracePattern)
    max_ticks: int = Field(default=100, ge=1)

    @field_validator("catalog", mode="before")
    @classmethod
    def fill_catalog(cls, value):
        # allow `Explore:` without further details
        if isinstance(value, Mapping):
            return {str(k): v or {} for k, v in value.items()}
        return value

    @property
    def action_catalog(self) -> ActionCatalog:
        """:class:`~btplan.analysis.catalog.ActionCatalog`: the offered actions"""
        return ActionCatalog.from_dict(
            {name: entry.model_dump() for name, entry in self.catalog.items()}
        )

    @property
    def example_pair(self):
        """:class:`~btplan.prompts.messages.ExamplePair`: the one-shot example"""
        from ..prompts.messages import ExamplePair

        if self.example is None:
            return None
        return ExamplePair(self.example.description, self.example.tree)


def _check_actions(spec: TaskSpec) -> None:
    """ensure that the environment and the pattern only name catalog actions"""
    known = set(spec.catalog)
    locations: List[Tuple[str, str]] = []
    for i, rule in enumerate(spec.environment.rules):
        locations.append((f"environment.rules.{i}.action", rule.action))
    for i, toggle in enumerate(spec.environment.toggles):
        locations.append((f"environment.toggles.{i}.action", toggle.action))
    for name in spec.environment.defaults:
        locations.append((f"environment.defaults.{name}", name))
    for path, matcher in spec.success.iter_matchers():
        locations.append((f"success.{path}.action", matcher.action))

    for path, action in locations:
        if action not in known:
            raise UnknownActionInRule(f"Action `{action}` is not in the catalog", path)


def _error_path(loc: Tuple[Union[int, str], ...]) -> str:
    return ".".join(str(part) for part in loc)


def load_task_spec(document: Union[str, Mapping[str, Any]]) -> TaskSpec:
    """create a task specification from a YAML document

    Args:
        document (str or dict):
            The YAML text or the data it describes

    Returns:
        :class:`TaskSpec`

    Raises:
        :class:`SchemaError`: if the document does not follow the schema; the
        attribute `path` names the offending field
        :class:`UnknownActionInRule`: if an action outside the catalog is used
    """
    if isinstance(document, str):
        try:
            data = yaml.safe_load(document)
        except yaml.YAMLError as err:
            raise SchemaError(f"Invalid YAML: {err}") from err
    else:
        data = document
    if not isinstance(data, Mapping):
        raise SchemaError("Task document must be a mapping")

    try:
        spec = TaskSpec.model_validate(data)
    except ValidationError as err:
        first = err.errors()[0]
        path = _error_path(first["loc"])
        raise SchemaError(first["msg"], path) from err

    _check_actions(spec)
    return spec


def load_task_file(path: Union[str, Path]) -> TaskSpec:
    """read a task specification from a YAML file"""
    return load_task_spec(Path(path).read_text(encoding="utf-8"))


def bundled_task_ids() -> List[int]:
    """list: identifiers of the tasks shipped with the package"""
    ids = []
    for path in RESOURCES.glob("task*.yaml"):
        suffix = path.stem[len("task") :]
        if suffix.isdigit():
            ids.append(int(suffix))
    return sorted(ids)


def load_bundled_task(task_id: Union[int, str]) -> TaskSpec:
    """load one of the tasks shipped with the package

    Args:
        task_id (int or str):
            The task number, optionally given as `task3`
    """
    name = str(task_id)
    if not name.startswith("task"):
        name = f"task{name}"
    path = RESOURCES / f"{name}.yaml"
    if not path.is_file():
        raise KeyError(f"No bundled task `{task_id}`")
    return load_task_file(path)


def golden_tree_path(task_id: int) -> Path:
    """path of the reference solution of a bundled task"""
    return RESOURCES / "golden" / f"task{task_id}.xml"


MutantFault = Literal[
    "shuffled_order",
    "dropped_action",
    "extra_parameter",
    "wrong_structure",
    "wrong_parameter",
    "invented_leaf",
]


class MutantFixture(_Section):
    """fault-seeded variant of a golden tree with its expected failure"""

    task: int
    name: str
    fault: MutantFault
    failure_class: str
    repairable: bool = False

    @property
    def path(self) -> Path:
        return RESOURCES / "mutants" / f"task{self.task}" / f"{self.name}.xml"


def bundled_mutants() -> List[MutantFixture]:
    """list: the mutant fixtures shipped with the package"""
    data = yaml.safe_load((RESOURCES / "mutants.yaml").read_text(encoding="utf-8"))
    return [MutantFixture.model_validate(entry) for entry in data]


class RepairCase(_Section):
    """generated-looking tree that subtractive repair turns into a solution"""

    task: int
    name: str
    edits: List[str] = Field(min_length=1)
    tree: str


def bundled_repair_corpus() -> List[RepairCase]:
    """list: the repairable trees shipped with the package"""
    path = RESOURCES / "repair_corpus.yaml"
    data = yaml.safe_load(path.read_text(encoding="utf-8"))
    return [RepairCase.model_validate(entry) for entry in data]
