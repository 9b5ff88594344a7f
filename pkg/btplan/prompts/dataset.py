"""
Instruction datasets pairing task descriptions with behavior trees

Every entry consists of the fixed generation instruction, a task description as input,
and the XML of a tree as output. Datasets are stored with one JSON object per line.

.. autosummary::
   :nosignatures:

   DatasetEntry
   write_dataset
   read_dataset
   check_dataset
   synthesize_dataset
   describe_trees
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from ..trees.model import NamedTree, RawNode, TreeModel
from ..trees.parser import ParseError, parse
from ..trees.serializer import serialize
from .messages import GENERATION_INSTRUCTION, ExamplePair, build_description_prompt

_logger = logging.getLogger(__name__)

ENTRY_KEYS = ("instruction", "input", "output")


class InvalidEntry(ValueError):
    """a dataset entry violates the format of instruction datasets"""


@dataclass(frozen=True)
class DatasetEntry:
    """a single training example"""

    instruction: str
    input: str
    output: str

    @classmethod
    def from_pair(cls, description: str, tree_xml: str) -> DatasetEntry:
        return cls(GENERATION_INSTRUCTION, description, tree_xml)

    def check(self) -> None:
        """raise :class:`InvalidEntry` if the entry is not usable"""
        if self.instruction != GENERATION_INSTRUCTION:
            raise InvalidEntry("The instruction differs from the generation prompt")
        if not self.input.strip():
            raise InvalidEntry("The task description is empty")
        try:
            parse(self.output)
        except ParseError as err:
            raise InvalidEntry(f"The output is not a behavior tree: {err}") from err

    def to_dict(self) -> Dict[str, str]:
        return {key: getattr(self, key) for key in ENTRY_KEYS}

    @classmethod
    def from_dict(cls, data: Any) -> DatasetEntry:
        if not isinstance(data, dict) or set(data) != set(ENTRY_KEYS):
            raise InvalidEntry(f"Entries need exactly the keys {', '.join(ENTRY_KEYS)}")
        if not all(isinstance(data[key], str) for key in ENTRY_KEYS):
            raise InvalidEntry("All fields of an entry must be strings")
        return cls(data["instruction"], data["input"], data["output"])


def write_dataset(
    entries: Iterable[DatasetEntry], destination: Union[str, Path]
) -> int:
    """write entries to a file with one JSON object per line

    All entries are checked before the file is opened, so an invalid entry leaves no
    partial file behind.

    Args:
        entries: The entries
        destination (str or :class:`~pathlib.Path`): The file to write

    Returns:
        int: The number of entries written
    """
    entries = list(entries)
    for i, entry in enumerate(entries):
        try:
            entry.check()
        except InvalidEntry as err:
            raise InvalidEntry(f"Entry {i}: {err}") from err

    with open(destination, "w", encoding="utf-8", newline="\n") as fp:
        for entry in entries:
            json.dump(entry.to_dict(), fp, ensure_ascii=False)
            fp.write("\n")
    _logger.info(f"Wrote {len(entries)} entries to `{destination}`")
    return len(entries)


def _iter_lines(source: Union[str, Path]) -> Iterable[Tuple[int, str]]:
    with open(source, encoding="utf-8") as fp:
        for number, line in enumerate(fp, 1):
            if line.strip():
                yield number, line


def _load_entry(line: str) -> DatasetEntry:
    try:
        data = json.loads(line)
    except json.JSONDecodeError as err:
        raise InvalidEntry(f"Not a JSON object: {err}") from err
    entry = DatasetEntry.from_dict(data)
    entry.check()
    return entry


def read_dataset(source: Union[str, Path]) -> List[DatasetEntry]:
    """read the entries of a dataset file

    Raises:
        :class:`InvalidEntry`: naming the first line that is not a valid entry
    """
    entries = []
    for number, line in _iter_lines(source):
        try:
            entries.append(_load_entry(line))
        except InvalidEntry as err:
            raise InvalidEntry(f"Line {number}: {err}") from err
    return entries


@dataclass
class DatasetCheck:
    """structural summary of a dataset file"""

    total: int = 0
    problems: List[Tuple[int, str]] = field(default_factory=list)
    """ list: line numbers and descriptions of invalid entries """

    @property
    def valid(self) -> int:
        return self.total - len(self.problems)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __str__(self) -> str:
        lines = [f"{self.valid} of {self.total} entries are valid"]
        lines.extend(f"line {number}: {problem}" for number, problem in self.problems)
        return "\n".join(lines)


def check_dataset(source: Union[str, Path]) -> DatasetCheck:
    """report which lines of a dataset file hold valid entries

    Only the structure is checked; the quality of descriptions is not judged.
    """
    result = DatasetCheck()
    for number, line in _iter_lines(source):
        result.total += 1
        try:
            _load_entry(line)
        except InvalidEntry as err:
            result.problems.append((number, str(err)))
    return result


@dataclass(frozen=True)
class _Skill:
    name: str
    port: Optional[str]
    phrase: str


SKILLS = [
    _Skill("MoveTo", "goal", "move to the location ({value})"),
    _Skill("Pick", "object", "pick up the {value}"),
    _Skill("Place", "location", "place the object it holds at {value}"),
    _Skill("Inspect", "object", "inspect the {value}"),
    _Skill("OpenGripper", None, "open its gripper"),
    _Skill("CloseGripper", None, "close its gripper"),
    _Skill("Charge", None, "recharge its battery"),
]
OBJECTS = ["box", "bottle", "cube", "valve", "door_handle", "tool", "crate"]
PLACES = ["shelf", "table", "bin_a", "bin_b", "dock"]


def _random_leaf(rng: np.random.Generator) -> Tuple[RawNode, str]:
    skill = SKILLS[rng.integers(len(SKILLS))]
    if skill.port is None:
        return RawNode(skill.name), skill.phrase
    if skill.port == "goal":
        value = f"{rng.integers(0, 10)},{rng.integers(0, 10)}"
        text = skill.phrase.format(value=value.replace(",", ", "))
    elif skill.port == "object":
        value = str(rng.choice(OBJECTS))
        text = skill.phrase.format(value=value.replace("_", " "))
    else:
        value = str(rng.choice(PLACES))
        text = skill.phrase.format(value=f"the {value.replace('_', ' ')}")
    return RawNode(skill.name, {skill.port: value}), text


def _random_node(rng: np.random.Generator, depth: int) -> Tuple[RawNode, str]:
    """create a random node together with a phrase describing it"""
    if depth >= 2 or rng.random() < 0.4:
        return _random_leaf(rng)

    kind = rng.choice(["Sequence", "Sequence", "Fallback", "RetryUntilSuccessful"])
    if kind == "RetryUntilSuccessful":
        attempts = int(rng.integers(2, 6))
        child, text = _random_node(rng, depth + 1)
        node = RawNode(str(kind), {"num_attempts": str(attempts)}, [child])
        return node, f"{text}, trying up to {attempts} times"

    parts = [_random_node(rng, depth + 1) for _ in range(rng.integers(2, 4))]
    children = [node for node, _ in parts]
    texts = [text for _, text in parts]
    if kind == "Sequence":
        text = ", then ".join(texts)
    else:
        alternatives = ", otherwise ".join(texts[1:])
        text = f"first {texts[0]}; if that fails, {alternatives}"
    return RawNode(str(kind), {}, children), text


def synthesize_entry(rng: np.random.Generator) -> DatasetEntry:
    """create a random tree together with a template description"""
    node, text = _random_node(rng, 0)
    if node.is_leaf:
        node = RawNode("Sequence", {}, [node])
    model = TreeModel([NamedTree("MainTree", [node])], format_version="4")
    description = f"The robot should {text}."
    return DatasetEntry.from_pair(description, serialize(model))


def synthesize_dataset(
    count: int, rng: np.random.Generator = None
) -> List[DatasetEntry]:
    """create a synthetic dataset of random trees with template descriptions

    Args:
        count (int): Number of entries
        rng (:class:`numpy.random.Generator`, optional): Source of randomness

    Returns:
        list of :class:`DatasetEntry`
    """
    if rng is None:
        rng = np.random.default_rng()
    return [synthesize_entry(rng) for _ in range(count)]


def describe_trees(
    trees: Iterable[str],
    provider,
    params=None,
    *,
    example: Optional[ExamplePair] = None,
) -> List[DatasetEntry]:
    """ask a model to describe trees and turn the answers into dataset entries

    Trees that do not parse and answers that are empty or truncated are skipped with
    a warning.

    Args:
        trees: The XML of the trees
        provider (:class:`~btplan.models.base.ProviderBase`):
            The model that writes the descriptions
        params (:class:`~btplan.models.base.GenParams`, optional):
            Generation parameters
        example (:class:`~btplan.prompts.messages.ExamplePair`, optional):
            Worked example shown to the model

    Returns:
        list of :class:`DatasetEntry`
    """
    from ..models import FinishReason, ModelIOError, complete

    from .messages import UnparseableTree

    entries = []
    for i, tree_xml in enumerate(trees):
        try:
            messages = build_description_prompt(tree_xml, example)
        except UnparseableTree as err:
            _logger.warning(f"Skipping tree {i}: {err}")
            continue
        try:
            completion = complete(provider, messages, params)
        except ModelIOError as err:
            _logger.warning(f"Skipping tree {i}: {err}")
            continue
        description = completion.text.strip()
        if completion.finish_reason != FinishReason.STOP or not description:
            _logger.warning(f"Skipping tree {i}: incomplete description")
            continue
        entries.append(DatasetEntry.from_pair(description, tree_xml))
    _logger.info(f"Described {len(entries)} trees")
    return entries
