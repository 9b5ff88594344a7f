"""
Chat prompts for generating behavior trees and for describing them

Generation prompts ask a model to write the XML of a tree for a task description,
optionally after a single worked example. Description prompts ask a model for the
task description of a given tree and are used to build instruction datasets.

.. autosummary::
   :nosignatures:

   Message
   MessageList
   ExamplePair
   build_generation_prompt
   build_description_prompt
   EmptyDescription
   UnparseableTree
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional

from ..trees.parser import ParseError, parse

GENERATION_INSTRUCTION = (
    "You will be provided a summary of a task performed by a robot, and your "
    "objective is to express this task as a behavior tree in XML format."
)
"""str: system message of generation prompts and the instruction of dataset entries"""

DESCRIPTION_INSTRUCTION = (
    "You will be provided a behavior tree in XML format, and your task is to "
    "summarize the task performed by this behavior tree"
)

DEFAULT_DESCRIPTION_EXAMPLE_TREE = """<root BTCPP_format="4">
    <BehaviorTree ID="MainTree">
        <Sequence>
            <GoPoint goal="3,1"/>
            <GoObject object="door_handle"/>
        </Sequence>
    </BehaviorTree>
</root>"""

DEFAULT_DESCRIPTION_EXAMPLE_TEXT = (
    "The behavior tree describes a short sequential task for a robot. The robot "
    "first drives to a given point (GoPoint) and afterwards interacts with a given "
    "object (GoObject). The second step only starts once the robot has reached the "
    "point."
)


class EmptyDescription(ValueError):
    """a task description is empty"""


class UnparseableTree(ValueError):
    """a tree that should be described cannot be parsed"""


class Role(str, enum.Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


@dataclass(frozen=True)
class Message:
    role: Role
    content: str

    def to_dict(self) -> Dict[str, str]:
        return {"role": self.role.value, "content": self.content}


class MessageList:
    """ordered chat messages starting with a system message

    After the system message, user and assistant messages alternate, starting with a
    user message.
    """

    def __init__(self, messages: Iterable[Message]):
        self.messages: List[Message] = list(messages)
        self._check()

    def _check(self) -> None:
        if not self.messages or self.messages[0].role != Role.SYSTEM:
            raise ValueError("The first message must be a system message")
        for i, message in enumerate(self.messages[1:]):
            expected = Role.USER if i % 2 == 0 else Role.ASSISTANT
            if message.role != expected:
                raise ValueError(
                    f"Message {i + 1} has role `{message.role.value}` instead of "
                    f"`{expected.value}`"
                )

    @classmethod
    def from_list(cls, data: Iterable[Mapping[str, Any]]) -> MessageList:
        """create messages from the wire format `[{"role": .., "content": ..}]`"""
        return cls(Message(Role(item["role"]), str(item["content"])) for item in data)

    def to_list(self) -> List[Dict[str, str]]:
        return [message.to_dict() for message in self.messages]

    @property
    def roles(self) -> List[str]:
        return [message.role.value for message in self.messages]

    def __iter__(self) -> Iterator[Message]:
        return iter(self.messages)

    def __len__(self) -> int:
        return len(self.messages)

    def __getitem__(self, index) -> Message:
        return self.messages[index]

    def __eq__(self, other):
        if not isinstance(other, MessageList):
            return NotImplemented
        return self.messages == other.messages

    def __repr__(self):
        return f"{self.__class__.__name__}(roles={self.roles})"


@dataclass(frozen=True)
class ExamplePair:
    """a task description together with a tree solving it"""

    description: str
    tree_xml: str

    def check(self, catalog=None) -> None:
        """ensure that the tree parses and, if given, is lint-clean for a catalog

        Raises:
            ValueError: if the example is unusable
        """
        if not self.description.strip():
            raise EmptyDescription("Example description is empty")
        try:
            model = parse(self.tree_xml)
        except ParseError as err:
            raise UnparseableTree(f"Example tree cannot be parsed: {err}") from err
        if catalog is not None:
            from ..analysis.lint import lint

            errors = [d for d in lint(model, catalog, lenient=False) if d.is_error]
            if errors:
                raise ValueError(f"Example tree is not lint-clean: {errors[0]}")


def build_generation_prompt(
    task_description: str, example: Optional[ExamplePair] = None
) -> MessageList:
    """create the prompt asking a model to write a tree for a task

    Args:
        task_description (str):
            The natural-language description of the task
        example (:class:`ExamplePair`, optional):
            A worked example turning the prompt into a one-shot prompt

    Returns:
        :class:`MessageList`: two messages for zero-shot prompts and four messages
        for one-shot prompts
    """
    if not task_description.strip():
        raise EmptyDescription("Task description is empty")
    messages = [Message(Role.SYSTEM, GENERATION_INSTRUCTION)]
    if example is not None:
        example.check()
        messages.append(Message(Role.USER, example.description))
        messages.append(Message(Role.ASSISTANT, example.tree_xml))
    messages.append(Message(Role.USER, task_description))
    return MessageList(messages)


def description_system_message(
    word_cap: Optional[int] = None, compatibility_note: Optional[str] = None
) -> str:
    """the system message of description prompts including all constraints"""
    from .. import config

    if word_cap is None:
        word_cap = config["prompts.word_cap"]
    if compatibility_note is None:
        compatibility_note = config["prompts.compatibility_note"]
    parts = [
        DESCRIPTION_INSTRUCTION + ".",
        f"Use at most {word_cap} words.",
        compatibility_note,
        "The description must be an overall summary of the task, clearly written in "
        "natural language.",
    ]
    return " ".join(part for part in parts if part)


def build_description_prompt(
    tree_xml: str,
    example: Optional[ExamplePair] = None,
    *,
    word_cap: Optional[int] = None,
    compatibility_note: Optional[str] = None,
) -> MessageList:
    """create the one-shot prompt asking a model to describe a tree

    No action catalog is needed; trees with subtrees and unknown actions are
    accepted as long as they parse.

    Args:
        tree_xml (str):
            The tree that should be described
        example (:class:`ExamplePair`, optional):
            Worked example; a small navigation tree is used by default
        word_cap (int, optional):
            Maximal length of the description. The default is taken from the
            configuration value `prompts.word_cap`.
        compatibility_note (str, optional):
            Sentence about the target library, by default
            `prompts.compatibility_note`

    Returns:
        :class:`MessageList`: the four messages system, user, assistant, user
    """
    try:
        parse(tree_xml)
    except ParseError as err:
        raise UnparseableTree(str(err)) from err
    if example is None:
        example = ExamplePair(
            DEFAULT_DESCRIPTION_EXAMPLE_TEXT, DEFAULT_DESCRIPTION_EXAMPLE_TREE
        )
    system = description_system_message(word_cap, compatibility_note)
    return MessageList(
        [
            Message(Role.SYSTEM, system),
            Message(Role.USER, example.tree_xml),
            Message(Role.ASSISTANT, example.description),
            Message(Role.USER, tree_xml),
        ]
    )
