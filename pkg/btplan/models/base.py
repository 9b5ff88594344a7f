"""
Base classes for obtaining completions from language models

.. autosummary::
   :nosignatures:

   GenParams
   FinishReason
   Completion
   ProviderBase
   complete
"""

from __future__ import annotations

import enum
import logging
from abc import ABCMeta, abstractmethod
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Tuple, Type

from pydantic import BaseModel, ConfigDict, Field

from ..prompts.messages import MessageList
from ..tools.misc import classproperty


class ModelIOError(RuntimeError):
    """a completion could not be obtained"""


class TransportError(ModelIOError):
    """the endpoint could not be reached or answered with an HTTP error"""


class ProtocolError(ModelIOError):
    """the endpoint answered with a malformed response"""


class ModelTimeout(ModelIOError):
    """the endpoint did not answer in time"""


class MissingRecording(ModelIOError):
    """a replayed session contains no response for a request"""


class GenParams(BaseModel):
    """parameters of a single generation request"""

    model_config = ConfigDict(extra="forbid", frozen=True, protected_namespaces=())

    model: str = "default"
    max_new_tokens: int = Field(1000, ge=1)
    temperature: float = Field(0.0, ge=0)
    stop: Tuple[str, ...] = ()

    @classmethod
    def from_config(cls, model: Optional[str] = None, **kwargs) -> GenParams:
        """create parameters with defaults taken from the package configuration"""
        from .. import config

        kwargs.setdefault("max_new_tokens", config["models.max_new_tokens"])
        kwargs.setdefault("temperature", config["models.temperature"])
        if model is not None:
            kwargs["model"] = model
        return cls(**kwargs)

    def to_dict(self) -> Dict[str, Any]:
        data = self.model_dump()
        data["stop"] = list(self.stop)
        return data


class FinishReason(str, enum.Enum):
    STOP = "stop"
    LENGTH = "length"
    """ the generation was cut at `max_new_tokens` """
    ERROR = "error"


@dataclass(frozen=True)
class Completion:
    """the answer of a model"""

    text: str
    latency: float
    """ float: wall-clock duration of the request in seconds """
    finish_reason: FinishReason = FinishReason.STOP
    prompt_tokens: Optional[int] = None
    completion_tokens: Optional[int] = None
    attempts: int = 1
    """ int: number of requests sent, including retries after transport failures """

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["finish_reason"] = self.finish_reason.value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> Completion:
        try:
            values = dict(data)
            values["finish_reason"] = FinishReason(values["finish_reason"])
            return cls(**values)
        except (KeyError, TypeError, ValueError) as err:
            raise ProtocolError(f"Malformed completion record: {err}") from err


class ProviderBase(metaclass=ABCMeta):
    """base class for everything that answers chat prompts"""

    name: str = ""
    _subclasses: Dict[str, Type[ProviderBase]] = {}  # all inheriting classes

    def __init__(self):
        self._logger = logging.getLogger(self.__class__.__name__)

    def __init_subclass__(cls, **kwargs):  # @NoSelf
        """register all subclasses to reconstruct them later"""
        super().__init_subclass__(**kwargs)
        cls._subclasses[cls.__name__] = cls
        if cls.name:
            cls._subclasses[cls.name] = cls

    @classmethod
    def from_name(cls, name: str, **kwargs) -> ProviderBase:
        """create a provider from its registered name

        Args:
            name (str): The name of the provider, e.g., `chat` or `replay`
            **kwargs: Arguments for the constructor of the provider

        Returns:
            An instance of a subclass of :class:`ProviderBase`
        """
        try:
            provider_class = cls._subclasses[name]
        except KeyError:
            names = ", ".join(f"'{n}'" for n in cls.registered_providers)
            raise ValueError(
                f"Unknown provider '{name}'. Registered providers are {names}"
            )
        return provider_class(**kwargs)

    @classproperty
    def registered_providers(cls) -> List[str]:  # @NoSelf
        """list of str: the short names of the registered providers"""
        return sorted(c.name for c in set(cls._subclasses.values()) if c.name)

    @abstractmethod
    def complete(self, messages: MessageList, params: GenParams) -> Completion:
        pass


def complete(
    provider: ProviderBase, messages: MessageList, params: Optional[GenParams] = None
) -> Completion:
    """obtain the answer of a model to a prompt

    Args:
        provider (:class:`ProviderBase`): The model
        messages (:class:`~btplan.prompts.messages.MessageList`): The prompt
        params (:class:`GenParams`, optional): The generation parameters, by default
            taken from the package configuration

    Returns:
        :class:`Completion`

    Raises:
        :class:`ModelIOError`: if no answer could be obtained
    """
    if params is None:
        params = GenParams.from_config()
    completion = provider.complete(messages, params)
    if completion.finish_reason == FinishReason.LENGTH:
        logging.getLogger(__name__).info(
            f"Generation hit the limit of {params.max_new_tokens} tokens"
        )
    return completion
