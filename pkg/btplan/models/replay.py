"""
Providers for recording sessions with models and replaying them later

A session directory contains one JSON file per request, named by a hash of the
request, which holds the request and the completion. Replaying a directory answers
every recorded request identically, including the recorded latency.

.. autosummary::
   :nosignatures:

   request_key
   ScriptedProvider
   ReplayProvider
   RecordingProvider
   record_session
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Any, Callable, Dict, Union

from ..prompts.messages import MessageList
from ..tools.misc import content_hash, write_text_atomic
from .base import (
    Completion,
    FinishReason,
    GenParams,
    MissingRecording,
    ProtocolError,
    ProviderBase,
)


def request_data(messages: MessageList, params: GenParams) -> Dict[str, Any]:
    return {"messages": messages.to_list(), "params": params.to_dict()}


def request_key(messages: MessageList, params: GenParams) -> str:
    """the content hash identifying a request in a session directory"""
    return content_hash(request_data(messages, params))


class ScriptedProvider(ProviderBase):
    """answers prompts using a python function

    Responses are measured in whitespace-separated tokens. Responses longer than
    `max_new_tokens` are cut and reported with :attr:`FinishReason.LENGTH`.
    """

    name = "scripted"

    def __init__(self, respond: Callable[[MessageList], str], latency: float = 0.0):
        """
        Args:
            respond (callable):
                Function returning the response text for a prompt
            latency (float):
                The latency reported for every completion
        """
        super().__init__()
        self.respond = respond
        self.latency = latency

    def complete(self, messages: MessageList, params: GenParams) -> Completion:
        text = self.respond(messages)
        tokens = text.split()
        finish = FinishReason.STOP
        if len(tokens) > params.max_new_tokens:
            text = " ".join(tokens[: params.max_new_tokens])
            tokens = tokens[: params.max_new_tokens]
            finish = FinishReason.LENGTH
        prompt_tokens = sum(len(m.content.split()) for m in messages)
        return Completion(text, self.latency, finish, prompt_tokens, len(tokens))


class ReplayProvider(ProviderBase):
    """answers prompts from a recorded session"""

    name = "replay"

    def __init__(self, directory: Union[str, Path]):
        super().__init__()
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise OSError(f"Session directory `{self.directory}` does not exist")

    def complete(self, messages: MessageList, params: GenParams) -> Completion:
        key = request_key(messages, params)
        path = self.directory / f"{key}.json"
        if not path.is_file():
            raise MissingRecording(f"No recording for request {key[:12]}")
        try:
            record = json.loads(path.read_text(encoding="utf-8"))
            response = record["response"]
        except (json.JSONDecodeError, KeyError, TypeError) as err:
            raise ProtocolError(f"Malformed recording `{path.name}`: {err}") from err
        self._logger.debug(f"Replaying request {key[:12]}")
        return Completion.from_dict(response)


class RecordingProvider(ProviderBase):
    """forwards prompts to another provider and stores every answer"""

    def __init__(self, provider: ProviderBase, directory: Union[str, Path]):
        """
        Args:
            provider (:class:`~btplan.models.base.ProviderBase`):
                The provider answering the prompts
            directory (str or :class:`~pathlib.Path`):
                The session directory, which is created if necessary
        """
        super().__init__()
        self.provider = provider
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self.recorded = 0

    def complete(self, messages: MessageList, params: GenParams) -> Completion:
        completion = self.provider.complete(messages, params)
        key = request_key(messages, params)
        record = {"request": request_data(messages, params)}
        record["response"] = completion.to_dict()
        text = json.dumps(record, indent=2, sort_keys=True, ensure_ascii=False)
        with self._lock:
            write_text_atomic(self.directory / f"{key}.json", text + "\n")
            self.recorded += 1
        self._logger.info(f"Recorded request {key[:12]}")
        return completion


def record_session(
    provider: ProviderBase, directory: Union[str, Path]
) -> RecordingProvider:
    """wrap a provider such that all its answers are stored in a directory

    Args:
        provider (:class:`~btplan.models.base.ProviderBase`): The live provider
        directory (str or :class:`~pathlib.Path`): The session directory

    Returns:
        :class:`RecordingProvider`: whose session can be replayed with
        :class:`ReplayProvider`
    """
    return RecordingProvider(provider, directory)
