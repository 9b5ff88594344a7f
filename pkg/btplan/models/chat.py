"""
Provider talking to chat-completions endpoints through the `openai` client

Any server implementing the chat-completions protocol can be used, including local
inference servers. The API key is read from the environment variable named by the
configuration value `models.api_key_env`.

.. autosummary::
   :nosignatures:

   ChatCompletionsProvider
"""

from __future__ import annotations

import os
import threading
import time
from typing import Any, Dict, Optional

import openai

from ..prompts.messages import MessageList
from .base import (
    Completion,
    FinishReason,
    GenParams,
    ModelTimeout,
    ProtocolError,
    ProviderBase,
    TransportError,
)

FINISH_REASONS = {"stop": FinishReason.STOP, "length": FinishReason.LENGTH}


class ChatCompletionsProvider(ProviderBase):
    """model served by a chat-completions endpoint"""

    name = "chat"

    def __init__(
        self,
        endpoint: Optional[str] = None,
        *,
        api_key: Optional[str] = None,
        timeout: Optional[float] = None,
        max_in_flight: Optional[int] = None,
        retries: Optional[int] = None,
        client=None,
    ):
        """
        Args:
            endpoint (str, optional):
                Base URL of the endpoint, by default `models.endpoint`
            api_key (str, optional):
                The key; by default read from the environment
            timeout (float, optional):
                Seconds after which a request is abandoned, by default
                `models.timeout`
            max_in_flight (int, optional):
                Maximal number of concurrent requests, by default
                `models.max_in_flight`
            retries (int, optional):
                Number of repetitions after transport failures, by default
                `models.retries`
            client:
                Preconfigured client object, which replaces the `openai` client
        """
        from .. import config

        super().__init__()
        self.endpoint = endpoint or config["models.endpoint"]
        self.timeout = config["models.timeout"] if timeout is None else timeout
        if max_in_flight is None:
            max_in_flight = config["models.max_in_flight"]
        self.retries = config["models.retries"] if retries is None else retries
        self._semaphore = threading.BoundedSemaphore(max(1, max_in_flight))

        if client is None:
            if api_key is None:
                api_key = os.environ.get(config["models.api_key_env"], "EMPTY")
            client = openai.OpenAI(
                base_url=self.endpoint,
                api_key=api_key,
                timeout=self.timeout,
                max_retries=0,
            )
        self.client = client

    def _request(self, messages: MessageList, params: GenParams) -> Dict[str, Any]:
        kwargs: Dict[str, Any] = {
            "model": params.model,
            "messages": messages.to_list(),
            "max_tokens": params.max_new_tokens,
            "temperature": params.temperature,
        }
        if params.stop:
            kwargs["stop"] = list(params.stop)

        with self._semaphore:
            start = time.perf_counter()
            try:
                response = self.client.chat.completions.create(**kwargs)
            except openai.APITimeoutError as err:
                raise ModelTimeout(f"No answer within {self.timeout} seconds") from err
            except openai.APIConnectionError as err:
                raise TransportError(f"Cannot reach {self.endpoint}: {err}") from err
            except openai.APIStatusError as err:
                raise TransportError(f"Endpoint returned {err.status_code}") from err
            except openai.APIError as err:
                raise ProtocolError(f"Invalid answer: {err}") from err
            latency = time.perf_counter() - start

        try:
            choice = response.choices[0]
            text = choice.message.content
        except (AttributeError, IndexError, TypeError) as err:
            raise ProtocolError(f"Malformed response: {err}") from err
        if text is None:
            raise ProtocolError("Response contains no message content")

        usage = getattr(response, "usage", None)
        reason = FINISH_REASONS.get(choice.finish_reason, FinishReason.ERROR)
        return {
            "text": text,
            "latency": latency,
            "finish_reason": reason,
            "prompt_tokens": getattr(usage, "prompt_tokens", None),
            "completion_tokens": getattr(usage, "completion_tokens", None),
        }

    def complete(self, messages: MessageList, params: GenParams) -> Completion:
        """send a prompt to the endpoint

        Transport failures are repeated `retries` times; the number of requests is
        stored in :attr:`Completion.attempts`.
        """
        attempt = 0
        while True:
            attempt += 1
            try:
                result = self._request(messages, params)
            except TransportError as err:
                if attempt > self.retries:
                    raise
                self._logger.warning(f"Attempt {attempt} failed: {err}")
            else:
                self._logger.debug(f"Completion took {result['latency']:.3g} seconds")
                return Completion(attempts=attempt, **result)
