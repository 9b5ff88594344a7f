"""
Access to language models through chat-completions endpoints and recorded sessions.

.. autosummary::
   :nosignatures:

   ~base.GenParams
   ~base.Completion
   ~base.complete
   ~chat.ChatCompletionsProvider
   ~replay.ReplayProvider
   ~replay.record_session
"""

from .base import (
    Completion,
    FinishReason,
    GenParams,
    MissingRecording,
    ModelIOError,
    ModelTimeout,
    ProtocolError,
    ProviderBase,
    TransportError,
    complete,
)
from .chat import ChatCompletionsProvider
from .replay import (
    RecordingProvider,
    ReplayProvider,
    ScriptedProvider,
    record_session,
    request_key,
)
