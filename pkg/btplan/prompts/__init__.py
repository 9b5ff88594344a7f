"""
Prompts for language models and the instruction datasets built from them.

.. autosummary::
   :nosignatures:

   ~messages.build_generation_prompt
   ~messages.build_description_prompt
   ~messages.ExamplePair
   ~messages.MessageList
   ~extraction.extract_tree
   ~dataset.DatasetEntry
   ~dataset.read_dataset
   ~dataset.write_dataset
"""

from .dataset import (
    DatasetCheck,
    DatasetEntry,
    InvalidEntry,
    check_dataset,
    describe_trees,
    read_dataset,
    synthesize_dataset,
    write_dataset,
)
from .extraction import NoTreeFound, extract_tree
from .messages import (
    DESCRIPTION_INSTRUCTION,
    GENERATION_INSTRUCTION,
    EmptyDescription,
    ExamplePair,
    Message,
    MessageList,
    Role,
    UnparseableTree,
    build_description_prompt,
    build_generation_prompt,
)
