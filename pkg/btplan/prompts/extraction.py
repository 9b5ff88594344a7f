"""
Extracting behavior trees from model responses

Models usually surround the XML with prose or code fences. The first balanced
`<root>` element of a response is taken as the answer; responses that only contain
`<BehaviorTree>` elements are wrapped into a document.

.. autosummary::
   :nosignatures:

   extract_tree
   NoTreeFound
"""

import logging
import re
from typing import Optional, Tuple

from ..trees.parser import ROOT_ELEMENT, TREE_ELEMENT

_logger = logging.getLogger(__name__)


class NoTreeFound(ValueError):
    """a response does not contain a behavior tree"""


def _tag_pattern(name: str) -> "re.Pattern[str]":
    # matches opening, closing, and self-closing tags of exactly this element; `>`
    # may appear inside quoted attribute values
    return re.compile(rf"<(/?){name}(?=[\s/>])(?:[^>\"']|\"[^\"]*\"|'[^']*')*?(/?)>")


def _balanced_span(text: str, name: str) -> Optional[Tuple[int, int]]:
    """first span of `text` covering a balanced element called `name`"""
    start = None
    depth = 0
    for match in _tag_pattern(name).finditer(text):
        closing, self_closing = match.group(1), match.group(2)
        if start is None:
            if closing:
                continue  # stray closing tag before any opening tag
            start = match.start()
            if self_closing:
                return start, match.end()
            depth = 1
        elif closing:
            depth -= 1
            if depth == 0:
                return start, match.end()
        elif not self_closing:
            depth += 1
    return None


def extract_tree(response_text: str) -> str:
    """return the XML of the behavior tree contained in a model response

    Args:
        response_text (str): The raw text generated by a model

    Returns:
        str: The first balanced root element, verbatim. Pure XML responses are
        returned without surrounding whitespace.

    Raises:
        :class:`NoTreeFound`: if the response contains no complete tree
    """
    span = _balanced_span(response_text, ROOT_ELEMENT)
    if span is not None:
        return response_text[span[0] : span[1]]

    # some models omit the document element and only write the trees
    spans = []
    position = 0
    while True:
        span = _balanced_span(response_text[position:], TREE_ELEMENT)
        if span is None:
            break
        spans.append((position + span[0], position + span[1]))
        position += span[1]
    if spans:
        _logger.debug(f"Wrapping {len(spans)} tree elements into a document")
        trees = "\n".join(response_text[a:b] for a, b in spans)
        return f'<{ROOT_ELEMENT} BTCPP_format="4">\n{trees}\n</{ROOT_ELEMENT}>'

    raise NoTreeFound("The response does not contain a behavior tree")
