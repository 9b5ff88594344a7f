"""
Parsing behavior-tree XML documents into :class:`~btplan.trees.model.TreeModel`

.. autosummary::
   :nosignatures:

   parse
   parse_file
"""

from __future__ import annotations

import bisect
import logging
import re
from pathlib import Path
from typing import List, Optional, Union

from lxml import etree

from .model import NamedTree, RawNode, SourceSpan, TreeModel

ROOT_ELEMENT = "root"
TREE_ELEMENT = "BehaviorTree"
FORMAT_ATTRIBUTE = "BTCPP_format"
MAIN_ATTRIBUTE = "main_tree_to_execute"
SUPPORTED_FORMATS = {"3", "4"}

# Matches start tags in document order while skipping constructs that may contain
# text resembling tags. Attribute values cannot contain `<`, so the n-th start tag
# found here belongs to the n-th element in document order.
_MARKUP_RE = re.compile(
    r"<!--.*?-->|<\?.*?\?>|<!\[CDATA\[.*?\]\]>|<!DOCTYPE(?:[^>\[]|\[.*?\])*>"
    r"|<([A-Za-z_][\w.:\-]*)",
    re.S,
)

# the encoding pseudo-attribute of an XML declaration at the start of the text
_ENCODING_RE = re.compile(
    r"\A\ufeff?<\?xml\b[^>]*?\b(encoding\s*=\s*(?:\"[^\"]*\"|'[^']*'))"
)
# the declared encoding of a file
_DECLARED_RE = re.compile(
    rb"\A(?:\xef\xbb\xbf)?<\?xml\b[^>]*?\bencoding\s*=\s*"
    rb"[\"']([A-Za-z][\w.\-]*)[\"']"
)

_logger = logging.getLogger(__name__)


class ParseError(ValueError):
    """base class for all errors raised while parsing a document"""

    def __init__(self, message: str, line: Optional[int] = None, column: int = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class MalformedXml(ParseError):
    """the text is not well-formed XML"""


class DuplicateAttribute(MalformedXml):
    """an element carries the same attribute twice"""


class NoRootElement(ParseError):
    """the document element is not the `root` element of the dialect"""


class NoTrees(ParseError):
    """the document does not define any behavior tree"""


class DuplicateTreeId(ParseError):
    """two behavior trees share an identifier"""


class MissingTreeId(ParseError):
    """a behavior tree lacks its `ID` attribute"""


class UnsupportedFormat(ParseError):
    """the document declares a format version that is not supported"""


def _line_starts(text: str) -> List[int]:
    return [0] + [m.end() for m in re.finditer("\n", text)]


def _position(line_starts: List[int], offset: int) -> SourceSpan:
    """convert an offset into the text into (line, column)"""
    line = bisect.bisect_right(line_starts, offset)
    return line, offset - line_starts[line - 1] + 1


def _start_tag_positions(text: str) -> List[SourceSpan]:
    """determine (line, column) of all start tags in document order"""
    line_starts = _line_starts(text)
    return [
        _position(line_starts, match.start())
        for match in _MARKUP_RE.finditer(text)
        if match.group(1) is not None
    ]


def _encode(text: str) -> bytes:
    """encode the text as UTF-8 for libxml2

    A declared encoding is blanked out since the text is already decoded, which keeps
    all offsets intact.
    """
    match = _ENCODING_RE.match(text)
    if match is not None:
        start, end = match.span(1)
        text = text[:start] + " " * (end - start) + text[end:]
    try:
        return text.encode("utf-8")
    except UnicodeEncodeError as err:
        line, column = _position(_line_starts(text), err.start)
        code = ord(text[err.start])
        raise MalformedXml(f"Invalid character U+{code:04X}", line, column) from None


def _syntax_error(err: etree.XMLSyntaxError) -> MalformedXml:
    """convert an lxml error into the matching exception of this module"""
    line, column = err.position if err.position else (None, None)
    message = str(err.msg).strip() if err.msg else str(err)
    # libxml2 reports a repeated attribute as "Attribute x redefined"
    if "redefined" in message:
        return DuplicateAttribute(message, line, column)
    return MalformedXml(message, line, column)


def parse(text: str) -> TreeModel:
    """parse a behavior-tree document

    Comments and processing instructions are dropped, all elements are retained
    whether or not their names are known to the dialect.

    Args:
        text (str): The XML text

    Returns:
        :class:`~btplan.trees.model.TreeModel`: The parsed document

    Raises:
        :class:`MalformedXml`: the text is not well-formed
        :class:`NoRootElement`: the document element is not `root`
        :class:`NoTrees`: no `BehaviorTree` element exists
        :class:`DuplicateTreeId`: tree identifiers are not unique
    """
    if not isinstance(text, str):
        raise TypeError(f"Expected text, got {text.__class__.__name__}")
    if not text.strip():
        raise MalformedXml("Document is empty", 1, 1)

    parser = etree.XMLParser(
        remove_comments=True,
        remove_pis=True,
        resolve_entities=False,
        no_network=True,
    )
    try:
        document = etree.fromstring(_encode(text), parser)
    except etree.XMLSyntaxError as err:
        raise _syntax_error(err) from None

    positions = _start_tag_positions(text)
    elements = [el for el in document.iter() if isinstance(el.tag, str)]
    if len(positions) != len(elements):
        # fall back to the line numbers reported by libxml2
        _logger.debug("Could not align start tags; using line numbers only")
        positions = [(el.sourceline or 0, 1) for el in elements]
    spans = {id(el): pos for el, pos in zip(elements, positions)}

    def convert(element) -> RawNode:
        children = [convert(c) for c in element if isinstance(c.tag, str)]
        return RawNode(
            element_name=element.tag,
            attributes={str(k): str(v) for k, v in element.attrib.items()},
            children=children,
            source_span=spans.get(id(element)),
        )

    if document.tag != ROOT_ELEMENT:
        line, column = spans.get(id(document), (None, None))
        raise NoRootElement(
            f"Expected document element `{ROOT_ELEMENT}`, found `{document.tag}`",
            line,
            column,
        )

    model = TreeModel()
    for key, value in document.attrib.items():
        if key == FORMAT_ATTRIBUTE:
            if value not in SUPPORTED_FORMATS:
                line, column = spans[id(document)]
                raise UnsupportedFormat(f"Unsupported format `{value}`", line, column)
            model.format_version = value
        elif key == MAIN_ATTRIBUTE:
            model.main_tree_id = value
        else:
            model.attributes[str(key)] = str(value)

    for element in document:
        if not isinstance(element.tag, str):
            continue
        if element.tag != TREE_ELEMENT:
            model.extras.append(convert(element))
            continue

        line, column = spans[id(element)]
        attributes = {str(k): str(v) for k, v in element.attrib.items()}
        try:
            tree_id = attributes.pop("ID")
        except KeyError:
            raise MissingTreeId("`BehaviorTree` without `ID`", line, column) from None
        if model.has_tree(tree_id):
            raise DuplicateTreeId(f"Tree `{tree_id}` is defined twice", line, column)
        nodes = [convert(c) for c in element if isinstance(c.tag, str)]
        model.trees.append(NamedTree(tree_id, nodes, attributes, (line, column)))

    if not model.trees:
        line, column = spans[id(document)]
        raise NoTrees("Document does not define a `BehaviorTree`", line, column)

    return model


def parse_file(path: Union[str, Path]) -> TreeModel:
    """parse a behavior-tree document stored in a file

    The bytes are decoded using the encoding declared by the document, or UTF-8.

    Args:
        path (str or :class:`~pathlib.Path`): Location of the file

    Returns:
        :class:`~btplan.trees.model.TreeModel`: The parsed document
    """
    data = Path(path).read_bytes()
    match = _DECLARED_RE.match(data)
    encoding = match.group(1).decode("ascii") if match else "utf-8"
    try:
        text = data.decode(encoding)
    except (LookupError, UnicodeDecodeError) as err:
        raise MalformedXml(f"Cannot decode `{path}` as {encoding}: {err}") from None
    return parse(text)


