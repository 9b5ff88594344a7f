"""
Behavior-tree documents: the data model, parsing, and serialization of the XML
dialect used by BehaviorTree.CPP.

.. autosummary::
   :nosignatures:

   ~model.TreeModel
   ~model.NamedTree
   ~model.RawNode
   ~model.select_main_tree
   ~parser.parse
   ~parser.parse_file
   ~serializer.serialize
"""

from .model import (
    AmbiguousMain,
    DanglingMain,
    MainTreeError,
    NamedTree,
    RawNode,
    TreeModel,
    select_main_tree,
)
from .nodes import NodeKind, resolve_node
from .parser import (
    DuplicateAttribute,
    DuplicateTreeId,
    MalformedXml,
    MissingTreeId,
    NoRootElement,
    NoTrees,
    ParseError,
    UnsupportedFormat,
    parse,
    parse_file,
)
from .serializer import serialize
