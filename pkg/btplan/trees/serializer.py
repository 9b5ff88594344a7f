"""
Writing :class:`~btplan.trees.model.TreeModel` instances as XML

The canonical form indents by four spaces, places one element per line, writes empty
elements as self-closing tags, and preserves the order of attributes.

.. autosummary::
   :nosignatures:

   serialize
"""

from lxml import etree

from .model import RawNode, TreeModel
from .parser import FORMAT_ATTRIBUTE, MAIN_ATTRIBUTE, ROOT_ELEMENT, TREE_ELEMENT

INDENT = "    "


def _append(parent, node: RawNode) -> None:
    element = etree.SubElement(parent, node.element_name)
    for key, value in node.attributes.items():
        element.set(key, value)
    for child in node.children:
        _append(element, child)


def serialize(model: TreeModel) -> str:
    """return the canonical XML text of a document

    Args:
        model (:class:`~btplan.trees.model.TreeModel`): The document

    Returns:
        str: XML text without declaration and without trailing newline
    """
    root = etree.Element(ROOT_ELEMENT)
    if model.format_version is not None:
        root.set(FORMAT_ATTRIBUTE, model.format_version)
    if model.main_tree_id is not None:
        root.set(MAIN_ATTRIBUTE, model.main_tree_id)
    for key, value in model.attributes.items():
        root.set(key, value)

    for tree in model.trees:
        element = etree.SubElement(root, TREE_ELEMENT)
        element.set("ID", tree.id)
        for key, value in tree.attributes.items():
            element.set(key, value)
        for node in tree.nodes:
            _append(element, node)

    for node in model.extras:
        _append(root, node)

    etree.indent(root, space=INDENT)
    return etree.tostring(root, encoding="unicode")
