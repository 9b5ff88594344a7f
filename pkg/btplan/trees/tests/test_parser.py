import pytest

from btplan.trees import (
    DuplicateAttribute,
    DuplicateTreeId,
    MalformedXml,
    MissingTreeId,
    NoRootElement,
    NoTrees,
    UnsupportedFormat,
    parse,
    parse_file,
)

DATASET_EXAMPLE = """<root BTCPP_format="4">
    <BehaviorTree ID="MainTree">
        <Sequence>
            <GoPoint point="1,2"/>
            <GoObject object="box"/>
        </Sequence>
    </BehaviorTree>
</root>"""


def test_parse_simple():
    """test parsing a small document"""
    model = parse(DATASET_EXAMPLE)
    assert model.format_version == "4"
    assert model.main_tree_id is None
    assert model.tree_ids == ["MainTree"]
    assert model.count_nodes() == 3

    root = model.trees[0].root
    assert root.element_name == "Sequence"
    assert [c.element_name for c in root.children] == ["GoPoint", "GoObject"]
    assert root.children[0].attributes == {"point": "1,2"}
    assert model.select_main_tree() == "MainTree"


def test_parse_minimal():
    """test the smallest useful document"""
    text = '<root><BehaviorTree ID="T"><AlwaysSuccess/></BehaviorTree></root>'
    model = parse(text)
    assert len(model.trees) == 1
    assert model.select_main_tree() == "T"
    assert model.trees[0].root.source_span == (1, 28)


def test_parse_source_spans():
    """test that every node carries its position"""
    model = parse(DATASET_EXAMPLE)
    spans = [node.source_span for _, node in model.iter_nodes()]
    assert spans == [(3, 9), (4, 13), (5, 13)]
    assert model.trees[0].source_span == (2, 5)


def test_parse_spans_with_comments():
    """test that comments mentioning tags do not shift positions"""
    text = """<root>
<!-- <Sequence> is commented out -->
<BehaviorTree ID="T">
  <Fallback><AlwaysFailure/></Fallback>
</BehaviorTree>
</root>"""
    model = parse(text)
    assert model.trees[0].root.source_span == (4, 3)
    assert model.trees[0].root.children[0].source_span == (4, 13)


def test_parse_keeps_unknown():
    """test that unknown elements and attributes are retained"""
    text = """<root main_tree_to_execute="A" project="demo">
        <BehaviorTree ID="A"><Foo bar="1" baz="2"><Baz/></Foo></BehaviorTree>
        <TreeNodesModel><Action ID="Foo"/></TreeNodesModel>
    </root>"""
    model = parse(text)
    assert model.main_tree_id == "A"
    assert model.attributes == {"project": "demo"}
    node = model.trees[0].root
    assert list(node.attributes.items()) == [("bar", "1"), ("baz", "2")]
    assert node.children[0].element_name == "Baz"
    assert [e.element_name for e in model.extras] == ["TreeNodesModel"]


def test_parse_drops_comments():
    """test that comments are removed"""
    text = '<root><BehaviorTree ID="T"><!-- x --><Sequence><!-- y --><A/></Sequence>'
    text += "</BehaviorTree></root>"
    model = parse(text)
    assert model.count_nodes() == 2


@pytest.mark.parametrize(
    "text,error",
    [
        ("<root><BehaviorTree ID='T'><Sequence></BehaviorTree></root>", MalformedXml),
        ("no xml at all", MalformedXml),
        ("", MalformedXml),
        ("<tree><BehaviorTree ID='T'><A/></BehaviorTree></tree>", NoRootElement),
        ("<root><Sequence/></root>", NoTrees),
        ("<root><BehaviorTree><A/></BehaviorTree></root>", MissingTreeId),
        (
            "<root><BehaviorTree ID='T'/><BehaviorTree ID='T'/></root>",
            DuplicateTreeId,
        ),
        ("<root BTCPP_format='9'><BehaviorTree ID='T'/></root>", UnsupportedFormat),
        (
            "<root><BehaviorTree ID='T'><A x='1' x='2'/></BehaviorTree></root>",
            DuplicateAttribute,
        ),
    ],
)
def test_parse_errors(text, error):
    """test errors raised for invalid documents"""
    with pytest.raises(error):
        parse(text)


def test_parse_error_position():
    """test that syntax errors carry their location"""
    text = "<root>\n<BehaviorTree ID='T'>\n<Sequence>\n</BehaviorTree>\n</root>"
    with pytest.raises(MalformedXml) as info:
        parse(text)
    assert info.value.line == 4
    assert "line 4" in str(info.value)


def test_duplicate_attribute_is_malformed():
    """test that duplicate attributes are a kind of malformed XML"""
    assert issubclass(DuplicateAttribute, MalformedXml)


def test_parse_file(tmp_path):
    """test reading a document from disk"""
    path = tmp_path / "tree.xml"
    path.write_text(DATASET_EXAMPLE, encoding="utf-8")
    assert parse_file(path).structure() == parse(DATASET_EXAMPLE).structure()


def test_parse_invalid_character():
    """test that characters without an encoding are positioned syntax errors"""
    text = '<root>\n<BehaviorTree ID="T"><A note="\ud800"/></BehaviorTree></root>'
    with pytest.raises(MalformedXml) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (2, 31)
    assert "U+D800" in str(info.value)


@pytest.mark.parametrize(
    "declaration",
    [
        '<?xml version="1.0" encoding="ISO-8859-1"?>',
        "<?xml version='1.0' encoding='latin-1' standalone='yes'?>",
        '<?xml version="1.0" encoding="UTF-8"?>',
    ],
)
def test_parse_declared_encoding(declaration, tmp_path):
    """test documents declaring an encoding"""
    text = f'{declaration}\n<root><BehaviorTree ID="T"><A note="caffè"/>'
    text += "</BehaviorTree></root>"
    node = parse(text).trees[0].root
    assert node.attributes == {"note": "caffè"}
    assert node.source_span == (2, 28)

    if "UTF" not in declaration:
        path = tmp_path / "tree.xml"
        path.write_bytes(text.encode("latin-1"))
        assert parse_file(path).trees[0].root.attributes == {"note": "caffè"}


def test_parse_file_undecodable(tmp_path):
    """test files whose bytes do not match their encoding"""
    path = tmp_path / "tree.xml"
    data = b'<root><BehaviorTree ID="T"><A note="caf\xe8"/></BehaviorTree></root>'
    path.write_bytes(data)
    with pytest.raises(MalformedXml):
        parse_file(path)
