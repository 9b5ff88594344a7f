import json

import pytest

from btplan.analysis import (
    ActionCatalog,
    DiagnosticCode,
    Severity,
    diagnostics_to_json,
    format_diagnostics,
    is_syntactically_correct,
    lint,
)
from btplan.trees import NamedTree, RawNode, TreeModel, parse

CATALOG = ActionCatalog.from_dict(
    {
        "MoveTo": {"required": ["goal"]},
        "ActivateArm": {},
        "IsDone": {"kind": "condition"},
        "Pick": {"required": ["pose"], "optional": ["force"]},
    }
)


def doc(body: str, **root_attributes) -> TreeModel:
    """wrap a tree body into a document with a single tree"""
    attrs = "".join(f' {k}="{v}"' for k, v in root_attributes.items())
    return parse(f'<root{attrs}><BehaviorTree ID="T">{body}</BehaviorTree></root>')


def codes(diagnostics, severity=None):
    return [
        d.code for d in diagnostics if severity is None or d.severity == severity
    ]


def test_lint_clean():
    """test that valid trees produce no errors"""
    model = doc(
        '<Sequence><MoveTo goal="0,0"/><MoveTo goal="2,3"/><MoveTo goal="4,7"/>'
        '<MoveTo name="last" goal="5,11"/></Sequence>'
    )
    assert lint(model, CATALOG) == []
    assert is_syntactically_correct(model, CATALOG)

    model = doc(
        '<Sequence><Action ID="MoveTo" goal="2,1"/><ActivateArm/>'
        '<Condition ID="IsDone"/><RetryUntilSuccessful num_attempts="3">'
        '<Pick pose="{p}"/></RetryUntilSuccessful></Sequence>'
    )
    assert lint(model, CATALOG) == []


def test_lint_unknown_port():
    """test extra parameters on leaves"""
    model = doc('<Sequence><MoveTo goal="1,1" speed="3"/></Sequence>')
    diagnostics = lint(model, CATALOG)
    assert codes(diagnostics) == [DiagnosticCode.UNKNOWN_PORT]
    (diagnostic,) = diagnostics
    assert diagnostic.severity == Severity.ERROR
    assert diagnostic.path == (0, 0, 0)
    assert "speed" in diagnostic.message
    assert diagnostic.span == (1, 38)


def test_lint_missing_port():
    """test missing required ports"""
    model = doc("<Sequence><MoveTo/><Repeat><IsDone/></Repeat></Sequence>")
    diagnostics = lint(model, CATALOG)
    assert codes(diagnostics) == [DiagnosticCode.MISSING_REQUIRED_PORT] * 2
    assert [d.path for d in diagnostics] == [(0, 0, 0), (0, 0, 1)]


def test_lint_structure():
    """test structural errors of control nodes"""
    model = doc("<Inverter><MoveTo goal='1'/><MoveTo goal='2'/></Inverter>")
    assert codes(lint(model, CATALOG)) == [DiagnosticCode.DECORATOR_ARITY]

    model = doc("<Sequence><Fallback/><ForceSuccess/></Sequence>")
    assert codes(lint(model, CATALOG)) == [DiagnosticCode.CONTROL_NO_CHILDREN] * 2

    model = doc("<Sequence><MoveTo goal='1'><ActivateArm/></MoveTo></Sequence>")
    assert codes(lint(model, CATALOG)) == [DiagnosticCode.LEAF_WITH_CHILDREN]

    model = doc("<Sequence><Action/></Sequence>")
    assert codes(lint(model, CATALOG)) == [DiagnosticCode.MISSING_NODE_ID]

    model = doc("<Repeat num_cycles='many'><ActivateArm/></Repeat>")
    assert codes(lint(model, CATALOG)) == [DiagnosticCode.INVALID_PORT_VALUE]


def test_lint_unknown_nodes():
    """test elements missing from the dialect and the catalog"""
    model = doc("<Sequence><CheckWeather/><Retry><ActivateArm/></Retry></Sequence>")
    diagnostics = lint(model, CATALOG)
    assert codes(diagnostics) == [
        DiagnosticCode.UNKNOWN_ACTION,
        DiagnosticCode.UNKNOWN_NODE_KIND,
    ]
    assert is_syntactically_correct(model, CATALOG) is False

    # lenient mode accepts unknown leaves but not unknown composites
    diagnostics = lint(model, CATALOG, lenient=True)
    assert codes(diagnostics, Severity.WARNING) == [DiagnosticCode.UNKNOWN_ACTION]
    assert codes(diagnostics, Severity.ERROR) == [DiagnosticCode.UNKNOWN_NODE_KIND]


def test_lint_warnings():
    """test findings that do not affect correctness"""
    model = doc(
        '<Sequence name="main" memory="true"><Action ID="IsDone"/>'
        '<Condition ID="MoveTo" goal="1"/></Sequence>'
    )
    diagnostics = lint(model, CATALOG)
    assert codes(diagnostics) == [
        DiagnosticCode.UNKNOWN_ATTRIBUTE_ON_CONTROL,
        DiagnosticCode.KIND_MISMATCH,
        DiagnosticCode.KIND_MISMATCH,
    ]
    assert all(d.severity == Severity.WARNING for d in diagnostics)
    assert is_syntactically_correct(model, CATALOG)


def test_lint_subtrees():
    """test references between trees"""
    model = doc('<Sequence><SubTree ID="PickRoutine"/></Sequence>')
    assert codes(lint(model, CATALOG)) == [DiagnosticCode.UNRESOLVED_SUBTREE]
    assert not is_syntactically_correct(model, CATALOG)

    text = """<root main_tree_to_execute="Main">
        <BehaviorTree ID="Main"><SubTree ID="Sub" goal="{g}"/></BehaviorTree>
        <BehaviorTree ID="Sub"><MoveTo goal="{goal}"/></BehaviorTree>
        <BehaviorTree ID="Spare"><ActivateArm/></BehaviorTree>
    </root>"""
    diagnostics = lint(parse(text), CATALOG)
    assert codes(diagnostics) == [DiagnosticCode.UNUSED_TREE]
    assert diagnostics[0].path == (2,)

    text = """<root main_tree_to_execute="A">
        <BehaviorTree ID="A"><SubTree ID="B"/></BehaviorTree>
        <BehaviorTree ID="B"><SubTree ID="A"/></BehaviorTree>
    </root>"""
    diagnostics = lint(parse(text), CATALOG)
    assert codes(diagnostics) == [DiagnosticCode.RECURSIVE_SUBTREE]
    assert diagnostics[0].path == (1, 0)


def test_lint_document():
    """test findings about the document as a whole"""
    text = """<root>
        <BehaviorTree ID="A"><ActivateArm/></BehaviorTree>
        <BehaviorTree ID="B"/>
        <Palette/>
    </root>"""
    diagnostics = lint(parse(text), CATALOG)
    assert codes(diagnostics) == [
        DiagnosticCode.AMBIGUOUS_MAIN,
        DiagnosticCode.UNKNOWN_ROOT_ELEMENT,
        DiagnosticCode.EMPTY_TREE,
    ]
    assert [d.path for d in diagnostics] == [(), (), (1,)]

    model = doc("<ActivateArm/>", main_tree_to_execute="X")
    assert codes(lint(model, CATALOG)) == [DiagnosticCode.DANGLING_MAIN]

    model = doc("<ActivateArm/><ActivateArm/>")
    assert codes(lint(model, CATALOG)) == [DiagnosticCode.TREE_ROOT_ARITY]

    tree = NamedTree("T", [RawNode("ActivateArm")])
    model = TreeModel([tree, tree], main_tree_id="T")
    assert DiagnosticCode.DUPLICATE_TREE_ID in codes(lint(model, CATALOG))
    assert not is_syntactically_correct(model, CATALOG)


def test_lint_paths_resolve():
    """test that all diagnostics point to existing elements"""
    model = doc(
        "<Sequence><Foo><Bar/></Foo><Inverter/><MoveTo x='1'/><Action/></Sequence>"
    )
    diagnostics = lint(model, CATALOG)
    assert len(diagnostics) == 6
    for diagnostic in diagnostics:
        model.node_at(diagnostic.path)  # does not raise
    assert diagnostics == lint(model, CATALOG)
    assert [d.path for d in diagnostics] == sorted(d.path for d in diagnostics)


def test_lint_report():
    """test the textual and machine-readable reports"""
    model = doc('<Sequence><MoveTo goal="1" speed="3"/><Mystery/></Sequence>')
    diagnostics = lint(model, CATALOG)
    report = json.loads(diagnostics_to_json(diagnostics))
    assert report["errors"] == 2
    assert report["warnings"] == 0
    record = report["diagnostics"][0]
    assert record == {
        "code": "UnknownPort",
        "severity": "error",
        "message": record["message"],
        "line": 1,
        "column": 38,
        "path": [0, 0, 0],
    }
    text = format_diagnostics(diagnostics)
    assert len(text.splitlines()) == 2
    assert "1:38 error UnknownPort" in text
