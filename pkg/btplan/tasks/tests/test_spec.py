import pytest

from btplan.engine import NodeStatus
from btplan.tasks import (
    SchemaError,
    UnknownActionInRule,
    bundled_mutants,
    bundled_task_ids,
    golden_tree_path,
    load_bundled_task,
    load_task_spec,
)

MINIMAL = """
id: 1
title: Test
prompt: Visit a location
catalog:
  MoveTo: {required: [goal]}
"""


def test_bundled_task_ids():
    """test that all nine tasks are shipped"""
    assert bundled_task_ids() == list(range(1, 10))


def test_task1():
    """test loading the navigation task"""
    spec = load_bundled_task(1)
    assert spec.id == 1
    assert set(spec.action_catalog) == {"MoveTo"}
    assert spec.action_catalog["MoveTo"].required == {"goal"}
    ordered = spec.success.ordered
    assert [m.action for m in ordered] == ["MoveTo"] * 4
    assert [m.ports["goal"] for m in ordered] == ["0,0", "2,3", "4,7", "5,11"]
    assert "(4, 7)" in spec.prompt
    assert spec.example_pair is not None
    assert "MoveTo" in spec.example_pair.tree_xml


def test_task3():
    """test that the fallback task fails one waypoint and forbids retrying it"""
    spec = load_bundled_task("task3")
    rule = spec.environment.rules[0]
    assert rule.action == "MoveTo"
    assert rule.ports == {"goal": "4,2"}
    assert rule.status == NodeStatus.FAILURE
    forbidden = spec.success.forbidden[0]
    assert forbidden.ports == {"goal": "4,2"}
    assert forbidden.occurrence == 1


@pytest.mark.parametrize("task_id", range(1, 10))
def test_bundled_tasks_load(task_id):
    """test that every bundled task and its golden tree are available"""
    spec = load_bundled_task(task_id)
    assert spec.id == task_id
    assert spec.max_ticks > 0
    assert golden_tree_path(task_id).is_file()


def test_unknown_bundled_task():
    """test requesting a task that does not exist"""
    with pytest.raises(KeyError):
        load_bundled_task(12)


def test_minimal_spec():
    """test the defaults of a task document"""
    spec = load_task_spec(MINIMAL)
    assert spec.max_ticks == 100
    assert spec.success.require_root_success
    assert spec.environment.default_status("MoveTo") == NodeStatus.SUCCESS
    assert spec.example_pair is None


def test_numeric_ports():
    """test that numeric port values are read as strings"""
    text = MINIMAL + "success:\n  ordered:\n    - {action: MoveTo, ports: {goal: 3}}\n"
    spec = load_task_spec(text)
    assert spec.success.ordered[0].ports == {"goal": "3"}


@pytest.mark.parametrize(
    "extra, path",
    [
        ("max_ticks: 0\n", "max_ticks"),
        (
            "environment:\n  rules:\n    - {action: MoveTo, status: DONE}\n",
            "environment.rules.0.status",
        ),
        ("colour: red\n", "colour"),
    ],
)
def test_schema_errors(extra, path):
    """test that schema violations name the offending field"""
    with pytest.raises(SchemaError) as info:
        load_task_spec(MINIMAL + extra)
    assert info.value.path == path


def test_schema_error_types():
    """test documents that are not task specifications at all"""
    with pytest.raises(SchemaError):
        load_task_spec("- a\n- b\n")
    with pytest.raises(SchemaError):
        load_task_spec("id: [1\n")
    with pytest.raises(SchemaError) as info:
        load_task_spec("id: 1\ntitle: T\nprompt: P\n")
    assert info.value.path == "catalog"


@pytest.mark.parametrize(
    "extra, path",
    [
        (
            "environment:\n  rules:\n    - {action: Fly, status: FAILURE}\n",
            "environment.rules.0.action",
        ),
        (
            "environment:\n  toggles:\n    - {flag: f, action: Fly}\n",
            "environment.toggles.0.action",
        ),
        (
            "success:\n  forbidden:\n    - {action: Fly}\n",
            "success.forbidden.0.action",
        ),
    ],
)
def test_unknown_action_in_rule(extra, path):
    """test that rules and matchers may only use catalog actions"""
    with pytest.raises(UnknownActionInRule) as info:
        load_task_spec(MINIMAL + extra)
    assert info.value.path == path


def test_bundled_mutants():
    """test that all mutant fixtures exist"""
    mutants = bundled_mutants()
    assert len(mutants) > 9
    for mutant in mutants:
        assert mutant.path.is_file()
