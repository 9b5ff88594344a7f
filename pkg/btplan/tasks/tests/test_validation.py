import pytest

from btplan.analysis import count_errors, lint, repair
from btplan.engine import NodeStatus, build_tree, run_to_completion
from btplan.tasks import (
    EnvironmentHost,
    FailureClass,
    bundled_mutants,
    bundled_repair_corpus,
    golden_tree_path,
    load_bundled_task,
    load_task_spec,
    validate,
)
from btplan.trees import parse, parse_file, serialize

MUTANTS = bundled_mutants()
REPAIR_CORPUS = bundled_repair_corpus()


def wrap(body: str) -> str:
    tree = f'<BehaviorTree ID="MainTree">{body}</BehaviorTree>'
    return f'<root BTCPP_format="4">{tree}</root>'


@pytest.mark.parametrize("task_id", range(1, 10))
def test_golden_trees(task_id):
    """test that the reference solution of every task passes"""
    spec = load_bundled_task(task_id)
    verdict = validate(parse_file(golden_tree_path(task_id)), spec)
    assert verdict.passed, verdict.reasons
    assert verdict.reasons == []
    assert verdict.failure_class is None
    assert verdict.root_status == NodeStatus.SUCCESS
    assert not verdict.truncated


@pytest.mark.parametrize("task_id", range(1, 10))
def test_example_pairs_lint_clean(task_id):
    """test that the one-shot examples only use the task catalog"""
    spec = load_bundled_task(task_id)
    model = parse(spec.example_pair.tree_xml)
    assert count_errors(lint(model, spec.action_catalog)) == 0


@pytest.mark.parametrize("mutant", MUTANTS, ids=lambda m: f"task{m.task}-{m.name}")
def test_mutants(mutant):
    """test that every mutant fails with its expected class"""
    spec = load_bundled_task(mutant.task)
    verdict = validate(parse_file(mutant.path), spec)
    assert not verdict.passed
    assert verdict.reasons
    assert verdict.failure_class == FailureClass(mutant.failure_class)


@pytest.mark.parametrize("task_id", range(1, 10))
def test_mutant_faults(task_id):
    """test that every task has rejected mutants of the common fault kinds"""
    spec = load_bundled_task(task_id)
    mutants = [m for m in MUTANTS if m.task == task_id]
    faults = {m.fault for m in mutants}
    assert {
        "shuffled_order",
        "dropped_action",
        "extra_parameter",
        "wrong_structure",
    } <= faults
    for mutant in mutants:
        assert not validate(parse_file(mutant.path), spec).passed
        if mutant.fault == "extra_parameter":
            assert mutant.failure_class == "lint"
            assert mutant.repairable


@pytest.mark.parametrize("mutant", MUTANTS, ids=lambda m: f"task{m.task}-{m.name}")
def test_repair_uplift(mutant):
    """test which mutants pass after subtractive repair"""
    spec = load_bundled_task(mutant.task)
    outcome = repair(parse_file(mutant.path), spec.action_catalog)
    verdict = validate(outcome.repaired, spec)
    assert verdict.passed == mutant.repairable
    if mutant.repairable:
        assert outcome.changed


def test_repair_corpus_size():
    """test that the repair corpus covers every task"""
    assert len(REPAIR_CORPUS) >= 20
    assert {case.task for case in REPAIR_CORPUS} == set(range(1, 10))


@pytest.mark.parametrize("case", REPAIR_CORPUS, ids=lambda c: f"task{c.task}-{c.name}")
def test_repair_corpus(case):
    """test that repaired trees are lint clean and solve their task"""
    spec = load_bundled_task(case.task)
    catalog = spec.action_catalog
    model = parse(case.tree)
    assert count_errors(lint(model, catalog, lenient=False)) > 0
    assert validate(model, spec).failure_class == FailureClass.LINT

    outcome = repair(model, catalog, promote_child=True)
    assert {edit.kind.value for edit in outcome.edits} == set(case.edits)
    assert count_errors(lint(outcome.repaired, catalog, lenient=False)) == 0
    verdict = validate(outcome.repaired, spec)
    assert verdict.passed, verdict.reasons
    assert not repair(outcome.repaired, catalog, promote_child=True).changed


def test_task1_shuffled():
    """test that visiting the locations in another order fails"""
    spec = load_bundled_task(1)
    goals = ["2,3", "0,0", "4,7", "5,11"]
    body = "".join(f'<MoveTo goal="{g}"/>' for g in goals)
    verdict = validate(parse(wrap(f"<Sequence>{body}</Sequence>")), spec)
    assert not verdict.passed
    assert verdict.failure_class == FailureClass.ORDER
    assert "MoveTo(goal=2,3)" in verdict.reasons[0]


def test_task1_extra_actions_tolerated():
    """test that additional actions do not break ordered matching"""
    spec = load_bundled_task(1)
    goals = ["0,0", "1,1", "2,3", "4,7", "4,7", "5,11"]
    body = "".join(f'<MoveTo goal="{g}"/>' for g in goals)
    assert validate(parse(wrap(f"<Sequence>{body}</Sequence>")), spec).passed


def test_task2_golden_trace():
    """test that the golden tree of task 2 visits hot locations first"""
    spec = load_bundled_task(2)
    verdict = validate(parse_file(golden_tree_path(2)), spec)
    goals = [event.ports["goal"] for event in verdict.trace.action_events()]
    assert goals == ["1,2", "3,4", "5,1", "6,6"]


def test_lint_stage():
    """test that trees with parameter format mismatches fail before execution"""
    spec = load_bundled_task(1)
    model = parse(wrap('<Sequence><MoveTo x="0" y="0"/></Sequence>'))
    verdict = validate(model, spec)
    assert verdict.failure_class == FailureClass.LINT
    assert len(verdict.trace) == 0
    assert any("UnknownPort" in reason for reason in verdict.reasons)
    assert any("MissingRequiredPort" in reason for reason in verdict.reasons)


def test_runtime_stage():
    """test that conditions scripted to keep running fail at runtime"""
    spec = load_task_spec(
        {
            "id": 8,
            "title": "broken",
            "prompt": "check",
            "catalog": {"CheckStatus": {"kind": "condition"}},
            "environment": {"defaults": {"CheckStatus": "RUNNING"}},
        }
    )
    verdict = validate(parse(wrap("<CheckStatus/>")), spec)
    assert verdict.failure_class == FailureClass.RUNTIME


def test_root_success_optional():
    """test patterns that accept a failing root"""
    text = """
id: 3
title: optional
prompt: go
catalog:
  MoveTo: {required: [goal]}
environment:
  rules: [{action: MoveTo, status: FAILURE}]
success:
  ordered: [{action: MoveTo, status: FAILURE}]
  require_root_success: FLAG
"""
    model = parse(wrap('<MoveTo goal="1,1"/>'))
    assert not validate(model, load_task_spec(text.replace("FLAG", "true"))).passed
    assert validate(model, load_task_spec(text.replace("FLAG", "false"))).passed


def test_validate_side_effect_free():
    """test that validation neither modifies the model nor depends on history"""
    spec = load_bundled_task(5)
    model = parse_file(golden_tree_path(5))
    before = serialize(model)
    first = validate(model, spec)
    second = validate(model, spec)
    assert serialize(model) == before
    assert first.trace == second.trace
    assert first.to_dict() == second.to_dict()


def test_verdict_to_dict():
    """test the machine-readable form of a verdict"""
    spec = load_bundled_task(3)
    data = validate(parse_file(golden_tree_path(3)), spec).to_dict()
    assert data["passed"] is True
    assert data["failure_class"] is None
    assert data["root_status"] == "SUCCESS"
    assert data["trace"][0]["name"] == "MoveTo"


def test_environment_toggles():
    """test that flags change the answers of the environment"""
    spec = load_bundled_task(6)
    session = EnvironmentHost.from_task(spec).open_session()
    assert session.invoke("DetectTarget", {})[1].status == NodeStatus.FAILURE
    session.invoke("SetJointConfig", {"config": "a"})
    assert not session.flags.get("target_visible", False)
    session.invoke("SetJointConfig", {"config": "b"})
    assert session.flags["target_visible"]
    assert session.invoke("DetectTarget", {})[1].status == NodeStatus.SUCCESS

    # every session starts from the initial state
    session = EnvironmentHost.from_task(spec).open_session()
    assert session.invoke("DetectTarget", {})[1].status == NodeStatus.FAILURE


def test_environment_invocation_rules():
    """test rules that depend on the invocation index"""
    spec = load_bundled_task(5)
    session = EnvironmentHost.from_task(spec).open_session()
    locations = []
    for _ in range(4):
        index, outcome = session.invoke("GetNextLocation", {"location": "{location}"})
        locations.append(outcome.outputs["location"])
    assert locations == ["2,5", "7,3", "4,9", "0,0"]
    assert index == 3


def test_environment_outputs_reach_ports():
    """test that outputs written by the environment are read by later actions"""
    spec = load_bundled_task(7)
    tree = build_tree(parse_file(golden_tree_path(7)), EnvironmentHost.from_task(spec))
    result = run_to_completion(tree)
    pick = [e for e in result.trace.action_events() if e.action == "Pick"]
    assert pick[0].ports == {"pose": "0.42,0.10,0.05"}
