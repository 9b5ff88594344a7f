import itertools

import numpy as np
import pytest

from btplan.analysis import ActionCatalog
from btplan.engine import (
    EmptyControl,
    HostScriptError,
    InvalidTree,
    MissingRequiredPort,
    NodeStatus,
    Outcome,
    ScriptedHost,
    UnknownAction,
    UnresolvedSubTree,
    build_tree,
    run_to_completion,
    tick_once,
)
from btplan.trees import parse

S, F, R = NodeStatus.SUCCESS, NodeStatus.FAILURE, NodeStatus.RUNNING

CATALOG = ActionCatalog.from_dict(
    {
        "MoveTo": {"required": ["goal"]},
        "A": {},
        "B": {},
        "C": {},
        "Check": {"kind": "condition"},
        "Locate": {"optional": ["target", "pose"]},
        "Use": {"required": ["pose"]},
    }
)


def doc(body: str):
    text = f'<root BTCPP_format="4"><BehaviorTree ID="T">{body}</BehaviorTree></root>'
    return parse(text)


def scripted(**statuses):
    """host whose actions return the given status sequences"""

    def behavior(action, ports, invocation):
        sequence = statuses.get(action, [S])
        return sequence[min(invocation, len(sequence) - 1)]

    return ScriptedHost(CATALOG, behavior)


def actions(result):
    return [(e.name, e.status) for e in result.trace.action_events()]


def test_build_tree():
    """test building executable trees"""
    model = doc('<Sequence><MoveTo goal="1,2"/><MoveTo goal="3,4"/></Sequence>')
    tree = build_tree(model, scripted())
    assert len(tree) == 3
    assert tree.node_table[0] == ("control", "Sequence", {}, [1, 2])
    assert tree.node_table[2] == ("action", "MoveTo", {"goal": "3,4"}, [])

    tree = build_tree(doc('<Action ID="MoveTo" goal="1"/>'), scripted())
    assert len(tree) == 1


@pytest.mark.parametrize(
    "body,error",
    [
        ('<Sequence><MoveTo goal="1"/><CheckReachability/></Sequence>', UnknownAction),
        ("<Sequence><Wrapper><A/></Wrapper></Sequence>", UnknownAction),
        ("<Sequence><Fallback/><A/></Sequence>", EmptyControl),
        ("<Inverter/>", EmptyControl),
        ('<Sequence><SubTree ID="PickRoutine"/></Sequence>', UnresolvedSubTree),
        ("<Sequence><MoveTo/></Sequence>", MissingRequiredPort),
        ("<RetryUntilSuccessful><A/></RetryUntilSuccessful>", MissingRequiredPort),
        ("<Inverter><A/><B/></Inverter>", InvalidTree),
        ('<Repeat num_cycles="x"><A/></Repeat>', InvalidTree),
        ('<Sequence><A speed="2"/></Sequence>', InvalidTree),
        ("<A><B/></A>", InvalidTree),
        ("<A/><B/>", InvalidTree),
        ("", InvalidTree),
    ],
)
def test_build_errors(body, error):
    """test documents that cannot be executed"""
    with pytest.raises(error):
        build_tree(doc(body), scripted())


def test_build_main_tree_errors():
    """test documents without a usable main tree"""
    text = '<root><BehaviorTree ID="A"><A/></BehaviorTree><BehaviorTree ID="B"><B/>'
    text += "</BehaviorTree></root>"
    with pytest.raises(InvalidTree):
        build_tree(parse(text), scripted())
    tree = build_tree(parse(text), scripted(), tree_id="B")
    assert tree.root.name == "B"


@pytest.mark.parametrize(
    "body,status",
    [
        ("<Sequence><AlwaysSuccess/><AlwaysSuccess/></Sequence>", S),
        ("<Fallback><AlwaysFailure/><AlwaysSuccess/></Fallback>", S),
        ("<Inverter><AlwaysFailure/></Inverter>", S),
        ("<Inverter><AlwaysSuccess/></Inverter>", F),
        ("<ForceSuccess><AlwaysFailure/></ForceSuccess>", S),
        ("<ForceFailure><AlwaysSuccess/></ForceFailure>", F),
        ("<Sequence><AlwaysSuccess/><AlwaysFailure/></Sequence>", F),
        ("<Fallback><AlwaysFailure/><AlwaysFailure/></Fallback>", F),
        ("<ReactiveSequence><AlwaysSuccess/></ReactiveSequence>", S),
        ("<ReactiveFallback><AlwaysFailure/></ReactiveFallback>", F),
    ],
)
def test_tick_once(body, status):
    """test the status of simple trees after one tick"""
    tree = build_tree(doc(body), scripted())
    assert tick_once(tree) == status
    assert tree.tick_count == 1


def test_tick_visits_children():
    """test which children are ticked"""
    model = doc("<Sequence><AlwaysSuccess/><AlwaysSuccess/></Sequence>")
    tree = build_tree(model, scripted())
    tick_once(tree)
    names = [e.name for e in tree.trace]
    assert names == ["AlwaysSuccess", "AlwaysSuccess", "Sequence"]

    tree = build_tree(doc("<Fallback><A/><B/></Fallback>"), scripted(A=[F]))
    tick_once(tree)
    events = tree.trace.action_events()
    assert [(e.name, e.status) for e in events] == [("A", F), ("B", S)]


def test_run_task1():
    """test visiting a list of locations"""
    goals = ["0,0", "2,3", "4,7", "5,11"]
    body = "".join(f'<MoveTo goal="{g}"/>' for g in goals)
    tree = build_tree(doc(f"<Sequence>{body}</Sequence>"), scripted())
    result = run_to_completion(tree, max_ticks=10)
    assert result.status == S
    assert result.ticks_used == 1
    assert not result.truncated
    events = result.trace.action_events()
    assert [e.ports["goal"] for e in events] == goals
    assert [e.invocation for e in events] == [0, 1, 2, 3]


def test_run_retry():
    """test retrying a failing action"""
    model = doc('<RetryUntilSuccessful num_attempts="3"><A/></RetryUntilSuccessful>')
    tree = build_tree(model, scripted(A=[F, F, S]))
    result = run_to_completion(tree, max_ticks=5)
    assert result.status == S
    assert actions(result) == [("A", F), ("A", F), ("A", S)]

    tree = build_tree(model, scripted(A=[F]))
    result = run_to_completion(tree, max_ticks=5)
    assert result.status == F
    assert len(actions(result)) == 3

    model = doc('<RetryUntilSesful num_attempts="3"><A/></RetryUntilSesful>')
    with pytest.raises(UnknownAction):
        build_tree(model, scripted())
    model = doc('<RetryUntilSuccesful num_attempts="2"><A/></RetryUntilSuccesful>')
    assert run_to_completion(build_tree(model, scripted(A=[F, S]))).status == S


def test_run_repeat():
    """test repeating an action"""
    model = doc('<Repeat num_cycles="3"><A/></Repeat>')
    result = run_to_completion(build_tree(model, scripted()), max_ticks=5)
    assert result.status == S
    assert len(actions(result)) == 3
    assert result.ticks_used == 1

    result = run_to_completion(build_tree(model, scripted(A=[S, F])), max_ticks=5)
    assert result.status == F
    assert len(actions(result)) == 2


def test_run_truncated():
    """test runs that exhaust the tick budget"""
    model = doc("<KeepRunningUntilFailure><AlwaysSuccess/></KeepRunningUntilFailure>")
    result = run_to_completion(build_tree(model, scripted()), max_ticks=10)
    assert result.status == R
    assert result.truncated
    assert result.ticks_used == 10

    model = doc('<Repeat num_cycles="-1"><A/></Repeat>')
    result = run_to_completion(build_tree(model, scripted()), max_ticks=4)
    assert result.truncated
    assert len(actions(result)) == 4

    with pytest.raises(ValueError):
        run_to_completion(build_tree(model, scripted()), max_ticks=0)


def test_running_actions():
    """test actions that need several ticks"""
    model = doc("<Sequence><A/><B/><C/></Sequence>")
    result = run_to_completion(build_tree(model, scripted(B=[R, R, S])), max_ticks=10)
    assert result.status == S
    assert result.ticks_used == 3
    # the sequence resumes at the running child
    assert actions(result) == [("A", S), ("B", R), ("B", R), ("B", S), ("C", S)]
    ticks = [e.tick for e in result.trace]
    assert ticks == sorted(ticks)


def test_reactive_sequence():
    """test that reactive sequences re-evaluate earlier children"""
    model = doc("<ReactiveSequence><Check/><A/></ReactiveSequence>")
    host = scripted(Check=[S, S, F], A=[R])
    result = run_to_completion(build_tree(model, host), max_ticks=10)
    assert result.status == F
    assert actions(result) == [
        ("Check", S),
        ("A", R),
        ("Check", S),
        ("A", R),
        ("Check", F),
    ]


def test_reactive_fallback_halts_skipped():
    """test halting a running child that is skipped"""
    model = doc(
        "<ReactiveFallback><Check/><Sequence><A/><B/></Sequence></ReactiveFallback>"
    )
    host = scripted(Check=[F, S], B=[R])
    tree = build_tree(model, host)
    assert tick_once(tree) == R
    sequence = tree.root.children[1]
    assert sequence.current == 1
    assert tick_once(tree) == S
    assert sequence.current == 0
    assert sequence.status is None


def test_parallel():
    """test the parallel control node"""
    model = doc('<Parallel success_count="2"><A/><B/><C/></Parallel>')
    result = run_to_completion(build_tree(model, scripted(A=[R, S], B=[F])), 10)
    assert result.status == F  # a single failure suffices by default
    model = doc('<Parallel success_count="2" failure_count="2"><A/><B/><C/></Parallel>')
    result = run_to_completion(build_tree(model, scripted(A=[R, S], B=[F])), 10)
    assert result.status == S
    assert result.ticks_used == 2
    # finished children are not ticked again
    assert [name for name, _ in actions(result)] == ["A", "B", "C", "A"]

    model = doc("<Parallel><A/><B/></Parallel>")
    result = run_to_completion(build_tree(model, scripted(A=[R, R, S])), 10)
    assert result.status == S
    assert result.ticks_used == 3

    model = doc(
        '<Parallel success_threshold="1" failure_threshold="2"><A/><B/></Parallel>'
    )
    result = run_to_completion(build_tree(model, scripted(A=[F])), 10)
    assert result.status == S


def test_timeout():
    """test that timeouts count ticks"""
    model = doc('<Timeout msec="3"><A/></Timeout>')
    result = run_to_completion(build_tree(model, scripted(A=[R])), max_ticks=10)
    assert result.status == F
    assert result.ticks_used == 4
    result = run_to_completion(build_tree(model, scripted(A=[R, R, S])), 10)
    assert result.status == S


def test_condition_running():
    """test that conditions may not keep running"""
    tree = build_tree(doc("<Check/>"), scripted(Check=[R]))
    with pytest.raises(HostScriptError):
        tick_once(tree)

    host = ScriptedHost(CATALOG, lambda action, ports, invocation: "done")
    with pytest.raises(HostScriptError):
        tick_once(build_tree(doc("<A/>"), host))


def test_blackboard_ports():
    """test passing values between nodes"""

    def behavior(action, ports, invocation):
        if action == "Locate":
            return Outcome(S, {"pose": "1,2,3", "target": "ignored"})
        assert ports == {"pose": "1,2,3"}
        return S

    model = doc(
        '<Sequence><Locate target="box" pose="{p}"/><Use pose="{p}"/></Sequence>'
    )
    tree = build_tree(model, ScriptedHost(CATALOG, behavior))
    result = run_to_completion(tree, 5)
    assert result.status == S
    assert tree.blackboard.get("p") == "1,2,3"
    assert result.trace.action_events()[1].ports == {"pose": "1,2,3"}

    # unresolved references are passed on verbatim
    tree = build_tree(doc('<Use pose="{missing}"/>'), scripted())
    run_to_completion(tree, 5)
    assert tree.trace[0].ports == {"pose": "{missing}"}


def test_set_blackboard():
    """test the built-in node writing to the blackboard"""
    model = doc(
        '<Sequence><SetBlackboard value="4,2" output_key="goal"/>'
        '<MoveTo goal="{goal}"/></Sequence>'
    )
    result = run_to_completion(build_tree(model, scripted()), 5)
    assert result.trace.action_events()[0].ports == {"goal": "4,2"}


def test_subtrees():
    """test executing referenced trees with remapped ports"""
    text = """<root main_tree_to_execute="Main">
        <BehaviorTree ID="Main">
            <Sequence>
                <SetBlackboard value="7,7" output_key="target"/>
                <SubTree ID="Go" goal="{target}"/>
                <SubTree ID="Go" goal="1,1"/>
                <SubTree ID="Shared" _autoremap="true"/>
            </Sequence>
        </BehaviorTree>
        <BehaviorTree ID="Go"><MoveTo goal="{goal}"/></BehaviorTree>
        <BehaviorTree ID="Shared"><MoveTo goal="{target}"/></BehaviorTree>
    </root>"""
    tree = build_tree(parse(text), scripted())
    assert tree.node_table[0][3] == [1, 2, 4, 6]
    result = run_to_completion(tree, 5)
    assert result.status == S
    goals = [e.ports["goal"] for e in result.trace.action_events()]
    assert goals == ["7,7", "1,1", "7,7"]
    assert tree.root.children[1].tree_id == "Go"

    text = """<root main_tree_to_execute="A">
        <BehaviorTree ID="A"><SubTree ID="B"/></BehaviorTree>
        <BehaviorTree ID="B"><SubTree ID="A"/></BehaviorTree>
    </root>"""
    with pytest.raises(InvalidTree):
        build_tree(parse(text), scripted())


def test_determinism():
    """test that runs are reproducible"""
    model = doc(
        '<Sequence><RetryUntilSuccessful num_attempts="4"><Fallback><A/><B/>'
        "</Fallback></RetryUntilSuccessful><C/></Sequence>"
    )
    host = scripted(A=[F, R, F, S], B=[F, R, S], C=[R, S])
    first = run_to_completion(build_tree(model, host), 20)
    second = run_to_completion(build_tree(model, host), 20)
    assert first.trace == second.trace
    assert first.status == second.status
    assert first.trace.to_list() == second.trace.to_list()


def assert_leaves_closed(result):
    """check that no leaf ends the trace while running"""
    last = {}
    for event in result.trace:
        if event.kind in {"action", "condition", "leaf"}:
            last[event.node_id] = event
    for event in last.values():
        assert event.status != R, event


def test_timeout_halts_child():
    """test that timeouts record the halt of the running child"""
    model = doc('<Fallback><Timeout msec="2"><A/></Timeout><B/></Fallback>')
    result = run_to_completion(build_tree(model, scripted(A=[R])), max_ticks=10)
    assert result.status == S
    assert not result.truncated
    events = result.trace.action_events(halts=True)
    assert [(e.name, e.status) for e in events] == [
        ("A", R),
        ("A", R),
        ("A", NodeStatus.IDLE),
        ("B", S),
    ]
    assert events[2].tick == 3
    assert actions(result) == [("A", R), ("A", R), ("B", S)]
    assert_leaves_closed(result)


def test_reactive_halts():
    """test that reactive controls record the halt of running children"""
    model = doc("<ReactiveSequence><Check/><A/></ReactiveSequence>")
    host = scripted(Check=[S, S, F], A=[R])
    result = run_to_completion(build_tree(model, host), max_ticks=10)
    events = result.trace.action_events(halts=True)
    assert (events[-1].name, events[-1].status) == ("A", NodeStatus.IDLE)
    assert events[-1].tick == 3
    assert_leaves_closed(result)

    # a running child that is skipped after an earlier child started running
    model = doc("<ReactiveSequence><A/><B/></ReactiveSequence>")
    tree = build_tree(model, scripted(A=[S, R], B=[R]))
    assert tick_once(tree) == R
    assert tick_once(tree) == R
    events = tree.trace.action_events(halts=True)
    assert [(e.name, e.status) for e in events] == [
        ("A", S),
        ("B", R),
        ("A", R),
        ("B", NodeStatus.IDLE),
    ]

    model = doc(
        "<ReactiveFallback><Check/><Sequence><A/><B/></Sequence></ReactiveFallback>"
    )
    result = run_to_completion(build_tree(model, scripted(Check=[F, S], B=[R])), 10)
    assert result.status == S
    halted = [e.name for e in result.trace if e.status == NodeStatus.IDLE]
    assert halted == ["B", "Sequence"]
    assert_leaves_closed(result)


def test_parallel_halts():
    """test that parallel nodes record the halt of unfinished children"""
    model = doc('<Parallel success_count="1"><A/><B/></Parallel>')
    result = run_to_completion(build_tree(model, scripted(A=[R], B=[R, S])), 10)
    assert result.status == S
    events = result.trace.action_events(halts=True)
    assert [(e.name, e.status) for e in events] == [
        ("A", R),
        ("B", R),
        ("A", R),
        ("B", S),
        ("A", NodeStatus.IDLE),
    ]
    assert_leaves_closed(result)


def test_truncation_halts():
    """test that truncated runs halt the running leaves"""
    model = doc("<Sequence><A/><B/></Sequence>")
    result = run_to_completion(build_tree(model, scripted(B=[R])), max_ticks=3)
    assert result.truncated
    assert result.trace[-1].status == NodeStatus.IDLE
    assert result.trace[-1].tick == 3
    assert_leaves_closed(result)

    with pytest.raises(HostScriptError):
        tick_once(build_tree(doc("<A/>"), scripted(A=[NodeStatus.IDLE])))


STATUS_VECTORS = [
    statuses
    for length in range(1, 4)
    for statuses in itertools.product([S, F, R], repeat=length)
]


def tick_children(control: str, statuses, **attrs):
    """tick a control node with leaves returning fixed statuses once"""
    names = ["A", "B", "C"][: len(statuses)]
    attributes = "".join(f' {k}="{v}"' for k, v in attrs.items())
    body = "".join(f"<{name}/>" for name in names)
    model = doc(f"<{control}{attributes}>{body}</{control}>")
    host = scripted(**{name: [s] for name, s in zip(names, statuses)})
    tree = build_tree(model, host)
    status = tick_once(tree)
    return status, len(tree.trace.action_events())


def first_other(statuses, value):
    """brute-force result of a sequence-like scan"""
    for i, status in enumerate(statuses):
        if status != value:
            return status, i + 1
    return value, len(statuses)


def parallel_oracle(statuses, success, failure):
    """brute-force result of ticking a parallel node once"""
    num = len(statuses)
    for k in range(1, num + 1):
        prefix = statuses[:k]
        successes = prefix.count(S)
        failures = prefix.count(F)
        if successes >= success:
            return S, k
        if failures >= failure or num - failures < success:
            return F, k
    return R, num


@pytest.mark.parametrize("statuses", STATUS_VECTORS)
@pytest.mark.parametrize("reactive", [False, True])
def test_sequence_truth_table(statuses, reactive):
    """test sequences against all child results"""
    control = "ReactiveSequence" if reactive else "Sequence"
    assert tick_children(control, statuses) == first_other(statuses, S)


@pytest.mark.parametrize("statuses", STATUS_VECTORS)
@pytest.mark.parametrize("reactive", [False, True])
def test_fallback_truth_table(statuses, reactive):
    """test fallbacks against all child results"""
    control = "ReactiveFallback" if reactive else "Fallback"
    assert tick_children(control, statuses) == first_other(statuses, F)


@pytest.mark.parametrize("statuses", STATUS_VECTORS)
def test_parallel_truth_table(statuses):
    """test parallel nodes against all child results and thresholds"""
    num = len(statuses)
    for success in range(1, num + 1):
        for failure in range(1, num + 1):
            result = tick_children(
                "Parallel", statuses, success_count=success, failure_count=failure
            )
            assert result == parallel_oracle(statuses, success, failure)
    # negative thresholds count from the number of children
    assert tick_children("Parallel", statuses) == parallel_oracle(statuses, num, 1)


def random_tree(rng, depth: int):
    """random nested tuple of controls with leaves `S`, `F`, and `R`"""
    if depth == 0 or rng.random() < 0.25:
        return str(rng.choice(["S", "F", "R"]))
    control = str(rng.choice(["Sequence", "Fallback"]))
    children = [random_tree(rng, depth - 1) for _ in range(rng.integers(1, 4))]
    return (control, children)


def dual_tree(node):
    if isinstance(node, str):
        return {"S": "F", "F": "S", "R": "R"}[node]
    control = "Fallback" if node[0] == "Sequence" else "Sequence"
    return (control, [dual_tree(child) for child in node[1]])


def render_tree(node) -> str:
    leaves = {"S": "<AlwaysSuccess/>", "F": "<AlwaysFailure/>", "R": "<A/>"}
    if isinstance(node, str):
        return leaves[node]
    body = "".join(render_tree(child) for child in node[1])
    return f"<{node[0]}>{body}</{node[0]}>"


def test_sequence_fallback_duality():
    """test that swapping controls and leaf results inverts the result"""
    rng = np.random.default_rng(1)
    for _ in range(200):
        node = random_tree(rng, depth=4)
        tree = build_tree(doc(render_tree(node)), scripted(A=[R]))
        dual = build_tree(doc(render_tree(dual_tree(node))), scripted(A=[R]))
        assert tick_once(tree).inverted() == tick_once(dual)
        assert len(tree.trace) == len(dual.trace)


def test_random_sequences():
    """test ordering and tick counts for trees without running leaves"""
    rng = np.random.default_rng(0)
    for _ in range(50):
        names = rng.choice(["A", "B", "C"], size=rng.integers(1, 6))
        body = "".join(f"<{name}/>" for name in names)
        tree = build_tree(doc(f"<Sequence>{body}</Sequence>"), scripted())
        result = run_to_completion(tree)
        assert result.ticks_used == 1
        assert [e.name for e in result.trace.action_events()] == list(names)
