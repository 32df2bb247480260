"""Acceptance gate: one test per headline behaviour of the package.

Each test here pins a user-visible contract end to end: the rule-count
algebra series, the sweep dataset, the generated decision table, the
reference quiz replay with its timing analytics, bus determinism, and the
frozen conversation trace.  The conftest hook prints one PASS/FAIL line
per test so a run of this file reads as a checklist.
"""

import random
import time
from pathlib import Path

import pytest

import preassess as pa
from preassess.errors import InvalidN
from preassess.mas import (
    WILDCARD,
    Agent,
    Literal,
    MessageBus,
    Performative,
    serialize_trace,
)
from preassess.rules import Outcome, Verdict
from helpers import UPDATE_REPLAY_CLOCK, build_regular_graph

GOLDEN_DIR = Path(__file__).parent / "golden"

WRONG = "drop table staff"

P = Outcome.PASS
F = Outcome.FAIL


def closed_form(c, n):
    return c * 2 ** n + 1


def test_stepwise_growth_series():
    # Starting at C=3, N=1, R=7, each unit increase of N lands exactly on
    # the next closed-form value, through N=16; the whole series computes
    # in under a second.
    started = time.perf_counter()
    series = [pa.estimate_rules(3, 1)]
    for n in range(2, 17):
        series.append(pa.increment_rules(series[-1], 3, n))
    elapsed = time.perf_counter() - started
    assert series == [
        7, 13, 25, 49, 97, 193, 385, 769, 1537, 3073,
        6145, 12289, 24577, 49153, 98305, 196609,
    ]
    assert elapsed < 1.0


def test_stepwise_shrink_series_and_floor():
    # Starting at C=4, N=5, R=129, each unit decrease of N halves the
    # rule block: 65, 33, 17, 9.  Stepping below N=1 is refused.
    started = time.perf_counter()
    series = []
    rules = 129
    for n in range(5, 1, -1):
        rules = pa.decrement_rules(rules, 4, n)
        series.append(rules)
    elapsed = time.perf_counter() - started
    assert series == [65, 33, 17, 9]
    with pytest.raises(InvalidN):
        pa.decrement_rules(9, 4, 1)
    assert elapsed < 1.0


def test_parameter_sweep_grid():
    # The C=0..6 x N=1..5 sweep reproduces the reference dataset exactly,
    # and its CSV rendering carries all 35 points.
    grid = pa.sweep((0, 6), (1, 5))
    expected = {
        0: [1, 1, 1, 1, 1],
        1: [3, 5, 9, 17, 33],
        2: [5, 9, 17, 33, 65],
        3: [7, 13, 25, 49, 97],
        4: [9, 17, 33, 65, 129],
        5: [11, 21, 41, 81, 161],
        6: [13, 25, 49, 97, 193],
    }
    for c, series in expected.items():
        assert grid.rules_by_c(c) == series, f"C={c}"
    csv_lines = pa.emit_dataset_csv(grid).splitlines()
    assert csv_lines[0] == "C,N,R"
    assert len(csv_lines) == 1 + 35


def test_generated_table_size_matches_closed_form():
    # For every chain of 1..7 parents with 1..5 leaves each, the generated
    # rule table has exactly the closed-form size; all 35 graphs generate
    # within five seconds.
    started = time.perf_counter()
    for parents in range(1, 8):
        for leaves in range(1, 6):
            graph = build_regular_graph(parents, leaves)
            ruleset = pa.generate_rules(graph)
            report = pa.verify_count(ruleset)
            assert report.ok, (parents, leaves, report)
            assert report.expected == closed_form(parents - 1, leaves)
    assert time.perf_counter() - started < 5.0


def test_decision_table_for_delete(sample_ruleset, sample_graph):
    # Wanting delete quizzes insert's two leaves; all four outcome vectors
    # classify as expected under the default policy, and deep descent
    # changes only the all-fail row, routing it to select.
    cases = {
        (P, P): (Verdict.READY_FOR_DESIRED, ["delete"]),
        (P, F): (Verdict.REMEDIATE_LEAVES, ["insert_value"]),
        (F, P): (Verdict.REMEDIATE_LEAVES, ["insert_select"]),
        (F, F): (Verdict.REMEDIATE_LEAVES, ["insert_select", "insert_value"]),
    }
    for vector, (verdict, targets) in cases.items():
        action = pa.classify(sample_ruleset, "delete", vector)
        assert action.verdict is verdict, vector
        assert action.target_ids() == targets, vector

    deep = pa.generate_rules(sample_graph, pa.ClassifyPolicy(deep_descent=True))
    for vector, (verdict, targets) in cases.items():
        action = pa.classify(deep, "delete", vector)
        if vector == (F, F):
            assert action.verdict is Verdict.DESCEND_PREREQUISITE
            assert action.target_ids() == ["select"]
        else:
            assert action.verdict is verdict, vector
            assert action.target_ids() == targets, vector


def test_reference_update_replay(sample_graph, sample_ruleset, sample_bank,
                                 tmp_path):
    # The canonical wanting-UPDATE run: every answer wrong, two attempts
    # per question.  Logged timings give 33 s and 39 s on the first
    # question (average 36.0) and 153 s and 144 s on the second (average
    # 148.5); the recommendation names both failed leaves and the summary
    # remark says the student is not prepared.
    log = pa.EventLog(str(tmp_path / "events.log"))
    session = pa.run_scripted_session(
        "s1", "update", [WRONG] * 4,
        sample_graph, sample_ruleset, sample_bank, log,
        clock=pa.ScriptedClock(UPDATE_REPLAY_CLOCK),
    )
    assert session.recommendation.verdict is Verdict.REMEDIATE_LEAVES
    assert session.recommendation.target_ids() == \
        ["delete_select", "delete_where"]

    summaries = pa.analyze(log.load_history("s1"))
    assert len(summaries) == 1
    summary = summaries[0]
    first, second = summary.tasks
    assert first.attempt_durations[0] == 33
    assert first.attempt_durations == [33, 39]
    assert first.average_duration == 36.0
    assert second.attempt_durations == [153, 144]
    assert second.average_duration == 148.5
    assert first.final_outcome is pa.QuestionOutcome.NOT_PASSED
    assert second.final_outcome is pa.QuestionOutcome.NOT_PASSED
    assert "not prepared to learn update" in summary.remark.lower()
    assert summary.remark == (
        "Not prepared to learn UPDATE; recommended to learn "
        "DELETE_SELECT and DELETE_WHERE."
    )


def _random_bus_script(seed):
    rng = random.Random(seed)
    names = ["a", "b", "c", "d"]
    steps = []
    for _ in range(rng.randint(1, 10)):
        kind = rng.choice(["tell", "achieve", "broadcast", "ask"])
        sender = rng.choice(names)
        receiver = rng.choice([n for n in names if n != sender])
        functor = "goal" if kind == "achieve" else rng.choice(["fact", "news"])
        args = (rng.choice(["x", "y", "z"]), rng.randint(0, 4))
        steps.append((kind, sender, receiver, Literal(functor, args)))
    return steps


def _run_bus_script(steps):
    bus = MessageBus()
    for name in ("a", "b", "c", "d"):
        bus.register(Agent(name))

    def echo(agent, message, inner_bus):
        if agent.name != "d":
            inner_bus.send(agent.name, "d", Performative.TELL,
                           Literal("echo", message.content.args[:1]))

    for name in ("a", "b", "c"):
        bus.agent(name).add_plan(Performative.TELL, "fact", echo)

    for kind, sender, receiver, literal in steps:
        if kind == "tell":
            bus.send(sender, receiver, Performative.TELL, literal)
        elif kind == "achieve":
            bus.send(sender, receiver, Performative.ACHIEVE, literal)
        elif kind == "broadcast":
            bus.broadcast(sender, literal)
        else:
            bus.ask_one(sender, receiver,
                        Literal(literal.functor, (WILDCARD, WILDCARD)))
        bus.dispatch_until_quiescent()
    return bus


def test_bus_determinism_and_belief_invariants():
    # Over one thousand seeded random scripts: replaying a script yields a
    # byte-identical trace, sequence numbers are gap-free and strictly
    # increasing, told facts deduplicate, and achieved goals never enter
    # a belief base.
    for seed in range(1000):
        steps = _random_bus_script(seed)
        bus = _run_bus_script(steps)
        replay = _run_bus_script(steps)
        assert serialize_trace(bus.trace) == serialize_trace(replay.trace), seed

        seqs = [message.seq for message in bus.trace]
        assert seqs == list(range(1, len(seqs) + 1)), seed

        for name in ("a", "b", "c", "d"):
            base = bus.agent(name).beliefs
            beliefs = base.snapshot()
            assert all(lit.functor != "goal" for lit in beliefs), seed
            for literal in beliefs:
                assert not base.add(literal), seed


def test_calculus_properties_exact():
    # Over the full supported plane C=0..64, N=2..20, with exact integer
    # arithmetic: stepping up agrees with the closed form, stepping down
    # inverts stepping up, growing C by one always adds 2**N rules, and
    # doubling N squares the rule block.
    for c in range(0, 65):
        for n in range(2, 21):
            here = closed_form(c, n)
            below = closed_form(c, n - 1)
            assert pa.increment_rules(below, c, n) == here
            if c >= 1:
                assert pa.decrement_rules(here, c, n) == below
            assert closed_form(c + 1, n) - here == 2 ** n
            assert (closed_form(c, 2 * n) - 1) * c == (here - 1) ** 2


def test_reference_trace_bytes(sample_graph, sample_ruleset, sample_bank,
                               tmp_path):
    # The all-fail wanting-UPDATE session reproduces the frozen golden
    # trace byte for byte, and the conversation follows the expected
    # speech-act order.
    log = pa.EventLog(str(tmp_path / "events.log"))
    session = pa.run_scripted_session(
        "s1", "update", [WRONG] * 4,
        sample_graph, sample_ruleset, sample_bank, log,
        clock=pa.ScriptedClock(UPDATE_REPLAY_CLOCK),
    )
    rendered = serialize_trace(session.bus.trace)
    golden = (GOLDEN_DIR / "update_session.trace").read_text(encoding="utf-8")
    assert rendered == golden

    expected_order = [
        ("ag_interface", "ag_material", "exists"),
        ("ag_interface", "ag_support", "value"),
        ("ag_support", "ag_interface", "question"),
        ("ag_interface", "ag_support", "answer"),
        ("ag_support", "ag_student", "record"),
        ("ag_support", "ag_interface", "feedback"),
        ("ag_support", "ag_modelling", "desired_concept"),
        ("ag_support", "ag_modelling", "recommend_material"),
        ("ag_modelling", "ag_material", "has_kb"),
        ("ag_material", "ag_interface", "recommend"),
        ("ag_support", "ag_student", "summary"),
    ]
    flow = [
        (m.sender, m.receiver, m.content.functor) for m in session.bus.trace
    ]
    cursor = 0
    for needle in expected_order:
        while cursor < len(flow) and flow[cursor] != needle:
            cursor += 1
        assert cursor < len(flow), f"{needle} missing or out of order"
        cursor += 1
