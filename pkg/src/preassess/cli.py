"""Command line for validation, estimates, sweeps, rule dumps, sessions,
log analytics, and serving the HTTP API.

Exit codes: 0 success, 1 domain error (message on stderr), 2 usage error
(argparse's own convention).
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import charts, rulecalc
from .errors import PreassessError
from .ontology import load_ontology, validate_regular
from .question_bank import load_bank
from .rules import ClassifyPolicy, generate_rules, render_rules_text, \
    rules_to_json, verify_count
from .service import ServerConfig, serve
from .session import Phase, PreAssessmentSession
from .student_log import EventLog, analyze


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except PreassessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="preassess",
        description="Prerequisite pre-assessment toolkit",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser(
        "validate", help="parse an ontology file and report its shape"
    )
    cmd.add_argument("ontology")
    cmd.set_defaults(handler=_cmd_validate)

    cmd = commands.add_parser(
        "estimate", help="closed-form rule count for C and N"
    )
    cmd.add_argument("--c", type=int, required=True)
    cmd.add_argument("--n", type=int, required=True)
    cmd.set_defaults(handler=_cmd_estimate)

    cmd = commands.add_parser(
        "increment", help="rule count after raising N by one"
    )
    cmd.add_argument("--r", type=int, required=True)
    cmd.add_argument("--c", type=int, required=True)
    cmd.add_argument("--n-new", type=int, required=True, dest="n_new")
    cmd.set_defaults(handler=_cmd_increment)

    cmd = commands.add_parser(
        "decrement", help="rule count after lowering N by one"
    )
    cmd.add_argument("--r", type=int, required=True)
    cmd.add_argument("--c", type=int, required=True)
    cmd.add_argument("--n-old", type=int, required=True, dest="n_old")
    cmd.set_defaults(handler=_cmd_decrement)

    cmd = commands.add_parser(
        "sweep", help="evaluate the closed form over C and N ranges"
    )
    cmd.add_argument("--c", required=True, help="range like 0..6 or a single value")
    cmd.add_argument("--n", required=True, help="range like 1..5 or a single value")
    cmd.add_argument("--csv", help="write CSV here instead of stdout")
    cmd.add_argument("--svg", help="also write an SVG chart here")
    cmd.add_argument(
        "--axis", choices=("c", "n"), default="n",
        help="chart x axis: c (one line per N) or n (one line per C)",
    )
    cmd.set_defaults(handler=_cmd_sweep)

    cmd = commands.add_parser(
        "rules", help="generate and print the classified rule table"
    )
    cmd.add_argument("ontology")
    cmd.add_argument("--deep-descent", action="store_true")
    cmd.add_argument("--format", choices=("text", "json"), default="text")
    cmd.set_defaults(handler=_cmd_rules)

    cmd = commands.add_parser(
        "session", help="run an interactive pre-assessment in the terminal"
    )
    cmd.add_argument("ontology")
    cmd.add_argument("--bank", required=True)
    cmd.add_argument("--log", required=True)
    cmd.add_argument("--student", required=True)
    cmd.add_argument("--desired", help="skip the interactive concept prompt")
    cmd.add_argument("--deep-descent", action="store_true")
    cmd.add_argument("--max-attempts", type=int, default=2)
    cmd.set_defaults(handler=_cmd_session)

    cmd = commands.add_parser(
        "analyze", help="summarize a student's event log"
    )
    cmd.add_argument("--log", required=True)
    cmd.add_argument("--student", required=True)
    cmd.set_defaults(handler=_cmd_analyze)

    cmd = commands.add_parser("serve", help="run the HTTP API")
    cmd.add_argument("ontology")
    cmd.add_argument("--bank", required=True)
    cmd.add_argument("--log", required=True)
    cmd.add_argument("--host", default="127.0.0.1")
    cmd.add_argument("--port", type=int, default=8000)
    cmd.add_argument("--deep-descent", action="store_true")
    cmd.add_argument("--max-attempts", type=int, default=2)
    cmd.set_defaults(handler=_cmd_serve)

    return parser


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _parse_range(spec: str):
    low, _, high = spec.partition("..") if ".." in spec else (spec, "", spec)
    return int(low), int(high or low)


def _cmd_validate(args) -> int:
    graph = load_ontology(_read(args.ontology))
    params = validate_regular(graph)
    print(f"parents: {' -> '.join(node.id for node in graph.parents)}")
    print(f"prerequisite links (C): {params.parent_steps}")
    print(f"leaves per parent (N): {params.leaves_per_parent}")
    print(f"rules needed: {rulecalc.estimate_rules(params.parent_steps, params.leaves_per_parent)}")
    return 0


def _cmd_estimate(args) -> int:
    print(rulecalc.estimate_rules(args.c, args.n))
    return 0


def _cmd_increment(args) -> int:
    print(rulecalc.increment_rules(args.r, args.c, args.n_new))
    return 0


def _cmd_decrement(args) -> int:
    print(rulecalc.decrement_rules(args.r, args.c, args.n_old))
    return 0


def _cmd_sweep(args) -> int:
    grid = rulecalc.sweep(_parse_range(args.c), _parse_range(args.n))
    csv_text = rulecalc.emit_dataset_csv(grid)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.svg:
        axis = "c_vs_r" if args.axis == "c" else "n_vs_r"
        with open(args.svg, "w", encoding="utf-8") as handle:
            handle.write(charts.emit_plot_svg(grid, axis))
    return 0


def _cmd_rules(args) -> int:
    graph = load_ontology(_read(args.ontology))
    policy = ClassifyPolicy(deep_descent=args.deep_descent)
    ruleset = generate_rules(graph, policy)
    report = verify_count(ruleset)
    if not report.ok:
        print(
            f"error: generated {report.actual} rules, closed form says "
            f"{report.expected}", file=sys.stderr,
        )
        return 1
    if args.format == "json":
        sys.stdout.write(rules_to_json(ruleset))
    else:
        sys.stdout.write(render_rules_text(ruleset))
    return 0


def _cmd_session(args) -> int:
    graph = load_ontology(_read(args.ontology))
    policy = ClassifyPolicy(
        deep_descent=args.deep_descent, max_attempts=args.max_attempts
    )
    ruleset = generate_rules(graph, policy)
    bank = load_bank(_read(args.bank), graph)
    log = EventLog(args.log)

    desired = args.desired
    if not desired:
        desired = input("Which concept do you want to learn? ").strip()
    session = PreAssessmentSession(
        student=args.student,
        desired_raw=desired,
        graph=graph,
        ruleset=ruleset,
        bank=bank,
        log=log,
        policy=policy,
    )
    while session.state.phase is not Phase.DONE:
        prompt = session.next_question()
        if prompt is None:
            session.finalize()
            break
        print(f"\n[{prompt.leaf}] attempt {prompt.attempt} of {prompt.max_attempts}")
        print(prompt.prompt)
        while True:
            answer = input("> ")
            if answer.strip():
                break
            print("Please type an answer.")
        feedback = session.submit_answer(answer)
        print(feedback.message)

    recommendation = session.recommendation
    print(f"\nverdict: {recommendation.verdict.value}")
    for concept, url in recommendation.targets:
        print(f"  study {concept}: {url}")
    return 0


def _cmd_analyze(args) -> int:
    log = EventLog(args.log)
    summaries = analyze(log.load_history(args.student))
    if not summaries:
        print(f"no recorded sessions for {args.student}")
        return 0
    for summary in summaries:
        print(f"desired: {summary.desired}  total {summary.total_duration}s")
        for task in summary.tasks:
            durations = ", ".join(f"{d}s" for d in task.attempt_durations)
            print(
                f"  {task.question}: attempts [{durations}] "
                f"avg {task.average_duration}s -> {task.final_outcome.value}"
            )
        print(f"  remark: {summary.remark}")
    return 0


def _cmd_serve(args) -> int:
    config = ServerConfig(
        ontology_path=args.ontology,
        bank_path=args.bank,
        log_path=args.log,
        host=args.host,
        port=args.port,
        policy=ClassifyPolicy(
            deep_descent=args.deep_descent, max_attempts=args.max_attempts
        ),
    )
    serve(config)
    return 0


if __name__ == "__main__":
    sys.exit(main())
