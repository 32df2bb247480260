"""One-vs-all classified rules generated from a regular ontology.

Every parent concept that has a prerequisite gets one rule per possible
pass/fail vector over the prerequisite's leaves, so given a complete quiz
outcome exactly one rule fires.  A single default rule covers the chain
bottom, whose readiness is never assessed.  Rule actions are materialized
eagerly with resolved content URLs, mirroring a classifier whose whole
decision table lives in its plan library.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from .errors import BadVectorLength, UnknownConcept
from .ontology import OntologyGraph, RegularParams, validate_regular


class Outcome(Enum):
    """Result of one quiz question after all permitted attempts."""

    PASS = "pass"
    FAIL = "fail"

    @property
    def letter(self) -> str:
        return "P" if self is Outcome.PASS else "F"


OutcomeVector = Tuple[Outcome, ...]


class Verdict(Enum):
    """What a fired rule tells the student to study next."""

    READY_FOR_DESIRED = "ready_for_desired"
    REMEDIATE_LEAVES = "remediate_leaves"
    DESCEND_PREREQUISITE = "descend_prerequisite"
    DIRECT_CONTENT = "direct_content"


@dataclass
class Recommendation:
    """A verdict plus the ordered content targets that realize it."""

    verdict: Verdict
    targets: List[Tuple[str, str]]  # (concept id, content URL)

    def target_ids(self) -> List[str]:
        return [concept for concept, _ in self.targets]


@dataclass
class ClassifyPolicy:
    """Knobs that shape rule actions and quiz behaviour.

    deep_descent routes an all-fail outcome to the prerequisite's own
    prerequisite instead of re-teaching the failed leaves; when the assessed
    concept is already the chain bottom there is nothing deeper, so the
    leaf route is used regardless.  max_attempts is how often one question
    may be retried before its outcome is frozen.
    """

    deep_descent: bool = False
    max_attempts: int = 2


@dataclass
class ClassifiedRule:
    """One row of the decision table.

    The default rule for the chain bottom has no assessed prerequisite and
    no condition; every other rule matches exactly one outcome vector.
    """

    label: str
    desired: str
    assessed_prereq: Optional[str]
    condition: Optional[OutcomeVector]
    action: Recommendation

    def condition_letters(self) -> str:
        if self.condition is None:
            return "-"
        return "".join(outcome.letter for outcome in self.condition)


@dataclass
class RuleSet:
    """All rules for one graph under one policy, in generation order."""

    rules: List[ClassifiedRule]
    params: RegularParams
    policy: ClassifyPolicy = field(default_factory=ClassifyPolicy)


def generate_rules(
    graph: OntologyGraph,
    policy: Optional[ClassifyPolicy] = None,
) -> RuleSet:
    """Materialize the full decision table for a regular graph.

    Per linked concept, vectors are enumerated from all-pass down to
    all-fail (first leaf is the most significant position, pass = 1), so
    labels are stable across runs.  Labels are @d1, @d2, ... in generation
    order, chain bottom's default rule last.
    """
    policy = policy or ClassifyPolicy()
    params = validate_regular(graph)
    n = params.leaves_per_parent

    rules: List[ClassifiedRule] = []
    label_counter = 0

    def next_label() -> str:
        nonlocal label_counter
        label_counter += 1
        return f"@d{label_counter}"

    for node in graph.parents:
        prereq = graph.prereq_edges.get(node.id)
        if prereq is None:
            continue
        leaves = graph.leaves_of(prereq)
        deeper = graph.prereq_edges.get(prereq)
        for value in range(2 ** n - 1, -1, -1):
            condition = tuple(
                Outcome.PASS if value >> (n - 1 - position) & 1 else Outcome.FAIL
                for position in range(n)
            )
            action = _action_for(graph, policy, node.id, prereq, deeper,
                                 leaves, condition)
            rules.append(ClassifiedRule(
                label=next_label(),
                desired=node.id,
                assessed_prereq=prereq,
                condition=condition,
                action=action,
            ))

    least = graph.least_concept()
    rules.append(ClassifiedRule(
        label=next_label(),
        desired=least,
        assessed_prereq=None,
        condition=None,
        action=Recommendation(
            verdict=Verdict.DIRECT_CONTENT,
            targets=[(least, graph.content_url(least))],
        ),
    ))
    return RuleSet(rules=rules, params=params, policy=policy)


def _action_for(
    graph: OntologyGraph,
    policy: ClassifyPolicy,
    desired: str,
    prereq: str,
    deeper: Optional[str],
    leaves,
    condition: OutcomeVector,
) -> Recommendation:
    if all(outcome is Outcome.PASS for outcome in condition):
        return Recommendation(
            verdict=Verdict.READY_FOR_DESIRED,
            targets=[(desired, graph.content_url(desired))],
        )
    failed = [
        leaf for leaf, outcome in zip(leaves, condition)
        if outcome is Outcome.FAIL
    ]
    all_failed = len(failed) == len(condition)
    if all_failed and policy.deep_descent and deeper is not None:
        return Recommendation(
            verdict=Verdict.DESCEND_PREREQUISITE,
            targets=[(deeper, graph.content_url(deeper))],
        )
    return Recommendation(
        verdict=Verdict.REMEDIATE_LEAVES,
        targets=[(leaf.id, leaf.content) for leaf in failed],
    )


def classify(
    ruleset: RuleSet,
    desired: str,
    outcome: OutcomeVector,
) -> Recommendation:
    """Fire the unique rule matching a desired concept and outcome vector.

    The chain bottom takes an empty vector and resolves to the default
    rule; every other concept needs a full-length vector.  The scan is
    linear on purpose: with one-vs-all generation exactly one rule can
    match, and rule sets stay small in practice.
    """
    candidates = [rule for rule in ruleset.rules if rule.desired == desired]
    if not candidates:
        raise UnknownConcept(f"no rules generated for concept {desired!r}")

    expected_len = 0 if candidates[0].condition is None \
        else ruleset.params.leaves_per_parent
    if len(outcome) != expected_len:
        raise BadVectorLength(
            f"{desired!r} expects an outcome vector of length "
            f"{expected_len}, got {len(outcome)}"
        )
    for rule in candidates:
        if rule.condition is None or rule.condition == tuple(outcome):
            return rule.action
    raise BadVectorLength(
        f"no rule of {desired!r} matches {outcome!r}"
    )


@dataclass
class CountReport:
    """Cross-check of the generated table against the closed form."""

    expected: int
    actual: int

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def verify_count(ruleset: RuleSet) -> CountReport:
    from .rulecalc import estimate_rules

    expected = estimate_rules(
        ruleset.params.parent_steps, ruleset.params.leaves_per_parent
    )
    return CountReport(expected=expected, actual=len(ruleset.rules))


# --- rendering --------------------------------------------------------------

def render_rules_text(ruleset: RuleSet) -> str:
    """One rule per line: label, desired, condition letters, action."""
    lines = []
    for rule in ruleset.rules:
        targets = " ".join(rule.action.target_ids())
        lines.append(
            f"{rule.label} {rule.desired} {rule.condition_letters()} "
            f"-> {rule.action.verdict.value} {targets}"
        )
    return "\n".join(lines) + "\n"


def rules_to_json(ruleset: RuleSet) -> str:
    """The same table as render_rules_text, as a JSON document."""
    payload = [
        {
            "label": rule.label,
            "desired": rule.desired,
            "assessed_prereq": rule.assessed_prereq,
            "condition": None if rule.condition is None
            else rule.condition_letters(),
            "verdict": rule.action.verdict.value,
            "targets": [
                {"concept": concept, "url": url}
                for concept, url in rule.action.targets
            ],
        }
        for rule in ruleset.rules
    ]
    return json.dumps(payload, indent=2) + "\n"
