"""Question bank: one free-text item per ontology leaf.

Bank files are JSON of the shape

    { "<leaf>": { "prompt": "...", "accepted": ["...", ...] } }

and must cover every leaf of the graph they are loaded against, no more and
no less.  Marking is exact string equality after normalization, which keeps
verdicts reproducible: no fuzzy matching, no SQL execution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List

from .errors import MissingLeafQuestion, ParseError, UnknownLeaf
from .ontology import OntologyGraph


def normalize_answer(text: str) -> str:
    """Canonical form of a submission.

    Fixed pipeline: trim the ends, collapse internal whitespace runs to one
    space, drop the trailing statement terminator (a semicolon, plus any
    space left around it), then lowercase everything outside single-quoted
    string literals so that quoted values keep their case.  The pipeline is
    idempotent, which is why a run of trailing semicolons is consumed whole
    rather than one per call.
    """
    candidate = " ".join(text.split())
    while candidate.endswith(";"):
        candidate = candidate[:-1].rstrip()

    out: List[str] = []
    in_quotes = False
    for char in candidate:
        if char == "'":
            in_quotes = not in_quotes
            out.append(char)
        elif in_quotes:
            out.append(char)
        else:
            out.append(char.lower())
    return "".join(out)


@dataclass
class QuizItem:
    """Prompt and accepted answers for one leaf; answers stored normalized."""

    leaf: str
    prompt: str
    accepted: List[str]

    def is_correct(self, submission: str) -> bool:
        return normalize_answer(submission) in self.accepted


@dataclass
class QuestionBank:
    items: Dict[str, QuizItem]

    def item_for(self, leaf: str) -> QuizItem:
        try:
            return self.items[leaf]
        except KeyError:
            raise UnknownLeaf(f"bank has no question for leaf {leaf!r}") from None


def load_bank(text: str, graph: OntologyGraph) -> QuestionBank:
    """Parse bank JSON and check totality against the graph's leaves.

    Accepted answers are normalized on load, so later comparisons reduce to
    set membership; normalization is idempotent, so an author who already
    writes canonical strings sees them stored verbatim.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bank is not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise ParseError("bank top level must be an object keyed by leaf id")

    graph_leaves = [
        leaf.id for parent in graph.parents for leaf in parent.leaves
    ]
    for leaf in payload:
        if leaf not in graph_leaves:
            raise UnknownLeaf(
                f"bank question {leaf!r} matches no leaf in the graph"
            )
    for leaf in graph_leaves:
        if leaf not in payload:
            raise MissingLeafQuestion(f"bank lacks a question for {leaf!r}")

    items: Dict[str, QuizItem] = {}
    for leaf, entry in payload.items():
        if not isinstance(entry, dict):
            raise ParseError(f"bank entry for {leaf!r} must be an object")
        prompt = entry.get("prompt")
        accepted = entry.get("accepted")
        if not isinstance(prompt, str) or not prompt.strip():
            raise ParseError(f"bank entry for {leaf!r} needs a prompt string")
        if (
            not isinstance(accepted, list)
            or not accepted
            or not all(isinstance(a, str) for a in accepted)
        ):
            raise ParseError(
                f"bank entry for {leaf!r} needs a non-empty accepted list"
            )
        items[leaf] = QuizItem(
            leaf=leaf,
            prompt=prompt,
            accepted=[normalize_answer(a) for a in accepted],
        )
    return QuestionBank(items=items)
