"""Regular prerequisite ontology: file format, validation, and queries.

A graph holds a handful of parent concepts joined by a single linear
prerequisite chain, each parent carrying an ordered list of leaf topics and
every node carrying a content URL.  "Regular" means all parents agree on the
leaf count, which is what the rule-count algebra in rulecalc assumes.

File grammar (UTF-8, line based, tokens separated by whitespace, `#` starts
a comment at line start or after whitespace):

    concept <id>                  declare a parent; declaration order is chain
                                  order, least concept first
    hasPrerequisite <a> <b>       concept a requires concept b
    hasLeaf <parent> <leaf>       declare a leaf under parent, order kept
    hasContent <node> <url>       content URL for a parent or leaf

Concept ids are canonicalized to lowercase and restricted to [a-z0-9_].
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .errors import (
    BrokenChain,
    CycleDetected,
    DanglingReference,
    EmptyLeaves,
    IrregularLeafCount,
    ParseError,
    UnknownConcept,
    UnknownPredicate,
)

_ID_PATTERN = re.compile(r"^[a-z0-9_]+$")

#: Assessments are binary (pass / fail), so every non-default decision rule
#: branches two ways per leaf.  This is fixed for the whole package.
OUTCOMES_PER_QUESTION = 2


def canonical_concept_id(raw: str) -> str:
    """Lowercase a raw concept name and reject anything outside [a-z0-9_].

    Raises ValueError on empty input or stray characters; callers that need
    a total check should go through OntologyGraph.concept_exists instead.
    """
    candidate = raw.strip().lower()
    if not candidate:
        raise ValueError("concept id is empty")
    if not _ID_PATTERN.match(candidate):
        raise ValueError(f"concept id {raw!r} has characters outside [a-z0-9_]")
    return candidate


@dataclass
class LeafNode:
    """A quizzable sub-topic of a parent concept."""

    id: str
    content: str
    declaration_index: int


@dataclass
class ConceptNode:
    """A parent concept with its ordered leaves and content URL."""

    id: str
    content: str
    leaves: List[LeafNode] = field(default_factory=list)

    def leaf_ids(self) -> List[str]:
        return [leaf.id for leaf in self.leaves]


@dataclass
class RegularParams:
    """Shape parameters of a validated regular graph.

    parent_steps counts the prerequisite links, i.e. parents minus one; the
    rule-count algebra calls this C.  leaves_per_parent is N.
    """

    parent_steps: int
    leaves_per_parent: int
    outcomes_per_question: int = OUTCOMES_PER_QUESTION


@dataclass
class OntologyGraph:
    """Parents in chain order (least concept first) plus the prereq relation.

    prereq_edges maps a concept to the concept it requires.  Exactly one
    parent (the least concept, first in the list) has no entry once the
    graph validates.
    """

    parents: List[ConceptNode]
    prereq_edges: Dict[str, str]

    def __post_init__(self):
        self._parents_by_id = {node.id: node for node in self.parents}
        self._leaves_by_id: Dict[str, LeafNode] = {}
        for node in self.parents:
            for leaf in node.leaves:
                self._leaves_by_id[leaf.id] = leaf

    # -- membership ---------------------------------------------------------

    def is_parent(self, concept: str) -> bool:
        return concept in self._parents_by_id

    def is_leaf(self, concept: str) -> bool:
        return concept in self._leaves_by_id

    def concept_exists(self, raw: str) -> bool:
        """Total membership check over parents and leaves.

        Accepts raw user input; canonicalization failures simply mean the
        concept is not in the graph.
        """
        try:
            concept = canonical_concept_id(raw)
        except ValueError:
            return False
        return self.is_parent(concept) or self.is_leaf(concept)

    def node_ids(self) -> List[str]:
        """All parent and leaf ids, parents in chain order, leaves inline."""
        ids: List[str] = []
        for node in self.parents:
            ids.append(node.id)
            ids.extend(node.leaf_ids())
        return ids

    # -- queries ------------------------------------------------------------

    def parent_node(self, concept: str) -> ConceptNode:
        try:
            return self._parents_by_id[concept]
        except KeyError:
            raise UnknownConcept(f"{concept!r} is not a parent concept") from None

    def least_concept(self) -> str:
        """The chain bottom: the only parent without a prerequisite."""
        return self.parents[0].id

    def prerequisite_of(self, concept: str) -> Optional[str]:
        """Prerequisite parent of a parent concept, none at the chain bottom."""
        self.parent_node(concept)
        return self.prereq_edges.get(concept)

    def leaves_of(self, concept: str) -> List[LeafNode]:
        """Leaves of a parent concept in declaration order."""
        return list(self.parent_node(concept).leaves)

    def content_url(self, node_id: str) -> str:
        """Content URL of a parent or leaf."""
        if node_id in self._parents_by_id:
            return self._parents_by_id[node_id].content
        if node_id in self._leaves_by_id:
            return self._leaves_by_id[node_id].content
        raise UnknownConcept(f"{node_id!r} is not in the graph")


# --- parsing ----------------------------------------------------------------

_PREDICATE_ARITY = {
    "concept": 1,
    "hasPrerequisite": 2,
    "hasLeaf": 2,
    "hasContent": 2,
}


def _strip_comment(line: str) -> str:
    """Drop a `#` comment when it opens the line or follows whitespace.

    A `#` embedded in a token (URL fragments, typically) is kept.
    """
    if line.lstrip().startswith("#"):
        return ""
    for index, char in enumerate(line):
        if char == "#" and index > 0 and line[index - 1] in " \t":
            return line[:index]
    return line


def load_ontology(text: str) -> OntologyGraph:
    """Parse ontology text into a graph, resolving references at the end.

    Detects malformed lines, unknown predicates, duplicate declarations,
    dangling references, prerequisite cycles, and missing content URLs.
    Chain regularity is deliberately left to validate_regular so that a
    structurally suspect graph can still be inspected after loading.
    """
    declared_order: List[str] = []
    leaf_decls: Dict[str, List[str]] = {}
    leaf_owner: Dict[str, str] = {}
    prereq_stmts: List[tuple[int, str, str]] = []
    content: Dict[str, str] = {}

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw_line).strip()
        if not line:
            continue
        tokens = line.split()
        predicate = tokens[0]
        if predicate not in _PREDICATE_ARITY:
            raise UnknownPredicate(f"unknown predicate {predicate!r}", line=lineno)
        arity = _PREDICATE_ARITY[predicate]
        if len(tokens) != arity + 1:
            raise ParseError(
                f"{predicate} expects {arity} argument(s), got {len(tokens) - 1}",
                line=lineno,
            )

        if predicate == "concept":
            concept = _parse_id(tokens[1], lineno)
            if concept in declared_order:
                raise ParseError(f"concept {concept!r} declared twice", line=lineno)
            declared_order.append(concept)
            leaf_decls[concept] = []
        elif predicate == "hasPrerequisite":
            child = _parse_id(tokens[1], lineno)
            prereq = _parse_id(tokens[2], lineno)
            for seen_line, seen_child, _ in prereq_stmts:
                if seen_child == child:
                    raise ParseError(
                        f"concept {child!r} already has a prerequisite "
                        f"(line {seen_line})",
                        line=lineno,
                    )
            prereq_stmts.append((lineno, child, prereq))
        elif predicate == "hasLeaf":
            parent = _parse_id(tokens[1], lineno)
            leaf = _parse_id(tokens[2], lineno)
            if leaf in leaf_owner or leaf in declared_order:
                raise ParseError(f"node {leaf!r} declared twice", line=lineno)
            leaf_owner[leaf] = parent
            leaf_decls.setdefault(parent, []).append(leaf)
        else:  # hasContent
            node = _parse_id(tokens[1], lineno)
            url = tokens[2]
            if node in content:
                raise ParseError(f"duplicate hasContent for {node!r}", line=lineno)
            content[node] = url

    # Resolution pass: every reference must land on a declared node.
    declared = set(declared_order)
    for lineno, child, prereq in prereq_stmts:
        for concept in (child, prereq):
            if concept not in declared:
                raise DanglingReference(
                    f"line {lineno}: hasPrerequisite refers to undeclared "
                    f"concept {concept!r}"
                )
    for leaf, parent in leaf_owner.items():
        if parent not in declared:
            raise DanglingReference(
                f"hasLeaf attaches {leaf!r} to undeclared concept {parent!r}"
            )
    for node in content:
        if node not in declared and node not in leaf_owner:
            raise DanglingReference(
                f"hasContent refers to undeclared node {node!r}"
            )

    prereq_edges = {child: prereq for _, child, prereq in prereq_stmts}
    _reject_cycles(prereq_edges)

    for node in declared_order + list(leaf_owner):
        if not content.get(node):
            raise ParseError(f"missing hasContent for {node!r}")

    parents = []
    for concept in _chain_order(declared_order, prereq_edges):
        leaves = [
            LeafNode(id=leaf, content=content[leaf], declaration_index=index)
            for index, leaf in enumerate(leaf_decls.get(concept, []))
        ]
        parents.append(ConceptNode(id=concept, content=content[concept], leaves=leaves))
    return OntologyGraph(parents=parents, prereq_edges=prereq_edges)


def _parse_id(token: str, lineno: int) -> str:
    try:
        return canonical_concept_id(token)
    except ValueError as exc:
        raise ParseError(str(exc), line=lineno) from None


def _reject_cycles(prereq_edges: Dict[str, str]) -> None:
    cleared: set[str] = set()
    for start in prereq_edges:
        seen: set[str] = set()
        node = start
        while node in prereq_edges and node not in cleared:
            if node in seen:
                raise CycleDetected(
                    f"prerequisite cycle through {node!r}"
                )
            seen.add(node)
            node = prereq_edges[node]
        cleared.update(seen)


def _chain_order(declared: List[str], prereq_edges: Dict[str, str]) -> List[str]:
    """Order parents bottom-first along the prereq chain when one exists.

    When the edges do not describe a single chain over every parent the
    declaration order is kept as-is; validate_regular reports BrokenChain.
    """
    roots = [c for c in declared if c not in prereq_edges]
    if len(roots) != 1:
        return declared
    dependents: Dict[str, List[str]] = {}
    for child, prereq in prereq_edges.items():
        dependents.setdefault(prereq, []).append(child)
    if any(len(children) > 1 for children in dependents.values()):
        return declared
    order = [roots[0]]
    while order[-1] in dependents:
        order.append(dependents[order[-1]][0])
    if len(order) != len(declared):
        return declared
    return order


# --- validation -------------------------------------------------------------

def validate_regular(graph: OntologyGraph) -> RegularParams:
    """Check chain shape and uniform leaf counts; return the C/N parameters."""
    parents = graph.parents
    if not parents:
        raise BrokenChain("graph has no parent concepts")

    for node in parents:
        if not node.leaves:
            raise EmptyLeaves(f"concept {node.id!r} has no leaves")

    counts = {node.id: len(node.leaves) for node in parents}
    distinct = sorted(set(counts.values()))
    if len(distinct) > 1:
        detail = ", ".join(f"{cid}={n}" for cid, n in counts.items())
        raise IrregularLeafCount(f"leaf counts differ: {detail}")

    _require_single_chain(graph)
    return RegularParams(
        parent_steps=len(parents) - 1,
        leaves_per_parent=distinct[0],
    )


def _require_single_chain(graph: OntologyGraph) -> None:
    parent_ids = [node.id for node in graph.parents]
    edges = graph.prereq_edges
    roots = [c for c in parent_ids if c not in edges]
    if len(roots) != 1:
        raise BrokenChain(
            f"expected exactly one concept without a prerequisite, found "
            f"{len(roots)} ({', '.join(roots) or 'none'})"
        )
    dependents: Dict[str, List[str]] = {}
    for child, prereq in edges.items():
        dependents.setdefault(prereq, []).append(child)
    for prereq, children in dependents.items():
        if len(children) > 1:
            raise BrokenChain(
                f"concept {prereq!r} has multiple dependents: "
                f"{', '.join(sorted(children))}"
            )
    walked = [roots[0]]
    while walked[-1] in dependents:
        walked.append(dependents[walked[-1]][0])
    if len(walked) != len(parent_ids):
        missing = sorted(set(parent_ids) - set(walked))
        raise BrokenChain(
            f"prerequisite chain does not reach: {', '.join(missing)}"
        )
    if walked != parent_ids:
        raise BrokenChain("stored parent order disagrees with the chain")


# --- serialization ----------------------------------------------------------

def emit_ontology(graph: OntologyGraph) -> str:
    """Serialize a graph back to file-format text.

    Reloading the output reproduces an identical graph; the emitted order is
    the canonical one (chain order, leaves by declaration index).
    """
    lines: List[str] = []
    for node in graph.parents:
        lines.append(f"concept {node.id}")
        lines.append(f"hasContent {node.id} {node.content}")
        for leaf in node.leaves:
            lines.append(f"hasLeaf {node.id} {leaf.id}")
            lines.append(f"hasContent {leaf.id} {leaf.content}")
    for node in graph.parents:
        prereq = graph.prereq_edges.get(node.id)
        if prereq is not None:
            lines.append(f"hasPrerequisite {node.id} {prereq}")
    return "\n".join(lines) + "\n"
