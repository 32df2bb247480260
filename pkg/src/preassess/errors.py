"""Exception hierarchy shared by every preassess module.

All domain errors derive from PreassessError so callers (CLI, HTTP service)
can map them to exit codes and response bodies in one place.  Parsing errors
carry the 1-based line number of the offending input line when known.
"""

from __future__ import annotations


class PreassessError(Exception):
    """Base class for every error raised by this package."""


class ParseError(PreassessError):
    """Malformed input text (ontology file, question bank, event log)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# --- ontology ---------------------------------------------------------------

class UnknownPredicate(ParseError):
    """An ontology line starts with a predicate the grammar does not define."""


class DanglingReference(PreassessError):
    """An ontology statement refers to a concept that was never declared."""


class CycleDetected(PreassessError):
    """The prerequisite relation loops back on itself."""


class IrregularOntology(PreassessError):
    """The graph does not satisfy the regularity conditions."""


class IrregularLeafCount(IrregularOntology):
    """Parents disagree on how many leaves they carry."""


class EmptyLeaves(IrregularOntology):
    """Some parent concept has no leaves at all."""


class BrokenChain(IrregularOntology):
    """Prerequisites do not form one linear chain over all parents."""


class UnknownConcept(PreassessError):
    """A concept id is not present in the graph (or is of the wrong kind)."""


# --- rule count algebra -----------------------------------------------------

class InvalidN(PreassessError):
    """Leaves-per-parent must stay strictly positive (and >= 2 for steps)."""


class InvalidC(PreassessError):
    """Parent-count argument is out of range for the requested operation."""


class InconsistentInput(PreassessError):
    """A step operation was handed an R that the closed form contradicts."""


class EmptyGrid(PreassessError):
    """A sweep produced no rows, so there is nothing to emit."""


# --- rule generation --------------------------------------------------------

class BadVectorLength(PreassessError):
    """An outcome vector does not match the graph's leaves-per-parent."""


# --- message bus ------------------------------------------------------------

class UnknownAgent(PreassessError):
    """A message names an agent that is not registered on the bus."""


class NonTermination(PreassessError):
    """Dispatch exceeded the configured message budget."""


# --- sessions ---------------------------------------------------------------

class UnknownDesiredConcept(PreassessError):
    """The requested target concept cannot be assessed."""


class WrongPhase(PreassessError):
    """A session operation was called outside its admissible phase."""


class EmptyAnswer(PreassessError):
    """A blank submission is rejected before evaluation."""


class IncompleteOutcome(PreassessError):
    """Classification was requested before every leaf had a final verdict."""


class UnknownSession(PreassessError):
    """No live session exists under the given id (missing or expired)."""


# --- question bank ----------------------------------------------------------

class MissingLeafQuestion(PreassessError):
    """The bank lacks an item for some leaf of the bound graph."""


class UnknownLeaf(PreassessError):
    """The bank carries an item for a leaf the graph does not define."""


# --- persistence / service --------------------------------------------------

class StorageError(PreassessError):
    """The student event log could not be written durably."""


class LoadError(PreassessError):
    """A configured input file is missing or fails to load at startup."""


class BindError(PreassessError):
    """The service could not bind its listen port."""
