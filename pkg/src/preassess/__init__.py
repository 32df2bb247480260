"""preassess: prerequisite pre-assessment with classified rules.

The package loads a regular prerequisite ontology, generates a one-vs-all
decision table over quiz outcomes, runs interactive pre-assessment sessions
across an agent message bus, logs student activity, and serves everything
over HTTP and a command line.
"""

from importlib import resources

from .errors import PreassessError
from .mas import Agent, BeliefBase, Literal, Message, MessageBus, Performative
from .ontology import (
    OntologyGraph,
    RegularParams,
    canonical_concept_id,
    emit_ontology,
    load_ontology,
    validate_regular,
)
from .question_bank import QuestionBank, QuizItem, load_bank, normalize_answer
from .rulecalc import (
    SweepGrid,
    decrement_rules,
    emit_dataset_csv,
    estimate_rules,
    increment_rules,
    parse_dataset_csv,
    sweep,
)
from .rules import (
    ClassifiedRule,
    ClassifyPolicy,
    Outcome,
    Recommendation,
    RuleSet,
    Verdict,
    classify,
    generate_rules,
    verify_count,
)
from .session import (
    EvalFeedback,
    Phase,
    PreAssessmentSession,
    QuizPrompt,
    ScriptedClock,
    run_scripted_session,
)
from .student_log import (
    EventLog,
    QuestionOutcome,
    SessionSummary,
    StudentEvent,
    TaskAnalysis,
    analyze,
)

__version__ = "0.1.0"


def sample_ontology_text() -> str:
    """The shipped SQL sample ontology, as file text."""
    return resources.files(__package__).joinpath("data/sql.ont").read_text(
        encoding="utf-8"
    )


def sample_bank_text() -> str:
    """The shipped question bank matching the SQL sample ontology."""
    return resources.files(__package__).joinpath("data/sql_bank.json").read_text(
        encoding="utf-8"
    )
