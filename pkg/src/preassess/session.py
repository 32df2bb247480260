"""Interactive pre-assessment session over the agent bus.

One session quizzes one student on the leaves of the desired concept's
prerequisite, then classifies the outcome vector and returns a study
recommendation.  The conversational flow is carried entirely by bus
messages between five agents:

    ag_interface   faces the student: questions, feedback, recommendation
    ag_support     runs the quiz: evaluates answers, stamps times
    ag_modelling   classifies the finished outcome vector
    ag_student     persists activity records to the event log
    ag_material    owns ontology facts and resolves content URLs

The session object drives the phases in speech-act order and keeps the
recorded phase history, so tests can assert each transition happened from
the phase that was supposed to precede it.  All timing comes from an
injected clock, which is what makes whole-session traces reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import (
    EmptyAnswer,
    IncompleteOutcome,
    UnknownDesiredConcept,
    WrongPhase,
)
from .mas import WILDCARD, Agent, Literal, Message, MessageBus, Performative
from .ontology import OntologyGraph, canonical_concept_id
from .question_bank import QuestionBank
from .rules import ClassifyPolicy, Outcome, Recommendation, RuleSet, Verdict, classify
from .student_log import (
    EventLog,
    QuestionOutcome,
    StudentEvent,
    format_timestamp,
    parse_timestamp,
)

AG_INTERFACE = "ag_interface"
AG_SUPPORT = "ag_support"
AG_MODELLING = "ag_modelling"
AG_STUDENT = "ag_student"
AG_MATERIAL = "ag_material"

AGENT_NAMES = (AG_INTERFACE, AG_SUPPORT, AG_MODELLING, AG_STUDENT, AG_MATERIAL)


class Phase(Enum):
    AWAIT_DESIRED = "await_desired"
    QUIZ_SORTED = "quiz_sorted"
    QUESTION_ASKED = "question_asked"
    ANSWER_RECEIVED = "answer_received"
    FEEDBACK_GIVEN = "feedback_given"
    CLASSIFIED = "classified"
    RECOMMENDED = "recommended"
    DONE = "done"


Clock = Callable[[], datetime]


def system_clock() -> datetime:
    return datetime.now(timezone.utc)


class ScriptedClock:
    """Clock that replays a fixed list of moments, for reproducible runs."""

    def __init__(self, moments: Iterable[Union[datetime, str]]):
        self._moments: List[datetime] = [
            parse_timestamp(m) if isinstance(m, str) else m for m in moments
        ]
        self._cursor = 0

    def __call__(self) -> datetime:
        if self._cursor >= len(self._moments):
            raise RuntimeError("scripted clock exhausted")
        moment = self._moments[self._cursor]
        self._cursor += 1
        return moment


@dataclass
class QuizPrompt:
    leaf: str
    attempt: int
    max_attempts: int
    prompt: str


@dataclass
class EvalFeedback:
    leaf: str
    attempt: int
    outcome: QuestionOutcome
    message: str

    @property
    def passed(self) -> bool:
        return self.outcome is QuestionOutcome.PASSED


@dataclass
class SessionState:
    student: str
    desired: str
    desired_display: str
    assessed_prereq: Optional[str]
    queue: List[str]
    current: Optional[Tuple[str, int]] = None
    outcome: List[Outcome] = field(default_factory=list)
    resolved_leaves: List[str] = field(default_factory=list)
    leaf_outcomes: List[QuestionOutcome] = field(default_factory=list)
    phase: Phase = Phase.AWAIT_DESIRED
    phase_history: List[Phase] = field(default_factory=lambda: [Phase.AWAIT_DESIRED])
    asked_at: Optional[datetime] = None


def leaf_display(prereq: str, leaf: str) -> str:
    """Human label used in classification context strings.

    A leaf following the `<parent>_<topic>` convention reads as
    "PARENT with TOPIC"; anything else is just uppercased.
    """
    if leaf.startswith(prereq + "_"):
        topic = leaf[len(prereq) + 1:]
        return f"{prereq.upper()} with {topic.upper().replace('_', ' ')}"
    return leaf.upper()


def passed_context(prereq: str, leaf: str) -> str:
    return f"The student has passed the {leaf_display(prereq, leaf)} question."


def failed_context(prereq: str, leaf: str) -> str:
    return f"The student has NOT passed the {leaf_display(prereq, leaf)} question."


class PreAssessmentSession:
    """Drives one student's quiz-and-classify flow to a recommendation."""

    def __init__(
        self,
        student: str,
        desired_raw: str,
        graph: OntologyGraph,
        ruleset: RuleSet,
        bank: QuestionBank,
        log: EventLog,
        policy: Optional[ClassifyPolicy] = None,
        clock: Optional[Clock] = None,
        bus: Optional[MessageBus] = None,
    ):
        if not student or '"' in student:
            raise ValueError("student id must be non-empty without quotes")
        self.graph = graph
        self.ruleset = ruleset
        self.bank = bank
        self.log = log
        self.policy = policy or ruleset.policy
        self.clock: Clock = clock or system_clock
        self.bus = bus or MessageBus()
        self._recommendation: Optional[Recommendation] = None
        self._last_eval: Optional[EvalFeedback] = None

        self._build_agents()

        try:
            desired = canonical_concept_id(desired_raw)
        except ValueError as exc:
            raise UnknownDesiredConcept(str(exc)) from None
        found = self.bus.ask_one(
            AG_INTERFACE, AG_MATERIAL, Literal("exists", (desired,))
        )
        if found is None:
            raise UnknownDesiredConcept(
                f"{desired_raw!r} is not a concept in the loaded graph"
            )
        if not graph.is_parent(desired):
            raise UnknownDesiredConcept(
                f"{desired_raw!r} is a leaf topic; choose one of: "
                + ", ".join(node.id for node in graph.parents)
            )

        display = desired.upper()
        self.state = SessionState(
            student=student,
            desired=desired,
            desired_display=display,
            assessed_prereq=graph.prerequisite_of(desired),
            queue=[],
        )

        self.bus.broadcast(AG_INTERFACE, Literal("value", (display,)))
        self.bus.dispatch_until_quiescent()

        if self.state.assessed_prereq is None:
            # Chain bottom: nothing to assess, classification is immediate.
            self._request_classification(send_outcomes=False)
            self._enter(Phase.RECOMMENDED)
            self._enter(Phase.DONE)
        else:
            self.state.queue = [
                leaf.id for leaf in graph.leaves_of(self.state.assessed_prereq)
            ]
            self._enter(Phase.QUIZ_SORTED)

    # -- public driver ------------------------------------------------------

    def next_question(self) -> Optional[QuizPrompt]:
        """Ask the next pending question; none once the quiz is finished."""
        if self.state.phase not in (Phase.QUIZ_SORTED, Phase.FEEDBACK_GIVEN):
            raise WrongPhase(
                f"cannot ask a question in phase {self.state.phase.value}"
            )
        if self.state.current is None:
            if not self.state.queue:
                return None
            self.state.current = (self.state.queue.pop(0), 1)
        leaf, attempt = self.state.current
        self.state.asked_at = self.clock().astimezone(timezone.utc).replace(
            microsecond=0
        )
        item = self.bank.item_for(leaf)
        self.bus.send(
            AG_SUPPORT, AG_INTERFACE, Performative.TELL,
            Literal("question", (leaf, attempt, item.prompt)),
        )
        self.bus.dispatch_until_quiescent()
        self._enter(Phase.QUESTION_ASKED)
        return QuizPrompt(
            leaf=leaf,
            attempt=attempt,
            max_attempts=self.policy.max_attempts,
            prompt=item.prompt,
        )

    def submit_answer(self, text: str) -> EvalFeedback:
        """Evaluate one submission and advance the retry/queue bookkeeping."""
        if self.state.phase is not Phase.QUESTION_ASKED:
            raise WrongPhase(
                f"no question is awaiting an answer in phase "
                f"{self.state.phase.value}"
            )
        if not text.strip():
            raise EmptyAnswer("an empty submission is not evaluated")
        self._enter(Phase.ANSWER_RECEIVED)
        leaf, attempt = self.state.current
        self.bus.send(
            AG_INTERFACE, AG_SUPPORT, Performative.TELL,
            Literal("answer", (leaf, attempt, text)),
        )
        self.bus.dispatch_until_quiescent()
        feedback = self._last_eval
        assert feedback is not None, "support agent did not evaluate the answer"

        if (
            feedback.outcome is QuestionOutcome.NOT_PASSED
            and attempt < self.policy.max_attempts
        ):
            self.state.current = (leaf, attempt + 1)
        else:
            self.state.resolved_leaves.append(leaf)
            self.state.leaf_outcomes.append(feedback.outcome)
            self.state.outcome.append(
                Outcome.PASS if feedback.passed else Outcome.FAIL
            )
            self.state.current = None
        self._enter(Phase.FEEDBACK_GIVEN)
        return feedback

    def finalize(self) -> Recommendation:
        """Classify the completed outcome vector into a recommendation."""
        expected = len(self.graph.leaves_of(self.state.assessed_prereq)) \
            if self.state.assessed_prereq else 0
        if len(self.state.outcome) < expected or self.state.current is not None:
            raise IncompleteOutcome(
                f"only {len(self.state.outcome)} of {expected} leaves have a "
                f"final verdict"
            )
        if self.state.phase is not Phase.FEEDBACK_GIVEN:
            raise WrongPhase(
                f"cannot classify in phase {self.state.phase.value}"
            )
        self._request_classification(send_outcomes=True)
        self._enter(Phase.RECOMMENDED)
        prepared = all(o is Outcome.PASS for o in self.state.outcome)
        self.bus.send(
            AG_SUPPORT, AG_STUDENT, Performative.TELL,
            Literal("summary", (
                self.state.student,
                self.state.desired,
                "prepared" if prepared else "not_prepared",
            )),
        )
        self.bus.dispatch_until_quiescent()
        self._enter(Phase.DONE)
        assert self._recommendation is not None
        return self._recommendation

    @property
    def recommendation(self) -> Optional[Recommendation]:
        return self._recommendation

    def quiz_finished(self) -> bool:
        return (
            self.state.assessed_prereq is None
            or (not self.state.queue and self.state.current is None)
        )

    # -- internals ----------------------------------------------------------

    def _enter(self, phase: Phase) -> None:
        self.state.phase = phase
        self.state.phase_history.append(phase)

    def _request_classification(self, send_outcomes: bool) -> None:
        """Hand the finished vector to ag_modelling and run the cascade."""
        self.bus.send(
            AG_SUPPORT, AG_MODELLING, Performative.TELL,
            Literal("desired_concept", (self.state.desired_display,)),
        )
        if send_outcomes:
            prereq = self.state.assessed_prereq
            for leaf, outcome in zip(
                self.state.resolved_leaves, self.state.outcome
            ):
                if outcome is Outcome.PASS:
                    literal = Literal("passed", (passed_context(prereq, leaf),))
                else:
                    literal = Literal("failed", (failed_context(prereq, leaf),))
                self.bus.send(AG_SUPPORT, AG_MODELLING, Performative.TELL, literal)
        self.bus.send(
            AG_SUPPORT, AG_MODELLING, Performative.ACHIEVE,
            Literal("recommend_material"),
        )
        self.bus.dispatch_until_quiescent()
        self._enter(Phase.CLASSIFIED)

    # -- agent wiring --------------------------------------------------------

    def _build_agents(self) -> None:
        interface = Agent(AG_INTERFACE)
        support = Agent(AG_SUPPORT)
        modelling = Agent(AG_MODELLING)
        student = Agent(AG_STUDENT)
        material = Agent(AG_MATERIAL)

        support.add_plan(Performative.TELL, "answer", self._support_on_answer)
        modelling.add_plan(
            Performative.ACHIEVE, "recommend_material",
            self._modelling_on_recommend,
            guard=lambda agent, _lit: agent.beliefs.first_match(
                Literal("desired_concept", (WILDCARD,))
            ) is not None,
        )
        student.add_plan(Performative.TELL, "record", self._student_on_record)
        material.add_plan(
            Performative.ACHIEVE, "has_prerequisite", self._material_on_preq
        )
        material.add_plan(Performative.ACHIEVE, "has_kb", self._material_on_kb)
        material.add_plan(
            Performative.ACHIEVE, "has_content", self._material_on_content
        )

        for node_id in self.graph.node_ids():
            material.believe(Literal("exists", (node_id,)))

        for agent in (interface, support, modelling, student, material):
            self.bus.register(agent)

    def _support_on_answer(self, agent: Agent, message: Message,
                           bus: MessageBus) -> None:
        leaf, attempt, text = message.content.args
        item = self.bank.item_for(leaf)
        outcome = (
            QuestionOutcome.PASSED if item.is_correct(text)
            else QuestionOutcome.NOT_PASSED
        )
        answered_at = self.clock().astimezone(timezone.utc).replace(microsecond=0)
        bus.send(AG_SUPPORT, AG_STUDENT, Performative.TELL, Literal("record", (
            self.state.student,
            self.state.desired,
            leaf,
            attempt,
            outcome.value,
            format_timestamp(self.state.asked_at),
            format_timestamp(answered_at),
        )))
        bus.send(AG_SUPPORT, AG_INTERFACE, Performative.TELL, Literal(
            "feedback", (leaf, attempt, outcome.value)
        ))
        if outcome is QuestionOutcome.PASSED:
            note = f"Passed {leaf} on attempt {attempt}."
        else:
            note = (
                f"Not passed {leaf} on attempt {attempt} of "
                f"{self.policy.max_attempts}."
            )
        self._last_eval = EvalFeedback(
            leaf=leaf, attempt=attempt, outcome=outcome, message=note
        )

    def _student_on_record(self, agent: Agent, message: Message,
                           bus: MessageBus) -> None:
        (student_id, desired, question, attempt, outcome,
         asked, answered) = message.content.args
        self.log.record_event(StudentEvent(
            student=student_id,
            desired=desired,
            question=question,
            attempt=attempt,
            outcome=QuestionOutcome(outcome),
            asked_at=parse_timestamp(asked),
            answered_at=parse_timestamp(answered),
        ))

    def _modelling_on_recommend(self, agent: Agent, message: Message,
                                bus: MessageBus) -> None:
        desired_lit = agent.beliefs.first_match(
            Literal("desired_concept", (WILDCARD,))
        )
        desired = canonical_concept_id(str(desired_lit.args[0]))
        prereq = self.graph.prerequisite_of(desired)
        if prereq is None:
            vector: Tuple[Outcome, ...] = ()
        else:
            outcomes: List[Outcome] = []
            for leaf in self.graph.leaves_of(prereq):
                if agent.beliefs.first_match(
                    Literal("passed", (passed_context(prereq, leaf.id),))
                ):
                    outcomes.append(Outcome.PASS)
                elif agent.beliefs.first_match(
                    Literal("failed", (failed_context(prereq, leaf.id),))
                ):
                    outcomes.append(Outcome.FAIL)
                else:
                    raise IncompleteOutcome(
                        f"no classification attribute for leaf {leaf.id!r}"
                    )
            vector = tuple(outcomes)
        recommendation = classify(self.ruleset, desired, vector)
        self._recommendation = recommendation
        for literal in _achieves_for(recommendation, desired, prereq,
                                     self.graph):
            bus.send(AG_MODELLING, AG_MATERIAL, Performative.ACHIEVE, literal)

    def _material_on_preq(self, agent: Agent, message: Message,
                          bus: MessageBus) -> None:
        above, below = message.content.args
        desired_lit = agent.beliefs.first_match(
            Literal("value", (WILDCARD,))
        )
        desired = canonical_concept_id(str(desired_lit.args[0]))
        concept = above if above == desired else below
        self._deliver_material(bus, concept)

    def _material_on_kb(self, agent: Agent, message: Message,
                        bus: MessageBus) -> None:
        _parent, leaf = message.content.args
        self._deliver_material(bus, leaf)

    def _material_on_content(self, agent: Agent, message: Message,
                             bus: MessageBus) -> None:
        (concept,) = message.content.args
        self._deliver_material(bus, concept)

    def _deliver_material(self, bus: MessageBus, concept: str) -> None:
        bus.send(AG_MATERIAL, AG_INTERFACE, Performative.TELL, Literal(
            "recommend", (concept, self.graph.content_url(concept))
        ))


def _achieves_for(
    recommendation: Recommendation,
    desired: str,
    prereq: Optional[str],
    graph: OntologyGraph,
) -> Sequence[Literal]:
    """Translate a recommendation into the achieve literals for ag_material."""
    verdict = recommendation.verdict
    if verdict is Verdict.READY_FOR_DESIRED:
        return [Literal("has_prerequisite", (desired, prereq))]
    if verdict is Verdict.DESCEND_PREREQUISITE:
        deeper = recommendation.targets[0][0]
        return [Literal("has_prerequisite", (prereq, deeper))]
    if verdict is Verdict.REMEDIATE_LEAVES:
        return [
            Literal("has_kb", (prereq, leaf))
            for leaf, _url in recommendation.targets
        ]
    return [Literal("has_content", (desired,))]


def run_scripted_session(
    student: str,
    desired: str,
    answers: Sequence[str],
    graph: OntologyGraph,
    ruleset: RuleSet,
    bank: QuestionBank,
    log: EventLog,
    policy: Optional[ClassifyPolicy] = None,
    clock: Optional[Clock] = None,
) -> PreAssessmentSession:
    """Run a whole session from a fixed answer script; answers are consumed
    one per asked question, and the script must cover the full quiz."""
    session = PreAssessmentSession(
        student, desired, graph, ruleset, bank, log,
        policy=policy, clock=clock,
    )
    if session.state.phase is Phase.DONE:
        return session
    cursor = 0
    while True:
        prompt = session.next_question()
        if prompt is None:
            break
        if cursor >= len(answers):
            raise ValueError("answer script exhausted before the quiz ended")
        session.submit_answer(answers[cursor])
        cursor += 1
    if session.state.phase is not Phase.DONE:
        session.finalize()
    return session
