"""Append-only student event log and the analytics derived from it.

Every answered quiz question becomes one line shaped like a persistent
belief-base entry:

    record("s1","update","delete_select",1,"not_passed","2015-11-03T11:08:54Z","2015-11-03T11:09:27Z").

Timestamps are ISO-8601 UTC at second precision.  Durations and averages
are always recomputed from the two timestamps of each attempt; nothing
else about timing is stored, so the log cannot contradict itself.
"""

from __future__ import annotations

import os
import re
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .errors import ParseError, StorageError


class QuestionOutcome(Enum):
    """Final verdict of one answer attempt."""

    PASSED = "passed"
    NOT_PASSED = "not_passed"


_LINE_PATTERN = re.compile(
    r'^record\('
    r'"(?P<student>[^"]*)",'
    r'"(?P<desired>[^"]*)",'
    r'"(?P<question>[^"]*)",'
    r'(?P<attempt>\d+),'
    r'"(?P<outcome>passed|not_passed)",'
    r'"(?P<asked>[^"]*)",'
    r'"(?P<answered>[^"]*)"'
    r'\)\.$'
)

_TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def format_timestamp(moment: datetime) -> str:
    return moment.astimezone(timezone.utc).strftime(_TIMESTAMP_FORMAT)


def parse_timestamp(text: str) -> datetime:
    try:
        parsed = datetime.strptime(text, _TIMESTAMP_FORMAT)
    except ValueError:
        raise ParseError(f"bad timestamp {text!r}") from None
    return parsed.replace(tzinfo=timezone.utc)


def _clean_moment(moment: datetime, label: str) -> datetime:
    if moment.tzinfo is None:
        raise ValueError(f"{label} must be timezone-aware")
    return moment.astimezone(timezone.utc).replace(microsecond=0)


@dataclass
class StudentEvent:
    """One answered attempt at one quiz question."""

    student: str
    desired: str
    question: str
    attempt: int
    outcome: QuestionOutcome
    asked_at: datetime
    answered_at: datetime

    def __post_init__(self):
        for label, value in (
            ("student", self.student),
            ("desired", self.desired),
            ("question", self.question),
        ):
            if not value:
                raise ValueError(f"{label} must be non-empty")
            if '"' in value:
                raise ValueError(f"{label} must not contain double quotes")
        if self.attempt < 1:
            raise ValueError("attempt numbers start at 1")
        self.asked_at = _clean_moment(self.asked_at, "asked_at")
        self.answered_at = _clean_moment(self.answered_at, "answered_at")
        if self.answered_at < self.asked_at:
            raise ValueError("answered_at precedes asked_at")

    @property
    def duration_seconds(self) -> int:
        return int((self.answered_at - self.asked_at).total_seconds())

    def to_line(self) -> str:
        return (
            f'record("{self.student}","{self.desired}","{self.question}",'
            f'{self.attempt},"{self.outcome.value}",'
            f'"{format_timestamp(self.asked_at)}",'
            f'"{format_timestamp(self.answered_at)}").'
        )

    @classmethod
    def from_line(cls, line: str, lineno: Optional[int] = None) -> "StudentEvent":
        match = _LINE_PATTERN.match(line)
        if not match:
            raise ParseError(f"not a record line: {line!r}", line=lineno)
        try:
            return cls(
                student=match.group("student"),
                desired=match.group("desired"),
                question=match.group("question"),
                attempt=int(match.group("attempt")),
                outcome=QuestionOutcome(match.group("outcome")),
                asked_at=parse_timestamp(match.group("asked")),
                answered_at=parse_timestamp(match.group("answered")),
            )
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None


class EventLog:
    """Durable append-only store of StudentEvents backed by one text file.

    Appends are serialized by a lock and fsynced before record_event
    returns, so a crash can lose at most an unacknowledged write.  Reads
    parse a snapshot of the whole file.
    """

    def __init__(self, path: str):
        self.path = path
        self._write_lock = threading.Lock()

    def record_event(self, event: StudentEvent) -> None:
        line = event.to_line()
        with self._write_lock:
            try:
                with open(self.path, "a", encoding="utf-8") as handle:
                    handle.write(line + "\n")
                    handle.flush()
                    os.fsync(handle.fileno())
            except OSError as exc:
                raise StorageError(f"cannot append to {self.path}: {exc}") from exc

    def load_history(self, student: Optional[str] = None) -> List[StudentEvent]:
        """All events (optionally one student's), in original append order."""
        try:
            with open(self.path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except FileNotFoundError:
            return []
        except OSError as exc:
            raise StorageError(f"cannot read {self.path}: {exc}") from exc
        events: List[StudentEvent] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            events.append(StudentEvent.from_line(line, lineno=lineno))
        if student is not None:
            events = [event for event in events if event.student == student]
        return events


# --- analytics --------------------------------------------------------------

@dataclass
class AttemptRecord:
    attempt: int
    asked_at: datetime
    answered_at: datetime
    outcome: QuestionOutcome

    @property
    def duration_seconds(self) -> int:
        return int((self.answered_at - self.asked_at).total_seconds())


@dataclass
class TaskAnalysis:
    """All attempts at one question within one session."""

    question: str
    attempts: List[AttemptRecord]

    @property
    def attempt_durations(self) -> List[int]:
        return [record.duration_seconds for record in self.attempts]

    @property
    def average_duration(self) -> float:
        """Mean attempt duration, reported at half-second precision."""
        durations = self.attempt_durations
        return round(2 * sum(durations) / len(durations)) / 2

    @property
    def final_outcome(self) -> QuestionOutcome:
        if any(r.outcome is QuestionOutcome.PASSED for r in self.attempts):
            return QuestionOutcome.PASSED
        return QuestionOutcome.NOT_PASSED


@dataclass
class SessionSummary:
    """One assessed quiz run: its tasks, total time, and closing remark."""

    student: str
    desired: str
    tasks: List[TaskAnalysis] = field(default_factory=list)

    @property
    def total_duration(self) -> int:
        return sum(sum(task.attempt_durations) for task in self.tasks)

    @property
    def prepared(self) -> bool:
        return all(
            task.final_outcome is QuestionOutcome.PASSED for task in self.tasks
        )

    @property
    def remark(self) -> str:
        desired = _display(self.desired)
        if self.prepared:
            return f"Prepared to learn {desired}; recommended to proceed to {desired}."
        failed = [
            _display(task.question) for task in self.tasks
            if task.final_outcome is QuestionOutcome.NOT_PASSED
        ]
        return (
            f"Not prepared to learn {desired}; recommended to learn "
            f"{_join_names(failed)}."
        )


def _display(concept: str) -> str:
    return concept.upper()


def _join_names(names: Sequence[str]) -> str:
    if len(names) == 1:
        return names[0]
    return ", ".join(names[:-1]) + " and " + names[-1]


def analyze(events: Sequence[StudentEvent]) -> List[SessionSummary]:
    """Group a student's events into sessions and summarize each.

    A new session starts when the desired concept changes or when a
    question/attempt pair repeats, which is how a re-take of the same quiz
    shows up in a flat log.  The remark mirrors the recommendation a
    remediation policy would issue: failed questions become the study
    targets, an all-pass run confirms readiness.
    """
    summaries: List[SessionSummary] = []
    current: Optional[SessionSummary] = None
    seen: Set[Tuple[str, int]] = set()
    tasks_by_question: Dict[str, TaskAnalysis] = {}

    for event in events:
        key = (event.question, event.attempt)
        if (
            current is None
            or event.desired != current.desired
            or event.student != current.student
            or key in seen
        ):
            current = SessionSummary(student=event.student, desired=event.desired)
            summaries.append(current)
            seen = set()
            tasks_by_question = {}
        seen.add(key)
        task = tasks_by_question.get(event.question)
        if task is None:
            task = TaskAnalysis(question=event.question, attempts=[])
            tasks_by_question[event.question] = task
            current.tasks.append(task)
        task.attempts.append(AttemptRecord(
            attempt=event.attempt,
            asked_at=event.asked_at,
            answered_at=event.answered_at,
            outcome=event.outcome,
        ))
    return summaries
