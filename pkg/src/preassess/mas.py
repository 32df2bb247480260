"""Deterministic agent message bus with belief bases and reactive plans.

The bus carries four performatives.  A tell (and its broadcast fan-out
variant) asserts the message literal into the receiver's belief base,
annotated with the sender as source, and triggers the receiver's first
matching plan.  An achieve only triggers a plan: goals never become
beliefs.  An ask_one is a synchronous query answered from the target's
belief base without touching the queue.

Everything is single-threaded and ordered: one FIFO queue, run-to-
completion handlers, plans in registration order, beliefs in insertion
order.  Two buses fed the same script therefore produce byte-identical
traces, which is what makes whole-session golden tests possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple, Union

from .errors import NonTermination, ParseError, UnknownAgent

#: Pattern argument that unifies with any value in ask_one queries.
WILDCARD = "_"

ArgValue = Union[str, int]


class Performative(Enum):
    TELL = "tell"
    ACHIEVE = "achieve"
    ASK_ONE = "ask_one"
    BROADCAST_TELL = "broadcast_tell"


def _is_tell_like(performative: Performative) -> bool:
    return performative in (Performative.TELL, Performative.BROADCAST_TELL)


@dataclass(frozen=True)
class Literal:
    """A ground functor with string/number arguments.

    The optional source annotation records which agent asserted the belief;
    literals travelling inside messages usually carry none, the receiving
    belief base stamps it on arrival.
    """

    functor: str
    args: Tuple[ArgValue, ...] = ()
    source: Optional[str] = None

    def __post_init__(self):
        if not self.functor:
            raise ValueError("literal functor must be non-empty")

    def with_source(self, source: str) -> "Literal":
        return Literal(self.functor, self.args, source)

    def matches(self, pattern: "Literal") -> bool:
        """Unification against a pattern whose args may be the wildcard."""
        if self.functor != pattern.functor or len(self.args) != len(pattern.args):
            return False
        return all(
            wanted == WILDCARD or wanted == actual
            for actual, wanted in zip(self.args, pattern.args)
        )

    def render(self) -> str:
        body = self.functor
        if self.args:
            rendered = ", ".join(_render_arg(arg) for arg in self.args)
            body = f"{self.functor}({rendered})"
        if self.source is not None:
            body = f"{body}[source({self.source})]"
        return body


def _render_arg(arg: ArgValue) -> str:
    if isinstance(arg, bool):
        raise ValueError("boolean literal arguments are not supported")
    if isinstance(arg, int):
        return str(arg)
    escaped = arg.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


_LITERAL_PATTERN = re.compile(
    r"^(?P<functor>[a-z_][a-zA-Z0-9_]*)"
    r"(?:\((?P<args>.*)\))?"
    r"(?:\[source\((?P<source>[a-zA-Z0-9_]+)\)\])?$"
)


def parse_literal(text: str) -> Literal:
    """Inverse of Literal.render for ground literals."""
    match = _LITERAL_PATTERN.match(text.strip())
    if not match:
        raise ParseError(f"not a literal: {text!r}")
    args_text = match.group("args")
    args: List[ArgValue] = []
    if args_text is not None:
        args = _parse_args(args_text, text)
    return Literal(
        functor=match.group("functor"),
        args=tuple(args),
        source=match.group("source"),
    )


def _parse_args(args_text: str, whole: str) -> List[ArgValue]:
    args: List[ArgValue] = []
    index = 0
    length = len(args_text)
    while index < length:
        while index < length and args_text[index] in " \t":
            index += 1
        if index >= length:
            raise ParseError(f"trailing comma in literal: {whole!r}")
        char = args_text[index]
        if char == '"':
            chunk = []
            index += 1
            while index < length and args_text[index] != '"':
                if args_text[index] == "\\" and index + 1 < length:
                    index += 1
                chunk.append(args_text[index])
                index += 1
            if index >= length:
                raise ParseError(f"unterminated string in literal: {whole!r}")
            index += 1
            args.append("".join(chunk))
        else:
            chunk = []
            while index < length and args_text[index] not in ",":
                chunk.append(args_text[index])
                index += 1
            token = "".join(chunk).strip()
            if not re.fullmatch(r"-?\d+", token):
                raise ParseError(f"bad argument {token!r} in literal: {whole!r}")
            args.append(int(token))
        while index < length and args_text[index] in " \t":
            index += 1
        if index < length:
            if args_text[index] != ",":
                raise ParseError(f"expected comma in literal: {whole!r}")
            index += 1
            if not args_text[index:].strip():
                raise ParseError(f"trailing comma in literal: {whole!r}")
    return args


class BeliefBase:
    """Insertion-ordered set of literals, deduplicated per literal+source."""

    def __init__(self):
        self._entries: Dict[Tuple[str, Tuple[ArgValue, ...], Optional[str]],
                            Literal] = {}

    def add(self, literal: Literal) -> bool:
        """Assert a literal; returns False when it was already believed."""
        key = (literal.functor, literal.args, literal.source)
        if key in self._entries:
            return False
        self._entries[key] = literal
        return True

    def first_match(self, pattern: Literal) -> Optional[Literal]:
        """Oldest belief unifying with the pattern, or none."""
        for literal in self._entries.values():
            if literal.matches(pattern):
                return literal
        return None

    def all_matches(self, pattern: Literal) -> List[Literal]:
        return [lit for lit in self._entries.values() if lit.matches(pattern)]

    def snapshot(self) -> List[Literal]:
        return list(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, literal: Literal) -> bool:
        return self.first_match(literal) is not None


@dataclass
class Message:
    sender: str
    receiver: str
    performative: Performative
    content: Literal
    #: Stamped by the bus when the message is delivered (or, for queries,
    #: answered); strictly increasing and gap-free across one bus lifetime.
    seq: Optional[int] = None

    def trace_line(self) -> str:
        return (
            f"{self.seq}|{self.sender}|{self.performative.value}|"
            f"{self.receiver}|{self.content.render()}"
        )


PlanHandler = Callable[["Agent", Message, "MessageBus"], None]
PlanGuard = Callable[["Agent", Literal], bool]


@dataclass
class Plan:
    """Reaction to a delivered message: performative + functor + guard.

    A plan registered for tell also fires for broadcast fan-out deliveries;
    the guard plays the role of a plan context and is checked against the
    message literal at delivery time.
    """

    performative: Performative
    functor: str
    handler: PlanHandler
    guard: Optional[PlanGuard] = None

    def applies_to(self, agent: "Agent", message: Message) -> bool:
        if _is_tell_like(message.performative):
            if not _is_tell_like(self.performative):
                return False
        elif self.performative is not message.performative:
            return False
        if self.functor != message.content.functor:
            return False
        if self.guard is not None and not self.guard(agent, message.content):
            return False
        return True


class Agent:
    """A named belief base plus an ordered plan library."""

    def __init__(self, name: str):
        if not name:
            raise ValueError("agent name must be non-empty")
        self.name = name
        self.beliefs = BeliefBase()
        self.plans: List[Plan] = []

    def add_plan(
        self,
        performative: Performative,
        functor: str,
        handler: PlanHandler,
        guard: Optional[PlanGuard] = None,
    ) -> None:
        self.plans.append(Plan(performative, functor, handler, guard))

    def believe(self, literal: Literal, source: str = "self") -> None:
        """Seed an initial belief, annotated source self by default."""
        self.beliefs.add(literal if literal.source else literal.with_source(source))

    def first_applicable_plan(self, message: Message) -> Optional[Plan]:
        for plan in self.plans:
            if plan.applies_to(self, message):
                return plan
        return None


class MessageBus:
    """Single FIFO queue over a registry of agents.

    Sequence numbers are stamped in delivery order (queries count as
    delivered when answered) and never reused, so the cumulative trace is
    strictly increasing and gap-free even when handlers interleave queries
    with further sends.
    """

    def __init__(self, max_messages: int = 10_000):
        self.max_messages = max_messages
        self._agents: Dict[str, Agent] = {}
        self._queue: List[Message] = []
        self._delivered: List[Message] = []
        self._next_seq = 1

    # -- registry -----------------------------------------------------------

    def register(self, agent: Agent) -> Agent:
        if agent.name in self._agents:
            raise ValueError(f"agent {agent.name!r} already registered")
        self._agents[agent.name] = agent
        return agent

    def agent(self, name: str) -> Agent:
        try:
            return self._agents[name]
        except KeyError:
            raise UnknownAgent(f"no agent named {name!r}") from None

    def agent_names(self) -> List[str]:
        return list(self._agents)

    # -- messaging ----------------------------------------------------------

    def send(
        self,
        sender: str,
        receiver: str,
        performative: Performative,
        content: Literal,
    ) -> Message:
        """Enqueue one point-to-point message."""
        self.agent(sender)
        self.agent(receiver)
        if sender == receiver:
            raise ValueError("an agent cannot message itself")
        if performative is Performative.ASK_ONE:
            raise ValueError("queries go through ask_one(), not send()")
        message = Message(
            sender=sender,
            receiver=receiver,
            performative=performative,
            content=content,
        )
        self._queue.append(message)
        return message

    def broadcast(self, sender: str, content: Literal) -> List[Message]:
        """Tell every other registered agent, in registration order."""
        self.agent(sender)
        messages = []
        for name in self._agents:
            if name == sender:
                continue
            messages.append(Message(
                sender=sender,
                receiver=name,
                performative=Performative.BROADCAST_TELL,
                content=content,
            ))
        self._queue.extend(messages)
        return messages

    def ask_one(
        self,
        asker: str,
        target: str,
        pattern: Literal,
    ) -> Optional[Literal]:
        """Synchronously query the target's beliefs, oldest match first.

        The query itself is recorded in the trace; the answer returns to
        the caller directly and does not travel as a message.
        """
        self.agent(asker)
        answer = self.agent(target).beliefs.first_match(pattern)
        self._delivered.append(Message(
            sender=asker,
            receiver=target,
            performative=Performative.ASK_ONE,
            content=pattern,
            seq=self._take_seq(),
        ))
        return answer

    def dispatch_until_quiescent(self) -> List[Message]:
        """Deliver queued messages FIFO until none remain.

        Handlers may enqueue further messages; those are delivered in the
        same run.  Raises NonTermination when one run exceeds the message
        budget, which is the guard against ping-ponging plans.
        """
        run: List[Message] = []
        while self._queue:
            if len(run) >= self.max_messages:
                raise NonTermination(
                    f"dispatch exceeded {self.max_messages} messages"
                )
            message = self._queue.pop(0)
            self._deliver(message)
            run.append(message)
        return run

    def _deliver(self, message: Message) -> None:
        receiver = self.agent(message.receiver)
        message.seq = self._take_seq()
        if _is_tell_like(message.performative):
            receiver.beliefs.add(message.content.with_source(message.sender))
        plan = receiver.first_applicable_plan(message)
        self._delivered.append(message)
        if plan is not None:
            plan.handler(receiver, message, self)

    def _take_seq(self) -> int:
        seq = self._next_seq
        self._next_seq += 1
        return seq

    # -- trace --------------------------------------------------------------

    @property
    def trace(self) -> List[Message]:
        """Every delivered message and answered query so far, in order."""
        return list(self._delivered)


def serialize_trace(messages: List[Message]) -> str:
    """One `seq|sender|performative|receiver|literal` line per message."""
    if not messages:
        return ""
    return "\n".join(message.trace_line() for message in messages) + "\n"
