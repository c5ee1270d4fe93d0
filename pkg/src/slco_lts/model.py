"""Abstract syntax for SLCO models.

All nodes are frozen dataclasses. Source locations are carried for
diagnostics but excluded from equality, so structurally identical models
compare equal regardless of where they were parsed from.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union


@dataclass(frozen=True)
class Loc:
    """1-based (line, column) position in the source text."""

    line: int
    col: int


UNKNOWN_LOC = Loc(0, 0)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    loc: Loc
    message: str

    def render(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.loc.line}:{self.loc.col}: {self.severity}: {self.message}"


class SlcoType(Enum):
    INTEGER = "Integer"
    BOOLEAN = "Boolean"
    STRING = "String"


Value = Union[int, bool, str]


def default_initial_value(t: SlcoType) -> Value:
    """Default for an uninitialized variable of type t."""
    if t is SlcoType.INTEGER:
        return 0
    if t is SlcoType.BOOLEAN:
        return True
    if t is SlcoType.STRING:
        return ""
    raise ValueError(f"unknown type {t!r}")


def format_value(v: Value) -> str:
    """Render a runtime value the way model text spells literals."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'


# ---------------------------------------------------------------------------
# Expressions


class Expression:
    pass


@dataclass(frozen=True)
class IntLit(Expression):
    value: int
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class BoolLit(Expression):
    value: bool
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class StringLit(Expression):
    value: str
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class VarRef(Expression):
    name: str
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class Unary(Expression):
    op: str  # only "not"
    operand: Expression
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class Binary(Expression):
    op: str  # + - * <= < >= > == != and or
    lhs: Expression
    rhs: Expression
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


# ---------------------------------------------------------------------------
# Statements and triggers


class Statement:
    pass


@dataclass(frozen=True)
class Assignment(Statement):
    target: str
    value: Expression
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class SendSignal(Statement):
    signal: str
    args: tuple[Expression, ...]
    port: str
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class SignalReception:
    """Reception trigger.  Arguments are stored as raw expressions; whether an
    argument binds a variable or matches a value depends on scope, see
    classify_reception_arg."""

    signal: str
    args: tuple[Expression, ...]
    port: str
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class Delay:
    millis: int
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


Trigger = Union[SignalReception, Delay]


@dataclass(frozen=True)
class BindVar:
    name: str


@dataclass(frozen=True)
class MatchExpr:
    expr: Expression


RecvArg = Union[BindVar, MatchExpr]


def classify_reception_arg(arg: Expression, scope_vars) -> RecvArg:
    """A bare identifier naming a variable in scope binds the received value;
    any other expression is an equality condition on it."""
    if isinstance(arg, VarRef) and arg.name in scope_vars:
        return BindVar(arg.name)
    return MatchExpr(arg)


# ---------------------------------------------------------------------------
# Declarations


@dataclass(frozen=True)
class VarDecl:
    name: str
    type: SlcoType
    initial: Value | None = None
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class Transition:
    name: str
    source: str
    target: str
    trigger: Trigger | None = None
    guard: Expression | None = None
    effect: tuple[Statement, ...] = ()
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class StateMachine:
    name: str
    variables: tuple[VarDecl, ...]
    initial_state: str
    plain_states: tuple[str, ...]
    final_states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)

    @property
    def states(self) -> tuple[str, ...]:
        return (self.initial_state,) + self.plain_states + tuple(
            s for s in self.final_states if s != self.initial_state
        )

    def is_final(self, state: str) -> bool:
        return state in self.final_states

    def outgoing(self, state: str) -> list[tuple[int, Transition]]:
        """(identifier, transition) pairs leaving `state`, in declaration order."""
        return [(i, t) for i, t in enumerate(self.transitions) if t.source == state]


def transition_identifier(sm: StateMachine, t: Transition) -> int:
    """0-based declaration index of t within sm's transition list."""
    for i, tr in enumerate(sm.transitions):
        if tr is t:
            return i
    for i, tr in enumerate(sm.transitions):
        if tr == t:
            return i
    raise ValueError(f"transition {t.name!r} is not a transition of machine {sm.name!r}")


@dataclass(frozen=True)
class Class:
    name: str
    variables: tuple[VarDecl, ...]
    ports: tuple[str, ...]
    machines: tuple[StateMachine, ...]
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class ObjectDecl:
    name: str
    class_name: str
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


class ChannelKind(Enum):
    SYNC = "sync"
    ASYNC_LOSSLESS = "async lossless"
    ASYNC_LOSSY = "async lossy"


ObjectPort = tuple[str, str]  # (object name, port name)


@dataclass(frozen=True)
class Channel:
    name: str
    arg_types: tuple[SlcoType, ...]
    kind: ChannelKind
    ends: tuple[ObjectPort, ObjectPort]  # unidirectional: (from, to)
    bidirectional: bool = False
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)


@dataclass(frozen=True)
class Model:
    name: str
    classes: tuple[Class, ...]
    objects: tuple[ObjectDecl, ...]
    channels: tuple[Channel, ...]
    loc: Loc = field(default=UNKNOWN_LOC, compare=False, repr=False)

    def class_by_name(self, name: str) -> Class:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(name)
