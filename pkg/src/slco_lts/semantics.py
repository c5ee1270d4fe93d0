"""Operational semantics: configurations, steps, and state-space exploration.

A configuration is one global state of the system: one active state per
machine instance, a valuation of all declared variables, and a FIFO buffer
per asynchronous channel direction.  Exploration is a breadth-first fixpoint
over the successor relation; discovery order numbers the configurations.

Semantic choices baked in here:
  * buffers have a configurable capacity (default 1); a lossless send into a
    full buffer is disabled, a lossy send into a full buffer only loses,
  * a lossy send branches nondeterministically into delivery and loss, both
    carrying the send label,
  * delay triggers are time-abstract: always enabled, labeled ``delay(d)``,
  * guards gate only the first basic activity of a transition and are never
    re-evaluated from partial states,
  * a synchronous communication is one combined step advancing sender and
    receiver, labeled ``communicating S(args) over CHANNEL``,
  * integers are checked 64-bit; overflow aborts exploration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Union

from .model import (
    Assignment,
    Binary,
    BoolLit,
    ChannelKind,
    Delay,
    Expression,
    IntLit,
    Model,
    SendSignal,
    SignalReception,
    Statement,
    StateMachine,
    StringLit,
    Transition,
    Unary,
    Value,
    VarRef,
    default_initial_value,
    format_value,
    transition_identifier,
)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class ExplorationError(Exception):
    """Exploration could not produce a complete state space."""


class IntegerOverflowError(ExplorationError):
    pass


class LimitExceededError(ExplorationError):
    """The configured maxConfigurations bound was hit mid-exploration."""

    def __init__(self, limit: int, frontier: int):
        super().__init__(f"state space exceeds {limit} configurations ({frontier} unprocessed)")
        self.limit = limit
        self.frontier = frontier


# ---------------------------------------------------------------------------
# Configurations


@dataclass(frozen=True)
class PlainState:
    obj: str
    machine: str
    state: str


@dataclass(frozen=True)
class PartialState:
    """A machine mid-transition: statement stmt_index of the transition with
    the given identifier is the next to execute; state is the source state."""

    obj: str
    machine: str
    state: str
    stmt_index: int
    transition_id: int


ActiveState = Union[PlainState, PartialState]

# (object, machine or None for class variables, variable)
VarKey = tuple[str, Union[str, None], str]

# (channel, sender object, sender port, receiver object, receiver port)
BufferKey = tuple[str, str, str, str, str]


@dataclass(frozen=True)
class SignalInstance:
    signal: str
    args: tuple[Value, ...]


@dataclass(frozen=True)
class Configuration:
    """Statuses are annotations, not identity: two configurations that differ
    only in status compare (and hash) equal."""

    active: tuple[ActiveState, ...]
    valuation: tuple[tuple[VarKey, Value], ...]
    buffers: tuple[tuple[BufferKey, tuple[SignalInstance, ...]], ...]
    status: frozenset = field(default=frozenset(), compare=False)


@dataclass(frozen=True)
class Step:
    source: Configuration
    label: str | None
    target: Configuration


@dataclass
class CsGraph:
    """All reachable configurations (discovery order) plus all steps."""

    configurations: list[Configuration]
    steps: list[Step]
    index: dict[Configuration, int]

    def step_indices(self) -> list[tuple[int, str | None, int]]:
        return [(self.index[s.source], s.label, self.index[s.target]) for s in self.steps]


@dataclass(frozen=True)
class ExploreLimits:
    max_configurations: int | None = None
    buffer_capacity: int = 1


# ---------------------------------------------------------------------------
# Expression evaluation


def _apply_binary(op: str, lv: Value, rv: Value) -> Value:
    if op in ("+", "-", "*"):
        r = lv + rv if op == "+" else lv - rv if op == "-" else lv * rv
        if not (INT64_MIN <= r <= INT64_MAX):
            raise IntegerOverflowError(f"integer overflow evaluating '{op}'")
        return r
    if op == "<=":
        return lv <= rv
    if op == "<":
        return lv < rv
    if op == ">=":
        return lv >= rv
    if op == ">":
        return lv > rv
    if op == "==":
        return lv == rv
    if op == "!=":
        return lv != rv
    raise ValueError(f"unknown operator {op!r}")


def _eval(e: Expression, lookup: Callable[[str], Value]) -> Value:
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, BoolLit):
        return e.value
    if isinstance(e, StringLit):
        return e.value
    if isinstance(e, VarRef):
        return lookup(e.name)
    if isinstance(e, Unary):
        return not _eval(e.operand, lookup)
    if isinstance(e, Binary):
        if e.op == "and":
            return bool(_eval(e.lhs, lookup)) and bool(_eval(e.rhs, lookup))
        if e.op == "or":
            return bool(_eval(e.lhs, lookup)) or bool(_eval(e.rhs, lookup))
        return _apply_binary(e.op, _eval(e.lhs, lookup), _eval(e.rhs, lookup))
    raise TypeError(f"not an expression: {e!r}")


def evaluate_expression(
    e: Expression,
    valuation: Iterable[tuple[VarKey, Value]],
    bindings: dict[str, Value],
    scope: tuple[str, str],
) -> Value:
    """Evaluate e with name resolution: bindings, then the scope machine's
    variables, then the scope object's class variables."""
    table = dict(valuation)
    obj, machine = scope

    def lookup(name: str) -> Value:
        if name in bindings:
            return bindings[name]
        if (obj, machine, name) in table:
            return table[(obj, machine, name)]
        return table[(obj, None, name)]

    return _eval(e, lookup)


# ---------------------------------------------------------------------------
# Engine


def _format_args(values: Iterable[Value]) -> str:
    return ", ".join(format_value(v) for v in values)


class _Engine:
    """Precomputed layout of a validated model plus the step rules."""

    def __init__(self, model: Model, limits: ExploreLimits = ExploreLimits()):
        self.model = model
        self.capacity = limits.buffer_capacity
        self.max_configurations = limits.max_configurations
        classes = {c.name: c for c in model.classes}

        # Machine instances, canonical order: objects, then machines per class.
        self.machines: list[tuple[str, StateMachine]] = []
        for od in model.objects:
            for sm in classes[od.class_name].machines:
                self.machines.append((od.name, sm))
        self.machine_index = {(o, sm.name): i for i, (o, sm) in enumerate(self.machines)}

        # Variable slots, canonical order: per object its class variables,
        # then per machine its own variables.
        self.var_keys: list[VarKey] = []
        self.var_decls = []
        for od in model.objects:
            cls = classes[od.class_name]
            for v in cls.variables:
                self.var_keys.append((od.name, None, v.name))
                self.var_decls.append(v)
            for sm in cls.machines:
                for v in sm.variables:
                    self.var_keys.append((od.name, sm.name, v.name))
                    self.var_decls.append(v)
        self.var_slot = {k: i for i, k in enumerate(self.var_keys)}

        # Per machine instance: variable name -> slot (machine shadows class).
        self.resolver: list[dict[str, int]] = []
        for od_name, sm in self.machines:
            cls = classes[next(o.class_name for o in model.objects if o.name == od_name)]
            r = {v.name: self.var_slot[(od_name, None, v.name)] for v in cls.variables}
            r.update({v.name: self.var_slot[(od_name, sm.name, v.name)] for v in sm.variables})
            self.resolver.append(r)

        # Buffers (async channels) and rendezvous links (sync channels),
        # canonical order: channel declaration order, declared direction first.
        self.buffer_keys: list[BufferKey] = []
        self.send_slot: dict[tuple[str, str], int] = {}
        self.recv_slot: dict[tuple[str, str], int] = {}
        self.sync_link: dict[tuple[str, str], tuple[str, str, str]] = {}
        self.port_kind: dict[tuple[str, str], ChannelKind] = {}
        for ch in model.channels:
            (o1, p1), (o2, p2) = ch.ends
            self.port_kind[(o1, p1)] = ch.kind
            self.port_kind[(o2, p2)] = ch.kind
            if ch.kind is ChannelKind.SYNC:
                self.sync_link[(o1, p1)] = (ch.name, o2, p2)
                if ch.bidirectional:
                    self.sync_link[(o2, p2)] = (ch.name, o1, p1)
            else:
                self._add_buffer((ch.name, o1, p1, o2, p2))
                if ch.bidirectional:
                    self._add_buffer((ch.name, o2, p2, o1, p1))
        self.channel_kind = {ch.name: ch.kind for ch in model.channels}

        # Outgoing transitions per (machine instance, state).
        self.outgoing: dict[tuple[int, str], list[tuple[int, Transition]]] = {}
        for i, (_, sm) in enumerate(self.machines):
            for tid, t in enumerate(sm.transitions):
                self.outgoing.setdefault((i, t.source), []).append((tid, t))

    def _add_buffer(self, key: BufferKey) -> None:
        slot = len(self.buffer_keys)
        self.buffer_keys.append(key)
        self.send_slot[(key[1], key[2])] = slot
        self.recv_slot[(key[3], key[4])] = slot

    # -- configuration construction ----------------------------------------

    def _all_final(self, active: tuple[ActiveState, ...]) -> bool:
        return all(
            isinstance(a, PlainState) and self.machines[i][1].is_final(a.state)
            for i, a in enumerate(active)
        )

    def _config(self, active, valuation, buffers, initial: bool = False) -> Configuration:
        status = set()
        if initial:
            status.add("initial")
        if self._all_final(active):
            status.add("final")
        return Configuration(tuple(active), tuple(valuation), tuple(buffers), frozenset(status))

    def initial(self) -> Configuration:
        active = tuple(PlainState(o, sm.name, sm.initial_state) for o, sm in self.machines)
        valuation = tuple(
            (key, decl.initial if decl.initial is not None else default_initial_value(decl.type))
            for key, decl in zip(self.var_keys, self.var_decls)
        )
        buffers = tuple((key, ()) for key in self.buffer_keys)
        return self._config(active, valuation, buffers, initial=True)

    # -- evaluation ---------------------------------------------------------

    def eval(self, e: Expression, c: Configuration, midx: int, bindings: dict[str, Value]) -> Value:
        resolver = self.resolver[midx]

        def lookup(name: str) -> Value:
            if name in bindings:
                return bindings[name]
            return c.valuation[resolver[name]][1]

        return _eval(e, lookup)

    def _guard_holds(self, t: Transition, c: Configuration, midx: int, bindings: dict[str, Value]) -> bool:
        return t.guard is None or self.eval(t.guard, c, midx, bindings) is True

    # -- configuration updates ---------------------------------------------

    def _with(self, c, active_updates: dict[int, ActiveState], val_updates=(), buf_updates=()):
        active = list(c.active)
        for i, a in active_updates.items():
            active[i] = a
        valuation = list(c.valuation)
        for slot, v in val_updates:
            valuation[slot] = (valuation[slot][0], v)
        buffers = list(c.buffers)
        for slot, contents in buf_updates:
            buffers[slot] = (buffers[slot][0], tuple(contents))
        return self._config(active, valuation, buffers)

    # -- reception matching --------------------------------------------------

    def _match_reception(
        self, rec: SignalReception, midx: int, c: Configuration, signal: str, values: tuple[Value, ...]
    ) -> dict[str, Value] | None:
        """Bindings if the reception accepts (signal, values), else None.
        Match expressions are evaluated left to right, seeing earlier bindings."""
        if rec.signal != signal or len(rec.args) != len(values):
            return None
        resolver = self.resolver[midx]
        bindings: dict[str, Value] = {}
        for arg, value in zip(rec.args, values):
            if isinstance(arg, VarRef) and arg.name in resolver:
                bindings[arg.name] = value
            elif self.eval(arg, c, midx, bindings) != value:
                return None
        return bindings

    def _receiver_advance(self, midx: int, a: PlainState, tid: int, t: Transition) -> ActiveState:
        if t.effect:
            return PartialState(a.obj, a.machine, a.state, 0, tid)
        return PlainState(a.obj, a.machine, t.target)

    # -- statement execution -------------------------------------------------

    def _exec_statement(
        self, c: Configuration, midx: int, stmt: Statement, next_active: ActiveState
    ) -> list[tuple[Configuration, str | None]]:
        obj, _ = self.machines[midx]
        if isinstance(stmt, Assignment):
            slot = self.resolver[midx][stmt.target]
            value = self.eval(stmt.value, c, midx, {})
            return [(self._with(c, {midx: next_active}, [(slot, value)]), None)]
        assert isinstance(stmt, SendSignal)
        values = tuple(self.eval(a, c, midx, {}) for a in stmt.args)
        key = (obj, stmt.port)
        kind = self.port_kind[key]
        if kind is ChannelKind.SYNC:
            return self._rendezvous(c, midx, key, stmt.signal, values, next_active)
        label = f"sending {stmt.signal}({_format_args(values)}) to {stmt.port}"
        slot = self.send_slot[key]
        contents = c.buffers[slot][1]
        out: list[tuple[Configuration, str | None]] = []
        if len(contents) < self.capacity:
            enqueued = contents + (SignalInstance(stmt.signal, values),)
            out.append((self._with(c, {midx: next_active}, (), [(slot, enqueued)]), label))
        if kind is ChannelKind.ASYNC_LOSSY:
            out.append((self._with(c, {midx: next_active}), label))
        return out

    def _rendezvous(
        self,
        c: Configuration,
        sender_midx: int,
        key: tuple[str, str],
        signal: str,
        values: tuple[Value, ...],
        sender_next: ActiveState,
    ) -> list[tuple[Configuration, str | None]]:
        channel, peer_obj, peer_port = self.sync_link[key]
        label = f"communicating {signal}({_format_args(values)}) over {channel}"
        out: list[tuple[Configuration, str | None]] = []
        for ridx, (obj, sm) in enumerate(self.machines):
            if obj != peer_obj or ridx == sender_midx:
                continue
            a = c.active[ridx]
            if not isinstance(a, PlainState):
                continue
            for rtid, rt in self.outgoing.get((ridx, a.state), []):
                rec = rt.trigger
                if not isinstance(rec, SignalReception) or rec.port != peer_port:
                    continue
                bindings = self._match_reception(rec, ridx, c, signal, values)
                if bindings is None or not self._guard_holds(rt, c, ridx, bindings):
                    continue
                resolver = self.resolver[ridx]
                updates = [(resolver[name], v) for name, v in bindings.items()]
                receiver_next = self._receiver_advance(ridx, a, rtid, rt)
                out.append(
                    (self._with(c, {sender_midx: sender_next, ridx: receiver_next}, updates), label)
                )
        return out

    # -- step rules ----------------------------------------------------------

    def plain_steps(
        self, c: Configuration, midx: int, tid: int, t: Transition
    ) -> list[tuple[Configuration, str | None]]:
        """All configurations reachable by performing the first basic activity
        of transition t from the plain active state of machine midx."""
        a = c.active[midx]
        assert isinstance(a, PlainState)
        trig = t.trigger
        if isinstance(trig, SignalReception):
            key = (a.obj, trig.port)
            if self.port_kind.get(key) is ChannelKind.SYNC:
                return []  # sync receptions only fire as part of a sender's rendezvous
            slot = self.recv_slot.get(key)
            if slot is None:
                return []
            contents = c.buffers[slot][1]
            if not contents:
                return []
            head = contents[0]
            bindings = self._match_reception(trig, midx, c, head.signal, head.args)
            if bindings is None or not self._guard_holds(t, c, midx, bindings):
                return []
            resolver = self.resolver[midx]
            updates = [(resolver[name], v) for name, v in bindings.items()]
            next_active = self._receiver_advance(midx, a, tid, t)
            label = f"receiving {head.signal}({_format_args(head.args)})"
            return [(self._with(c, {midx: next_active}, updates, [(slot, contents[1:])]), label)]
        if not self._guard_holds(t, c, midx, {}):
            return []
        if isinstance(trig, Delay):
            # Time-abstract: the elapse of the delay is the first activity.
            next_active = self._receiver_advance(midx, a, tid, t)
            return [(self._with(c, {midx: next_active}), f"delay({trig.millis})")]
        if not t.effect:
            return [(self._with(c, {midx: PlainState(a.obj, a.machine, t.target)}), None)]
        if len(t.effect) == 1:
            next_active: ActiveState = PlainState(a.obj, a.machine, t.target)
        else:
            next_active = PartialState(a.obj, a.machine, a.state, 1, tid)
        return self._exec_statement(c, midx, t.effect[0], next_active)

    def partial_steps(self, c: Configuration, midx: int) -> list[tuple[Configuration, str | None]]:
        """Execute the pending statement of the partial active state of midx."""
        a = c.active[midx]
        assert isinstance(a, PartialState)
        _, sm = self.machines[midx]
        t = sm.transitions[a.transition_id]
        stmt = t.effect[a.stmt_index]
        if a.stmt_index == len(t.effect) - 1:
            next_active: ActiveState = PlainState(a.obj, a.machine, t.target)
        else:
            next_active = PartialState(a.obj, a.machine, a.state, a.stmt_index + 1, a.transition_id)
        return self._exec_statement(c, midx, stmt, next_active)

    # -- successors and exploration ------------------------------------------

    def successors(self, c: Configuration) -> tuple[list[Configuration], list[Step]]:
        configs: list[Configuration] = []
        steps: list[Step] = []
        seen_cfg: set[Configuration] = set()
        seen_step: set[tuple[str | None, Configuration]] = set()
        for midx, a in enumerate(c.active):
            if isinstance(a, PlainState):
                results: list[tuple[Configuration, str | None]] = []
                for tid, t in self.outgoing.get((midx, a.state), []):
                    results.extend(self.plain_steps(c, midx, tid, t))
            else:
                results = self.partial_steps(c, midx)
            for cfg, label in results:
                if (label, cfg) not in seen_step:
                    seen_step.add((label, cfg))
                    steps.append(Step(c, label, cfg))
                if cfg not in seen_cfg:
                    seen_cfg.add(cfg)
                    configs.append(cfg)
        return configs, steps

    def explore(self) -> CsGraph:
        init = self.initial()
        configurations = [init]
        index = {init: 0}
        steps: list[Step] = []
        cursor = 0
        while cursor < len(configurations):
            succ, new_steps = self.successors(configurations[cursor])
            steps.extend(new_steps)
            for cfg in succ:
                if cfg not in index:
                    if self.max_configurations is not None and len(configurations) >= self.max_configurations:
                        raise LimitExceededError(
                            self.max_configurations, len(configurations) - cursor
                        )
                    index[cfg] = len(configurations)
                    configurations.append(cfg)
            cursor += 1
        return CsGraph(configurations, steps, index)

    def canonicalize(self, c: Configuration) -> Configuration:
        active_by_key = {(a.obj, a.machine): a for a in c.active}
        active = tuple(active_by_key[(o, sm.name)] for o, sm in self.machines)
        val_by_key = dict(c.valuation)
        valuation = tuple((k, val_by_key[k]) for k in self.var_keys)
        buf_by_key = dict(c.buffers)
        buffers = tuple((k, buf_by_key[k]) for k in self.buffer_keys)
        return Configuration(active, valuation, buffers, c.status)


# ---------------------------------------------------------------------------
# Public operations


def initial_configuration(m: Model) -> Configuration:
    return _Engine(m).initial()


def take_step_plain(
    m: Model, c: Configuration, a: PlainState, t: Transition, limits: ExploreLimits = ExploreLimits()
) -> tuple[list[Configuration], list[Step]]:
    engine = _Engine(m, limits)
    midx = engine.machine_index[(a.obj, a.machine)]
    tid = transition_identifier(engine.machines[midx][1], t)
    return _collect(c, engine.plain_steps(c, midx, tid, t))


def take_step_partial(
    m: Model, c: Configuration, a: PartialState, t: Transition, limits: ExploreLimits = ExploreLimits()
) -> tuple[list[Configuration], list[Step]]:
    engine = _Engine(m, limits)
    midx = engine.machine_index[(a.obj, a.machine)]
    sm = engine.machines[midx][1]
    if transition_identifier(sm, t) != a.transition_id:
        raise ValueError("a partial active state can only proceed with its pending transition")
    return _collect(c, engine.partial_steps(c, midx))


def _collect(
    c: Configuration, results: list[tuple[Configuration, str | None]]
) -> tuple[list[Configuration], list[Step]]:
    configs: list[Configuration] = []
    steps: list[Step] = []
    seen_cfg: set[Configuration] = set()
    seen_step: set[tuple[str | None, Configuration]] = set()
    for cfg, label in results:
        if (label, cfg) not in seen_step:
            seen_step.add((label, cfg))
            steps.append(Step(c, label, cfg))
        if cfg not in seen_cfg:
            seen_cfg.add(cfg)
            configs.append(cfg)
    return configs, steps


def successors(
    m: Model, c: Configuration, limits: ExploreLimits = ExploreLimits()
) -> tuple[list[Configuration], list[Step]]:
    return _Engine(m, limits).successors(c)


def explore(m: Model, limits: ExploreLimits = ExploreLimits()) -> CsGraph:
    """Breadth-first fixpoint from the initial configuration; deterministic."""
    return _Engine(m, limits).explore()


def canonicalize_configuration(m: Model, c: Configuration) -> Configuration:
    """Reorder active states, valuation entries, and buffers into the model's
    declaration order.  Idempotent."""
    return _Engine(m).canonicalize(c)
