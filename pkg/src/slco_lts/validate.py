"""Static well-formedness checks for parsed SLCO models.

validate_model returns diagnostics in a deterministic order (declaration
order of the offending constructs); an empty list means the model is safe
to hand to the semantics engine.
"""

from __future__ import annotations

from .model import (
    Assignment,
    Binary,
    BindVar,
    BoolLit,
    Channel,
    ChannelKind,
    Class,
    Delay,
    Diagnostic,
    Expression,
    IntLit,
    Loc,
    MatchExpr,
    Model,
    ObjectDecl,
    SendSignal,
    SignalReception,
    SlcoType,
    StateMachine,
    StringLit,
    Transition,
    Unary,
    UNKNOWN_LOC,
    VarDecl,
    VarRef,
    classify_reception_arg,
)

_INT_OPS = {"+", "-", "*"}
_CMP_OPS = {"<=", "<", ">=", ">"}
_EQ_OPS = {"==", "!="}
_BOOL_OPS = {"and", "or"}


def _value_type(v) -> SlcoType:
    if isinstance(v, bool):
        return SlcoType.BOOLEAN
    if isinstance(v, int):
        return SlcoType.INTEGER
    return SlcoType.STRING


class _Checker:
    def __init__(self, model: Model):
        self.model = model
        self.diags: list[Diagnostic] = []
        self.classes = {}
        # (object, port) -> (channel, end index)
        self.port_ends: dict[tuple[str, str], tuple[Channel, int]] = {}

    def error(self, loc: Loc, message: str) -> None:
        self.diags.append(Diagnostic("error", loc, message))

    # -- scope helpers ------------------------------------------------------

    def scope_of(self, cls: Class, sm: StateMachine) -> dict[str, SlcoType]:
        scope = {v.name: v.type for v in cls.variables}
        scope.update({v.name: v.type for v in sm.variables})
        return scope

    def expr_type(self, e: Expression, scope: dict[str, SlcoType]) -> SlcoType | None:
        """Type of e under scope, or None after reporting an error."""
        if isinstance(e, IntLit):
            return SlcoType.INTEGER
        if isinstance(e, BoolLit):
            return SlcoType.BOOLEAN
        if isinstance(e, StringLit):
            return SlcoType.STRING
        if isinstance(e, VarRef):
            t = scope.get(e.name)
            if t is None:
                self.error(e.loc, f"undeclared variable '{e.name}'")
            return t
        if isinstance(e, Unary):
            t = self.expr_type(e.operand, scope)
            if t is not None and t is not SlcoType.BOOLEAN:
                self.error(e.loc, f"'not' needs a Boolean operand, got {t.value}")
                return None
            return SlcoType.BOOLEAN if t is not None else None
        if isinstance(e, Binary):
            lt = self.expr_type(e.lhs, scope)
            rt = self.expr_type(e.rhs, scope)
            if lt is None or rt is None:
                return None
            if e.op in _INT_OPS or e.op in _CMP_OPS:
                if lt is not SlcoType.INTEGER or rt is not SlcoType.INTEGER:
                    self.error(e.loc, f"'{e.op}' needs Integer operands, got {lt.value} and {rt.value}")
                    return None
                return SlcoType.INTEGER if e.op in _INT_OPS else SlcoType.BOOLEAN
            if e.op in _EQ_OPS:
                if lt is not rt:
                    self.error(e.loc, f"'{e.op}' compares values of different types ({lt.value} vs {rt.value})")
                    return None
                return SlcoType.BOOLEAN
            if e.op in _BOOL_OPS:
                if lt is not SlcoType.BOOLEAN or rt is not SlcoType.BOOLEAN:
                    self.error(e.loc, f"'{e.op}' needs Boolean operands, got {lt.value} and {rt.value}")
                    return None
                return SlcoType.BOOLEAN
        self.error(UNKNOWN_LOC, f"unknown expression {e!r}")
        return None

    # -- top-level checks ---------------------------------------------------

    def check(self) -> list[Diagnostic]:
        self.check_names()
        for cls in self.model.classes:
            self.check_class_decls(cls)
        self.check_wiring()
        for obj in self.model.objects:
            cls = self.classes.get(obj.class_name)
            if cls is None:
                continue
            for sm in cls.machines:
                self.check_machine(obj, cls, sm)
        return self.diags

    def check_names(self) -> None:
        seen: set[str] = set()
        for cls in self.model.classes:
            if cls.name in seen:
                self.error(cls.loc, f"duplicate class name '{cls.name}'")
            seen.add(cls.name)
            self.classes[cls.name] = cls
        seen = set()
        for obj in self.model.objects:
            if obj.name in seen:
                self.error(obj.loc, f"duplicate object name '{obj.name}'")
            seen.add(obj.name)
            if obj.class_name not in self.classes:
                self.error(obj.loc, f"object '{obj.name}' references undeclared class '{obj.class_name}'")
        seen = set()
        for ch in self.model.channels:
            if ch.name in seen:
                self.error(ch.loc, f"duplicate channel name '{ch.name}'")
            seen.add(ch.name)

    def check_class_decls(self, cls: Class) -> None:
        seen: set[str] = set()
        for v in cls.variables:
            if v.name in seen:
                self.error(v.loc, f"duplicate variable '{v.name}' in class '{cls.name}'")
            seen.add(v.name)
            self.check_initializer(v)
        ports_seen: set[str] = set()
        for p in cls.ports:
            if p in ports_seen:
                self.error(cls.loc, f"duplicate port '{p}' in class '{cls.name}'")
            ports_seen.add(p)
        machines_seen: set[str] = set()
        for sm in cls.machines:
            if sm.name in machines_seen:
                self.error(sm.loc, f"duplicate state machine '{sm.name}' in class '{cls.name}'")
            machines_seen.add(sm.name)

    def check_initializer(self, v: VarDecl) -> None:
        if v.initial is not None and _value_type(v.initial) is not v.type:
            self.error(
                v.loc,
                f"initializer of '{v.name}' has type {_value_type(v.initial).value}, expected {v.type.value}",
            )

    def check_wiring(self) -> None:
        objects = {o.name: o for o in self.model.objects}
        for ch in self.model.channels:
            for end_index, (obj_name, port) in enumerate(ch.ends):
                obj = objects.get(obj_name)
                if obj is None:
                    self.error(ch.loc, f"channel '{ch.name}' references undeclared object '{obj_name}'")
                    continue
                cls = self.classes.get(obj.class_name)
                if cls is not None and port not in cls.ports:
                    self.error(
                        ch.loc,
                        f"channel '{ch.name}' references port '{port}' not declared by class '{obj.class_name}'",
                    )
                    continue
                key = (obj_name, port)
                if key in self.port_ends:
                    other = self.port_ends[key][0]
                    self.error(
                        ch.loc,
                        f"port {obj_name}.{port} is already attached to channel '{other.name}'",
                    )
                else:
                    self.port_ends[key] = (ch, end_index)

    # -- machine-level checks ----------------------------------------------

    def check_machine(self, obj: ObjectDecl, cls: Class, sm: StateMachine) -> None:
        where = f"{obj.name}.{sm.name}"
        seen_vars: set[str] = set()
        for v in sm.variables:
            if v.name in seen_vars:
                self.error(v.loc, f"duplicate variable '{v.name}' in machine '{sm.name}'")
            seen_vars.add(v.name)
            self.check_initializer(v)
        # The initial state may double as a final state; all other repeats
        # across the initial/plain/final groups are errors.
        declared: set[str] = {sm.initial_state}
        for st in sm.plain_states:
            if st in declared:
                self.error(sm.loc, f"state '{st}' declared more than once in machine '{sm.name}'")
            declared.add(st)
        for st in sm.final_states:
            if st in sm.plain_states or list(sm.final_states).count(st) > 1:
                self.error(sm.loc, f"state '{st}' declared more than once in machine '{sm.name}'")
            declared.add(st)
        scope = self.scope_of(cls, sm)
        for t in sm.transitions:
            if t.source not in declared:
                self.error(t.loc, f"transition '{t.name}' leaves undeclared state '{t.source}'")
            if t.target not in declared:
                self.error(t.loc, f"transition '{t.name}' targets undeclared state '{t.target}'")
            self.check_transition(obj, cls, sm, t, scope, where)

    def channel_at(self, obj: ObjectDecl, port: str, loc: Loc, sending: bool, what: str):
        """Channel attached to obj.port, checked for direction; None + error if unusable."""
        entry = self.port_ends.get((obj.name, port))
        if entry is None:
            self.error(loc, f"{what} uses port '{port}' of {obj.name}, which has no channel attached")
            return None
        ch, end_index = entry
        if not ch.bidirectional:
            if sending and end_index != 0:
                self.error(loc, f"{what} sends on the receiving end of channel '{ch.name}'")
                return None
            if not sending and end_index != 1:
                self.error(loc, f"{what} receives on the sending end of channel '{ch.name}'")
                return None
        return ch

    def check_transition(
        self,
        obj: ObjectDecl,
        cls: Class,
        sm: StateMachine,
        t: Transition,
        scope: dict[str, SlcoType],
        where: str,
    ) -> None:
        if isinstance(t.trigger, SignalReception):
            rec = t.trigger
            ch = self.channel_at(obj, rec.port, rec.loc, sending=False, what=f"reception in {where}")
            if ch is not None:
                if len(rec.args) != len(ch.arg_types):
                    self.error(
                        rec.loc,
                        f"signature mismatch: reception of '{rec.signal}' has {len(rec.args)} argument(s), "
                        f"channel '{ch.name}' carries {len(ch.arg_types)}",
                    )
                else:
                    for arg, expected in zip(rec.args, ch.arg_types):
                        classified = classify_reception_arg(arg, scope)
                        if isinstance(classified, BindVar):
                            actual = scope[classified.name]
                            if actual is not expected:
                                self.error(
                                    rec.loc,
                                    f"reception binds '{classified.name}' of type {actual.value}, "
                                    f"channel '{ch.name}' carries {expected.value}",
                                )
                        else:
                            at = self.expr_type(classified.expr, scope)
                            if at is not None and at is not expected:
                                self.error(
                                    rec.loc,
                                    f"reception match argument has type {at.value}, "
                                    f"channel '{ch.name}' carries {expected.value}",
                                )
        elif isinstance(t.trigger, Delay):
            if t.trigger.millis < 0:
                self.error(t.trigger.loc, "delay must be nonnegative")
        if t.guard is not None:
            gt = self.expr_type(t.guard, scope)
            if gt is not None and gt is not SlcoType.BOOLEAN:
                self.error(t.loc, f"guard of transition '{t.name}' must be Boolean, got {gt.value}")
        for stmt in t.effect:
            if isinstance(stmt, Assignment):
                vt = scope.get(stmt.target)
                if vt is None:
                    self.error(stmt.loc, f"assignment to undeclared variable '{stmt.target}'")
                    continue
                et = self.expr_type(stmt.value, scope)
                if et is not None and et is not vt:
                    self.error(
                        stmt.loc,
                        f"assignment to '{stmt.target}' of type {vt.value} from expression of type {et.value}",
                    )
            elif isinstance(stmt, SendSignal):
                ch = self.channel_at(obj, stmt.port, stmt.loc, sending=True, what=f"send in {where}")
                if ch is None:
                    continue
                if len(stmt.args) != len(ch.arg_types):
                    self.error(
                        stmt.loc,
                        f"signature mismatch: send of '{stmt.signal}' has {len(stmt.args)} argument(s), "
                        f"channel '{ch.name}' carries {len(ch.arg_types)}",
                    )
                    continue
                for arg, expected in zip(stmt.args, ch.arg_types):
                    at = self.expr_type(arg, scope)
                    if at is not None and at is not expected:
                        self.error(
                            stmt.loc,
                            f"send argument has type {at.value}, channel '{ch.name}' carries {expected.value}",
                        )


def validate_model(m: Model) -> list[Diagnostic]:
    """All well-formedness diagnostics for m, empty if the model is sound."""
    return _Checker(m).check()
