"""Textual SLCO concrete syntax: lexer, recursive-descent parser, printer.

Grammar (normative for .slco files):

    Model      = 'model' ID '{' 'classes' ClassDef*
                 'objects' (ID ':' ID)* 'channels' ChannelDef* '}'
    ClassDef   = ID '{' ['variables' VarDecl+] ['ports' ID+]
                 'state' 'machines' SMDef+ '}'
    VarDecl    = Type ID ['=' Literal]
    SMDef      = ID '{' ['variables' VarDecl+] 'initial' ID ['state' ID+]
                 ['final' ID+] 'transitions' TransDef* '}'
    TransDef   = ID 'from' ID 'to' ID '{' ['trigger' Trigger]
                 ['guard' Expr] ['effect' Stmt+] '}'
    Trigger    = 'receive' ID '(' Exprs? ')' 'from' ID | 'after' NAT 'ms'
    Stmt       = ID ':=' Expr | 'send' ID '(' Exprs? ')' 'to' ID
    ChannelDef = ID '(' Types? ')' Kind
                 ('from' ID '.' ID 'to' ID '.' ID |
                  'between' ID '.' ID 'and' ID '.' ID)
    Kind       = 'sync' | 'async' 'lossless' | 'async' 'lossy'

`//` comments run to end of line.  Keywords are reserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    Assignment,
    Binary,
    BoolLit,
    Channel,
    ChannelKind,
    Class,
    Delay,
    Diagnostic,
    Expression,
    IntLit,
    Loc,
    Model,
    ObjectDecl,
    SendSignal,
    SignalReception,
    SlcoType,
    StateMachine,
    Statement,
    StringLit,
    Transition,
    Unary,
    VarDecl,
    VarRef,
    Value,
)

KEYWORDS = frozenset(
    """model classes objects channels variables ports state machines initial
    final transitions from to trigger guard effect receive send after ms sync
    async lossless lossy between and or not true false Integer Boolean
    String""".split()
)

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>//[^\n]*)
    | (?P<nat>\d+)
    | (?P<string>"(?:[^"\\\n]|\\.)*")
    | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<op>:=|<=|>=|==|!=|[{}()<>,.:=+\-*])
    """,
    re.VERBOSE,
)

_TYPE_KEYWORDS = {"Integer": SlcoType.INTEGER, "Boolean": SlcoType.BOOLEAN, "String": SlcoType.STRING}

_COMPARISONS = ("<=", ">=", "==", "!=", "<", ">")


@dataclass(frozen=True)
class Token:
    kind: str  # NAT STRING ID KEYWORD OP EOF
    text: str
    loc: Loc


class ParseFailure(Exception):
    def __init__(self, loc: Loc, message: str):
        super().__init__(message)
        self.loc = loc
        self.message = message


def _unescape(raw: str) -> str:
    return re.sub(r"\\(.)", r"\1", raw[1:-1])


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseFailure(Loc(line, col), f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        lexeme = m.group()
        if kind not in ("ws", "comment"):
            if kind == "id":
                kind = "KEYWORD" if lexeme in KEYWORDS else "ID"
            else:
                kind = {"nat": "NAT", "string": "STRING", "op": "OP"}[kind]
            tokens.append(Token(kind, lexeme, Loc(line, col)))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("EOF", "", Loc(line, max(1, col - 1))))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token helpers ------------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("KEYWORD", "OP")

    def at_kind(self, kind: str) -> bool:
        return self.peek().kind == kind

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            got = self.peek()
            what = "end of input" if got.kind == "EOF" else repr(got.text)
            raise ParseFailure(got.loc, f"expected {text!r}, found {what}")
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ID":
            got = "end of input" if tok.kind == "EOF" else repr(tok.text)
            raise ParseFailure(tok.loc, f"expected {what}, found {got}")
        return self.advance()

    def nat(self) -> tuple[int, Loc]:
        tok = self.peek()
        if tok.kind != "NAT":
            raise ParseFailure(tok.loc, f"expected number, found {tok.text!r}")
        self.advance()
        return int(tok.text), tok.loc

    # -- model structure ----------------------------------------------------

    def model(self) -> Model:
        loc = self.expect("model").loc
        name = self.ident("model name").text
        self.expect("{")
        self.expect("classes")
        classes = []
        while self.at_kind("ID"):
            classes.append(self.class_def())
        self.expect("objects")
        objects = []
        while self.at_kind("ID"):
            tok = self.ident("object name")
            self.expect(":")
            cls = self.ident("class name").text
            objects.append(ObjectDecl(tok.text, cls, tok.loc))
        self.expect("channels")
        channels = []
        while self.at_kind("ID"):
            channels.append(self.channel_def())
        self.expect("}")
        if not self.at_kind("EOF"):
            raise ParseFailure(self.peek().loc, f"trailing input {self.peek().text!r} after model")
        return Model(name, tuple(classes), tuple(objects), tuple(channels), loc)

    def class_def(self) -> Class:
        tok = self.ident("class name")
        self.expect("{")
        variables = self.var_decls() if self.accept("variables") else []
        ports = []
        if self.accept("ports"):
            while self.at_kind("ID"):
                ports.append(self.ident().text)
        self.expect("state")
        self.expect("machines")
        machines = []
        while self.at_kind("ID"):
            machines.append(self.state_machine())
        if not machines:
            raise ParseFailure(self.peek().loc, "a class needs at least one state machine")
        self.expect("}")
        return Class(tok.text, tuple(variables), tuple(ports), tuple(machines), tok.loc)

    def var_decls(self) -> list[VarDecl]:
        decls = []
        while self.peek().text in _TYPE_KEYWORDS:
            type_tok = self.advance()
            name_tok = self.ident("variable name")
            initial: Value | None = None
            if self.accept("="):
                initial = self.literal()
            decls.append(VarDecl(name_tok.text, _TYPE_KEYWORDS[type_tok.text], initial, name_tok.loc))
        if not decls:
            raise ParseFailure(self.peek().loc, "expected a variable declaration")
        return decls

    def literal(self) -> Value:
        tok = self.peek()
        if tok.kind == "NAT":
            self.advance()
            return int(tok.text)
        if tok.text in ("true", "false"):
            self.advance()
            return tok.text == "true"
        if tok.kind == "STRING":
            self.advance()
            return _unescape(tok.text)
        raise ParseFailure(tok.loc, f"expected a literal, found {tok.text!r}")

    def state_machine(self) -> StateMachine:
        tok = self.ident("state machine name")
        self.expect("{")
        variables = self.var_decls() if self.accept("variables") else []
        self.expect("initial")
        initial = self.ident("initial state").text
        plain = []
        if self.accept("state"):
            while self.at_kind("ID"):
                plain.append(self.ident().text)
        finals = []
        if self.accept("final"):
            while self.at_kind("ID"):
                finals.append(self.ident().text)
        self.expect("transitions")
        transitions = []
        while self.at_kind("ID"):
            transitions.append(self.transition())
        self.expect("}")
        return StateMachine(
            tok.text, tuple(variables), initial, tuple(plain), tuple(finals), tuple(transitions), tok.loc
        )

    def transition(self) -> Transition:
        tok = self.ident("transition name")
        self.expect("from")
        source = self.ident("state name").text
        self.expect("to")
        target = self.ident("state name").text
        self.expect("{")
        trigger = None
        if self.accept("trigger"):
            trigger = self.trigger()
        guard = None
        if self.accept("guard"):
            guard = self.expression()
        effect: list[Statement] = []
        if self.accept("effect"):
            while self.at_kind("ID") or self.at("send"):
                effect.append(self.statement())
            if not effect:
                raise ParseFailure(self.peek().loc, "expected a statement after 'effect'")
        self.expect("}")
        return Transition(tok.text, source, target, trigger, guard, tuple(effect), tok.loc)

    def trigger(self):
        if self.at("receive"):
            loc = self.advance().loc
            signal = self.ident("signal name").text
            self.expect("(")
            args = []
            if not self.at(")"):
                args.append(self.expression())
                while self.accept(","):
                    args.append(self.expression())
            self.expect(")")
            self.expect("from")
            port = self.ident("port name").text
            return SignalReception(signal, tuple(args), port, loc)
        if self.at("after"):
            loc = self.advance().loc
            millis, _ = self.nat()
            self.expect("ms")
            return Delay(millis, loc)
        raise ParseFailure(self.peek().loc, f"expected 'receive' or 'after', found {self.peek().text!r}")

    def statement(self) -> Statement:
        if self.at("send"):
            loc = self.advance().loc
            signal = self.ident("signal name").text
            self.expect("(")
            args = []
            if not self.at(")"):
                args.append(self.expression())
                while self.accept(","):
                    args.append(self.expression())
            self.expect(")")
            self.expect("to")
            port = self.ident("port name").text
            return SendSignal(signal, tuple(args), port, loc)
        tok = self.ident("assignment target")
        self.expect(":=")
        return Assignment(tok.text, self.expression(), tok.loc)

    def channel_def(self) -> Channel:
        tok = self.ident("channel name")
        self.expect("(")
        arg_types = []
        if self.peek().text in _TYPE_KEYWORDS:
            arg_types.append(_TYPE_KEYWORDS[self.advance().text])
            while self.accept(","):
                type_tok = self.peek()
                if type_tok.text not in _TYPE_KEYWORDS:
                    raise ParseFailure(type_tok.loc, f"expected a type, found {type_tok.text!r}")
                arg_types.append(_TYPE_KEYWORDS[self.advance().text])
        self.expect(")")
        if self.accept("sync"):
            kind = ChannelKind.SYNC
        else:
            self.expect("async")
            if self.accept("lossless"):
                kind = ChannelKind.ASYNC_LOSSLESS
            else:
                self.expect("lossy")
                kind = ChannelKind.ASYNC_LOSSY
        if self.accept("from"):
            end1 = self.object_port()
            self.expect("to")
            end2 = self.object_port()
            bidirectional = False
        else:
            self.expect("between")
            end1 = self.object_port()
            self.expect("and")
            end2 = self.object_port()
            bidirectional = True
        return Channel(tok.text, tuple(arg_types), kind, (end1, end2), bidirectional, tok.loc)

    def object_port(self) -> tuple[str, str]:
        obj = self.ident("object name").text
        self.expect(".")
        port = self.ident("port name").text
        return (obj, port)

    # -- expressions --------------------------------------------------------

    def expression(self) -> Expression:
        return self.or_expr()

    def or_expr(self) -> Expression:
        e = self.and_expr()
        while self.at("or"):
            loc = self.advance().loc
            e = Binary("or", e, self.and_expr(), loc)
        return e

    def and_expr(self) -> Expression:
        e = self.not_expr()
        while self.at("and"):
            loc = self.advance().loc
            e = Binary("and", e, self.not_expr(), loc)
        return e

    def not_expr(self) -> Expression:
        if self.at("not"):
            loc = self.advance().loc
            return Unary("not", self.not_expr(), loc)
        return self.comparison()

    def comparison(self) -> Expression:
        e = self.additive()
        if self.peek().kind == "OP" and self.peek().text in _COMPARISONS:
            tok = self.advance()
            e = Binary(tok.text, e, self.additive(), tok.loc)
        return e

    def additive(self) -> Expression:
        e = self.term()
        while self.peek().kind == "OP" and self.peek().text in ("+", "-"):
            tok = self.advance()
            e = Binary(tok.text, e, self.term(), tok.loc)
        return e

    def term(self) -> Expression:
        e = self.primary()
        while self.peek().kind == "OP" and self.peek().text == "*":
            tok = self.advance()
            e = Binary("*", e, self.primary(), tok.loc)
        return e

    def primary(self) -> Expression:
        tok = self.peek()
        if tok.kind == "NAT":
            self.advance()
            return IntLit(int(tok.text), tok.loc)
        if tok.text in ("true", "false"):
            self.advance()
            return BoolLit(tok.text == "true", tok.loc)
        if tok.kind == "STRING":
            self.advance()
            return StringLit(_unescape(tok.text), tok.loc)
        if tok.kind == "ID":
            self.advance()
            return VarRef(tok.text, tok.loc)
        if self.at("("):
            self.advance()
            e = self.expression()
            self.expect(")")
            return e
        got = "end of input" if tok.kind == "EOF" else repr(tok.text)
        raise ParseFailure(tok.loc, f"expected an expression, found {got}")


def parse_model(text: str) -> Model | list[Diagnostic]:
    """Parse SLCO text.  Returns a Model, or error diagnostics on failure."""
    try:
        return _Parser(tokenize(text)).model()
    except ParseFailure as exc:
        return [Diagnostic("error", exc.loc, exc.message)]


# ---------------------------------------------------------------------------
# Pretty printer

_PRECEDENCE = {
    "or": 1,
    "and": 2,
    "<=": 4, "<": 4, ">=": 4, ">": 4, "==": 4, "!=": 4,
    "+": 5, "-": 5,
    "*": 6,
}


def expression_text(e: Expression, parent_prec: int = 0) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, StringLit):
        return '"' + e.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(e, VarRef):
        return e.name
    if isinstance(e, Unary):
        inner = expression_text(e.operand, 3)
        text = f"not {inner}"
        return f"({text})" if parent_prec > 3 else text
    if isinstance(e, Binary):
        prec = _PRECEDENCE[e.op]
        lhs = expression_text(e.lhs, prec)
        rhs = expression_text(e.rhs, prec + 1)
        text = f"{lhs} {e.op} {rhs}"
        return f"({text})" if parent_prec > prec else text
    raise TypeError(f"not an expression: {e!r}")


def _literal_text(v: Value) -> str:
    from .model import format_value

    return format_value(v)


def _statement_text(s: Statement) -> str:
    if isinstance(s, Assignment):
        return f"{s.target} := {expression_text(s.value)}"
    if isinstance(s, SendSignal):
        args = ", ".join(expression_text(a) for a in s.args)
        return f"send {s.signal}({args}) to {s.port}"
    raise TypeError(f"not a statement: {s!r}")


def _var_decl_text(v: VarDecl) -> str:
    text = f"{v.type.value} {v.name}"
    if v.initial is not None:
        text += f" = {_literal_text(v.initial)}"
    return text


def pretty_print(m: Model) -> str:
    """Canonical text for a model; re-parses to an equal Model."""
    out: list[str] = [f"model {m.name} {{"]
    out.append("  classes")
    for cls in m.classes:
        out.append(f"    {cls.name} {{")
        if cls.variables:
            out.append("      variables " + " ".join(_var_decl_text(v) for v in cls.variables))
        if cls.ports:
            out.append("      ports " + " ".join(cls.ports))
        out.append("      state machines")
        for sm in cls.machines:
            out.append(f"        {sm.name} {{")
            if sm.variables:
                out.append("          variables " + " ".join(_var_decl_text(v) for v in sm.variables))
            line = f"          initial {sm.initial_state}"
            if sm.plain_states:
                line += " state " + " ".join(sm.plain_states)
            if sm.final_states:
                line += " final " + " ".join(sm.final_states)
            out.append(line)
            out.append("          transitions")
            for t in sm.transitions:
                out.append(f"            {t.name} from {t.source} to {t.target} {{")
                if isinstance(t.trigger, SignalReception):
                    args = ", ".join(expression_text(a) for a in t.trigger.args)
                    out.append(f"              trigger receive {t.trigger.signal}({args}) from {t.trigger.port}")
                elif isinstance(t.trigger, Delay):
                    out.append(f"              trigger after {t.trigger.millis} ms")
                if t.guard is not None:
                    out.append(f"              guard {expression_text(t.guard)}")
                if t.effect:
                    out.append("              effect " + " ".join(_statement_text(s) for s in t.effect))
                out.append("            }")
            out.append("        }")
        out.append("    }")
    objects = " ".join(f"{o.name}:{o.class_name}" for o in m.objects)
    out.append("  objects" + (" " + objects if objects else ""))
    out.append("  channels")
    for ch in m.channels:
        types = ", ".join(t.value for t in ch.arg_types)
        (o1, p1), (o2, p2) = ch.ends
        if ch.bidirectional:
            wiring = f"between {o1}.{p1} and {o2}.{p2}"
        else:
            wiring = f"from {o1}.{p1} to {o2}.{p2}"
        out.append(f"    {ch.name}({types}) {ch.kind.value} {wiring}")
    out.append("}")
    return "\n".join(out) + "\n"
