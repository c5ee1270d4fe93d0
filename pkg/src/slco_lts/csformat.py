"""Textual rendering of configurations and steps, for debugging and goldens.

A configuration prints as an angle-bracketed tuple of active states, a
valuation, a buffer list, and an optional status:

    <
     <p, P, Initial> <q, Q, Initial>,
     [<<p, n>,0>, <<q, m>,0>],
     [<<p3_q3, p, P3, q, Q3>,>, <<q2_p2, q, Q2, p, P2>,<V, >>],
     initial
    >

A step prints as ``< source, "label"?, target >`` with the configurations
inlined.  Parsing is whitespace-insensitive.
"""

from __future__ import annotations

import re
from .model import Value, format_value
from .semantics import Configuration, CsGraph, PartialState, PlainState, Step

# Value-level term structures, shared by the emitter and the parser so that
# golden texts can be compared structurally:
#   active item: (obj, machine, state) or (obj, machine, state, k, tid)
#   valuation item: ((obj, var) | (obj, machine, var), value)
#   buffer item: ((channel, o1, p1, o2, p2), ((signal, (values...)), ...))
ConfigTerm = tuple[tuple, tuple, tuple, tuple]
StepTerm = tuple[ConfigTerm, "str | None", ConfigTerm]


class CsParseError(ValueError):
    pass


def configuration_term(c: Configuration) -> ConfigTerm:
    active = tuple(
        (a.obj, a.machine, a.state)
        if isinstance(a, PlainState)
        else (a.obj, a.machine, a.state, a.stmt_index, a.transition_id)
        for a in c.active
    )
    valuation = tuple(
        ((obj, var) if machine is None else (obj, machine, var), value)
        for (obj, machine, var), value in c.valuation
    )
    buffers = tuple(
        (key, tuple((s.signal, s.args) for s in contents)) for key, contents in c.buffers
    )
    status = tuple(s for s in ("initial", "final") if s in c.status)
    return (active, valuation, buffers, status)


def _signal_text(signal: str, args: tuple[Value, ...]) -> str:
    return f"<{signal}, {' '.join(format_value(v) for v in args)}>"


def configuration_text(c: Configuration, indent: str = "") -> str:
    active, valuation, buffers, status = configuration_term(c)
    active_text = " ".join("<" + ", ".join(_atom(x) for x in a) + ">" for a in active)
    val_text = ", ".join(f"<<{', '.join(key)}>,{format_value(v)}>" for key, v in valuation)
    buf_text = ", ".join(
        f"<<{', '.join(key)}>,{''.join(_signal_text(s, args) for s, args in contents)}>"
        for key, contents in buffers
    )
    lines = [f"{indent}<", f"{indent} {active_text},", f"{indent} [{val_text}],", f"{indent} [{buf_text}]"]
    if status:
        lines[-1] += ","
        lines.append(f"{indent} {' '.join(status)}")
    lines.append(f"{indent}>")
    return "\n".join(lines)


def _atom(x) -> str:
    return str(x)


def step_text(s: Step, indent: str = "") -> str:
    lines = [f"{indent}<", configuration_text(s.source, indent + " ") + ","]
    if s.label is not None:
        lines.append(f'{indent} "' + s.label.replace("\\", "\\\\").replace('"', '\\"') + '",')
    lines.append(configuration_text(s.target, indent + " "))
    lines.append(f"{indent}>")
    return "\n".join(lines)


def emit_cs(graph: CsGraph) -> str:
    """All configurations in discovery order, then all steps."""
    parts = [configuration_text(c) for c in graph.configurations]
    parts.extend(step_text(s) for s in graph.steps)
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# Parsing

_CS_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<string>"(?:[^"\\]|\\.)*")
    | (?P<int>-?\d+)
    | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<punct>[<>\[\],])
    """,
    re.VERBOSE,
)


def _cs_tokens(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _CS_TOKEN_RE.match(text, pos)
        if m is None:
            raise CsParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        if m.lastgroup != "ws":
            tokens.append(m.group())
        pos = m.end()
    return tokens


class _CsParser:
    def __init__(self, text: str):
        self.tokens = _cs_tokens(text)
        self.pos = 0

    def peek(self, ahead: int = 0) -> str | None:
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        if self.pos >= len(self.tokens):
            raise CsParseError("unexpected end of input")
        tok = self.tokens[self.pos]
        if expected is not None and tok != expected:
            raise CsParseError(f"expected {expected!r}, found {tok!r}")
        self.pos += 1
        return tok

    def value(self) -> Value:
        tok = self.take()
        if tok == "true":
            return True
        if tok == "false":
            return False
        if tok.startswith('"'):
            return re.sub(r"\\(.)", r"\1", tok[1:-1])
        try:
            return int(tok)
        except ValueError:
            raise CsParseError(f"expected a value, found {tok!r}")

    def ident(self) -> str:
        tok = self.take()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            raise CsParseError(f"expected an identifier, found {tok!r}")
        return tok

    def active_state(self) -> tuple:
        self.take("<")
        parts: list = [self.ident()]
        self.take(",")
        parts.append(self.ident())
        self.take(",")
        parts.append(self.ident())
        if self.peek() == ",":
            self.take(",")
            parts.append(int(self.take()))
            self.take(",")
            parts.append(int(self.take()))
        self.take(">")
        return tuple(parts)

    def keyed_entry(self):
        """<<id, id[, id]>, payload> where payload is a value (valuation) or a
        run of signal instances (buffer, key of five identifiers)."""
        self.take("<")
        self.take("<")
        key = [self.ident()]
        while self.peek() == ",":
            self.take(",")
            key.append(self.ident())
        self.take(">")
        self.take(",")
        if len(key) == 5:
            signals = []
            while self.peek() == "<":
                self.take("<")
                name = self.ident()
                self.take(",")
                args = []
                while self.peek() != ">":
                    args.append(self.value())
                self.take(">")
                signals.append((name, tuple(args)))
            self.take(">")
            return (tuple(key), tuple(signals))
        payload = self.value()
        self.take(">")
        return (tuple(key), payload)

    def configuration(self) -> ConfigTerm:
        self.take("<")
        active = [self.active_state()]
        while True:
            if self.peek() == ",":
                self.take(",")
                break
            active.append(self.active_state())
        self.take("[")
        valuation = []
        while self.peek() != "]":
            valuation.append(self.keyed_entry())
            if self.peek() == ",":
                self.take(",")
        self.take("]")
        self.take(",")
        self.take("[")
        buffers = []
        while self.peek() != "]":
            buffers.append(self.keyed_entry())
            if self.peek() == ",":
                self.take(",")
        self.take("]")
        status = []
        if self.peek() == ",":
            self.take(",")
            while self.peek() in ("initial", "final"):
                status.append(self.take())
        self.take(">")
        return (tuple(active), tuple(valuation), tuple(buffers), tuple(status))

    def step(self) -> StepTerm:
        self.take("<")
        source = self.configuration()
        self.take(",")
        label = None
        tok = self.peek()
        if tok is not None and tok.startswith('"'):
            label = re.sub(r"\\(.)", r"\1", self.take()[1:-1])
            self.take(",")
        target = self.configuration()
        self.take(">")
        return (source, label, target)

    def term(self):
        # a step opens with three '<' (step -> configuration -> active state)
        if self.peek() == "<" and self.peek(1) == "<" and self.peek(2) == "<":
            return self.step()
        return self.configuration()


def parse_cs(text: str) -> tuple[list[ConfigTerm], list[StepTerm]]:
    """Parse a sequence of configuration and step terms."""
    p = _CsParser(text)
    configs: list[ConfigTerm] = []
    steps: list[StepTerm] = []
    while p.peek() is not None:
        t = p.term()
        if len(t) == 3:  # a step; configuration terms have four components
            steps.append(t)  # type: ignore[arg-type]
        else:
            configs.append(t)  # type: ignore[arg-type]
    return configs, steps


def parse_cs_configuration(text: str) -> ConfigTerm:
    p = _CsParser(text)
    term = p.configuration()
    if p.peek() is not None:
        raise CsParseError(f"trailing input {p.peek()!r}")
    return term


def parse_cs_step(text: str) -> StepTerm:
    p = _CsParser(text)
    term = p.step()
    if p.peek() is not None:
        raise CsParseError(f"trailing input {p.peek()!r}")
    return term
