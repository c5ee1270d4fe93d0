"""Labeled transition systems and their text format.

The text format lists states (with optional ``initial`` / ``final`` flags)
and transitions (``SRC "label" DST`` or ``SRC DST``):

    states
      initial 0
      final 1
      2
      final 3
    transitions
      0 1
      0 "a" 2
      2 3

Unlabeled transitions are internal actions.  Labels are quoted; ``"`` and
``\\`` are escaped with a backslash.  A state may be both initial and final
(printed ``initial final N``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import Diagnostic, Loc
from .semantics import CsGraph


class LtsError(ValueError):
    pass


@dataclass(frozen=True)
class Lts:
    num_states: int
    initial_states: frozenset[int]
    final_states: frozenset[int]
    transitions: tuple[tuple[int, str | None, int], ...]

    def __post_init__(self):
        for group in (self.initial_states, self.final_states):
            for s in group:
                if not (0 <= s < self.num_states):
                    raise LtsError(f"state index {s} out of range")
        for src, _, dst in self.transitions:
            if not (0 <= src < self.num_states and 0 <= dst < self.num_states):
                raise LtsError(f"transition ({src}, {dst}) out of range")

    def single_initial(self) -> int:
        if len(self.initial_states) != 1:
            raise LtsError(f"expected exactly one initial state, found {len(self.initial_states)}")
        return next(iter(self.initial_states))


def cs_to_lts(graph: CsGraph) -> Lts:
    """State i is the i-th discovered configuration; statuses become flags and
    steps become transitions, labels preserved verbatim."""
    initial = frozenset(i for i, c in enumerate(graph.configurations) if "initial" in c.status)
    final = frozenset(i for i, c in enumerate(graph.configurations) if "final" in c.status)
    return Lts(
        num_states=len(graph.configurations),
        initial_states=initial,
        final_states=final,
        transitions=tuple(graph.step_indices()),
    )


def escape_label(label: str) -> str:
    return label.replace("\\", "\\\\").replace('"', '\\"')


def _unescape_label(raw: str) -> str:
    return re.sub(r"\\(.)", r"\1", raw)


def emit_lts_text(l: Lts) -> str:
    lines = ["states"]
    for i in range(l.num_states):
        flags = ""
        if i in l.initial_states:
            flags += "initial "
        if i in l.final_states:
            flags += "final "
        lines.append(f"  {flags}{i}")
    lines.append("transitions")
    for src, label, dst in l.transitions:
        if label is None:
            lines.append(f"  {src} {dst}")
        else:
            lines.append(f'  {src} "{escape_label(label)}" {dst}')
    return "\n".join(lines) + "\n"


_STATE_LINE_RE = re.compile(r"(?:(initial)\s+)?(?:(final)\s+)?(\d+)")
_TRANS_LINE_RE = re.compile(r'(\d+)(?:\s+"((?:[^"\\]|\\.)*)")?\s+(\d+)')


def parse_lts_text(text: str) -> Lts | list[Diagnostic]:
    """Parse the LTS text format; returns diagnostics on malformed input."""
    diags: list[Diagnostic] = []
    lines = text.splitlines()
    section = None
    seen: dict[int, Loc] = {}
    initial: set[int] = set()
    final: set[int] = set()
    transitions: list[tuple[int, str | None, int]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        loc = Loc(lineno, 1)
        if line == "states":
            if section is not None:
                diags.append(Diagnostic("error", loc, "duplicate 'states' section"))
            section = "states"
            continue
        if line == "transitions":
            if section != "states":
                diags.append(Diagnostic("error", loc, "'transitions' section before 'states'"))
            section = "transitions"
            continue
        if section == "states":
            m = _STATE_LINE_RE.fullmatch(line)
            if m is None:
                diags.append(Diagnostic("error", loc, f"malformed state line: {line!r}"))
                continue
            idx = int(m.group(3))
            if idx in seen:
                diags.append(Diagnostic("error", loc, f"state {idx} declared twice"))
                continue
            seen[idx] = loc
            if m.group(1):
                initial.add(idx)
            if m.group(2):
                final.add(idx)
        elif section == "transitions":
            m = _TRANS_LINE_RE.fullmatch(line)
            if m is None:
                diags.append(Diagnostic("error", loc, f"malformed transition line: {line!r}"))
                continue
            label = _unescape_label(m.group(2)) if m.group(2) is not None else None
            transitions.append((int(m.group(1)), label, int(m.group(3))))
        else:
            diags.append(Diagnostic("error", loc, f"unexpected line before 'states': {line!r}"))
    if section is None:
        diags.append(Diagnostic("error", Loc(max(1, len(lines)), 1), "missing 'states' section"))
    num_states = len(seen)
    for idx, loc in seen.items():
        if idx >= num_states:
            diags.append(Diagnostic("error", loc, f"state indices are not contiguous from 0 (found {idx})"))
    for src, _, dst in transitions:
        if src >= num_states or dst >= num_states:
            diags.append(Diagnostic("error", Loc(1, 1), f"transition ({src}, {dst}) references an undeclared state"))
    if len(initial) > 1:
        diags.append(Diagnostic("error", Loc(1, 1), f"more than one initial state declared ({len(initial)})"))
    if diags:
        return diags
    return Lts(num_states, frozenset(initial), frozenset(final), tuple(transitions))
