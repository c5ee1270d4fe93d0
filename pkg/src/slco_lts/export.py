"""DOT and AUT emitters for labeled transition systems.

Both emitters are byte-deterministic: states ascending, transitions in list
order, fixed default styling.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Diagnostic, Loc
from .lts import Lts, LtsError, escape_label


@dataclass(frozen=True)
class DotOptions:
    graph_name: str = "lts"
    state_shape: str = "circle"
    entry_shape: str = "point"
    final_peripheries: int = 2
    rankdir: str | None = None


def emit_dot(l: Lts, opts: DotOptions = DotOptions()) -> str:
    """One node ``sN`` per state, plus an entry point node with an edge into
    each initial state; final states get a double periphery."""
    lines = [f"digraph {opts.graph_name} {{"]
    if opts.rankdir is not None:
        lines.append(f"  rankdir={opts.rankdir};")
    lines.append(f"  entry [shape={opts.entry_shape}];")
    for i in range(l.num_states):
        attrs = [f'label="{i}"', f"shape={opts.state_shape}"]
        if i in l.final_states:
            attrs.append(f"peripheries={opts.final_peripheries}")
        lines.append(f"  s{i} [{', '.join(attrs)}];")
    for i in sorted(l.initial_states):
        lines.append(f"  entry -> s{i};")
    for src, label, dst in l.transitions:
        if label is None:
            lines.append(f"  s{src} -> s{dst};")
        else:
            lines.append(f'  s{src} -> s{dst} [label="{escape_label(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_aut(l: Lts) -> tuple[str, list[Diagnostic]]:
    """Aldebaran format: ``des (INIT, NTRANS, NSTATES)`` then one transition
    per line.  Unlabeled transitions become ``tau``.  Final-state flags do not
    exist in AUT and are dropped with a warning."""
    init = l.single_initial()
    diags: list[Diagnostic] = []
    if l.final_states:
        diags.append(
            Diagnostic(
                "warning",
                Loc(0, 0),
                f"AUT has no notion of final states; {len(l.final_states)} flag(s) dropped",
            )
        )
    lines = [f"des ({init}, {len(l.transitions)}, {l.num_states})"]
    for src, label, dst in l.transitions:
        text = "tau" if label is None else f'"{escape_label(label)}"'
        lines.append(f"({src}, {text}, {dst})")
    return "\n".join(lines) + "\n", diags
