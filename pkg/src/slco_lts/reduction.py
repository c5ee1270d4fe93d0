"""Label hiding, bisimulation reduction, and LTS equivalence checking.

Internal actions are unlabeled transitions.  Both strong and branching
bisimilarity treat the final-state flag as an observation: a final state is
never merged with, or equivalent to, a non-final state.  The initial flag is
a designation, not behavior, and is ignored by the equivalences.

The minimization is iterated signature-based partition refinement from the
coarsest final-respecting partition; quadratic-ish, which is fine at the
scale this library targets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .lts import Lts

Relation = Literal["strong", "branching"]


@dataclass(frozen=True)
class HideSpec:
    """keep-mode hides every label not listed; hide-mode hides the listed."""

    mode: Literal["keep", "hide"]
    labels: frozenset[str]


def hide_labels(l: Lts, spec: HideSpec) -> Lts:
    """Turn hidden labels into internal (unlabeled) transitions."""
    if spec.mode == "keep":
        def hidden(label: str) -> bool:
            return label not in spec.labels
    else:
        def hidden(label: str) -> bool:
            return label in spec.labels
    transitions = tuple(
        (src, None if label is not None and hidden(label) else label, dst)
        for src, label, dst in l.transitions
    )
    return Lts(l.num_states, l.initial_states, l.final_states, transitions)


# ---------------------------------------------------------------------------
# Partition refinement


def _initial_partition(num_states: int, finals: frozenset[int]) -> list[int]:
    block = [1 if s in finals else 0 for s in range(num_states)]
    return _renumber(block)


def _renumber(block: list[int]) -> list[int]:
    """Renumber block ids by least member state."""
    mapping: dict[int, int] = {}
    out = []
    for b in block:
        if b not in mapping:
            mapping[b] = len(mapping)
        out.append(mapping[b])
    return out


def _split(block: list[int], signatures: list) -> list[int]:
    mapping: dict[tuple, int] = {}
    out = []
    for s, sig in enumerate(signatures):
        key = (block[s], sig)
        if key not in mapping:
            mapping[key] = len(mapping)
        out.append(mapping[key])
    return out


def _strong_partition(num_states, transitions, finals) -> list[int]:
    succ: list[list[tuple[str | None, int]]] = [[] for _ in range(num_states)]
    for src, label, dst in transitions:
        succ[src].append((label, dst))
    block = _initial_partition(num_states, finals)
    while True:
        sigs = [frozenset((label, block[dst]) for label, dst in succ[s]) for s in range(num_states)]
        new_block = _split(block, sigs)
        if max(new_block, default=-1) == max(block, default=-1):
            return new_block
        block = new_block


def _branching_partition(num_states, transitions, finals) -> list[int]:
    succ: list[list[tuple[str | None, int]]] = [[] for _ in range(num_states)]
    tau_succ: list[list[int]] = [[] for _ in range(num_states)]
    for src, label, dst in transitions:
        succ[src].append((label, dst))
        if label is None:
            tau_succ[src].append(dst)
    block = _initial_partition(num_states, finals)
    while True:
        sigs = []
        for s in range(num_states):
            # inert closure: states reachable from s by internal moves that
            # stay inside s's current block
            closure = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for v in tau_succ[u]:
                    if block[v] == block[s] and v not in closure:
                        closure.add(v)
                        stack.append(v)
            sig = set()
            for u in closure:
                for label, dst in succ[u]:
                    if label is None and block[dst] == block[s]:
                        continue  # inert internal move
                    sig.add((label, block[dst]))
            sigs.append(frozenset(sig))
        new_block = _split(block, sigs)
        if max(new_block, default=-1) == max(block, default=-1):
            return new_block
        block = new_block


def _partition(num_states, transitions, finals, relation: Relation) -> list[int]:
    if relation == "strong":
        return _strong_partition(num_states, transitions, finals)
    if relation == "branching":
        return _branching_partition(num_states, transitions, finals)
    raise ValueError(f"unknown relation {relation!r}")


def reduce_lts(l: Lts, relation: Relation) -> Lts:
    """Quotient of l under the chosen bisimilarity: one state per equivalence
    class (numbered by least member), inert internal transitions removed for
    branching, duplicate transitions merged."""
    l.single_initial()
    block = _partition(l.num_states, l.transitions, l.final_states, relation)
    num_blocks = max(block, default=-1) + 1
    initial = frozenset(block[s] for s in l.initial_states)
    final = frozenset(block[s] for s in l.final_states)
    seen = set()
    out: list[tuple[int, str | None, int]] = []
    for src, label, dst in l.transitions:
        edge = (block[src], label, block[dst])
        if relation == "branching" and label is None and edge[0] == edge[2]:
            continue
        if edge not in seen:
            seen.add(edge)
            out.append(edge)
    return Lts(num_blocks, initial, final, tuple(out))


def equivalent(l1: Lts, l2: Lts, relation: Relation) -> bool:
    """True iff the initial states are bisimilar (final-respecting) in the
    disjoint union of the two systems."""
    i1 = l1.single_initial()
    i2 = l2.single_initial()
    offset = l1.num_states
    num_states = l1.num_states + l2.num_states
    transitions = list(l1.transitions) + [
        (src + offset, label, dst + offset) for src, label, dst in l2.transitions
    ]
    finals = frozenset(l1.final_states) | frozenset(s + offset for s in l2.final_states)
    block = _partition(num_states, transitions, finals, relation)
    return block[i1] == block[i2 + offset]
