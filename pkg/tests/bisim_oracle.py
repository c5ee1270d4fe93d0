"""Maximal-bisimulation oracle.

Computes strong and branching bisimilarity by greatest-fixpoint refinement
of an explicit state-pair relation, independently of the partition
refinement in slco_lts.reduction.  Quadratic in states, cubic-ish overall;
only meant for small test inputs.
"""

from __future__ import annotations

import random

from slco_lts.lts import Lts

_INTERNAL = None


def _edges_from(l, s):
    return [(lab, d) for (src, lab, d) in l.transitions if src == s]


def maximal_strong_bisimulation(l: Lts):
    """Set of state pairs (s, t) of l that are strongly bisimilar."""
    n = l.num_states
    rel = {
        (s, t)
        for s in range(n)
        for t in range(n)
        if (s in l.final_states) == (t in l.final_states)
    }
    changed = True
    while changed:
        changed = False
        for s, t in sorted(rel):
            ok = all(
                any(lab2 == lab and (d, d2) in rel for lab2, d2 in _edges_from(l, t))
                for lab, d in _edges_from(l, s)
            ) and all(
                any(lab2 == lab and (d, d2) in rel for lab2, d2 in _edges_from(l, s))
                for lab, d in _edges_from(l, t)
            )
            if not ok:
                rel.discard((s, t))
                changed = True
    return rel


def maximal_branching_bisimulation(l: Lts):
    """Set of state pairs (s, t) of l that are branching bisimilar.

    A move s -a-> s' must be mimicked by t ==tau==> t_hat -a-> t' with
    (s', t') related, or, when a is internal, absorbed with (s', t_hat)
    related.  Finality is an observation: related states agree on it, and
    every state on the inert path from t to t_hat must itself be related
    to s (so a silent path cannot slip through an observably different,
    e.g. final, state).
    """
    n = l.num_states
    rel = {
        (s, t)
        for s in range(n)
        for t in range(n)
        if (s in l.final_states) == (t in l.final_states)
    }

    def _inert_closure(s, t, current):
        # tau-reachable from t while staying related to s at every state
        if (s, t) not in current:
            return []
        out = {t}
        frontier = [t]
        while frontier:
            cur = frontier.pop()
            for lab, d in _edges_from(l, cur):
                if lab is _INTERNAL and d not in out and (s, d) in current:
                    out.add(d)
                    frontier.append(d)
        return sorted(out)

    def simulates(s, t, current):
        for lab, d in _edges_from(l, s):
            matched = False
            for t_hat in _inert_closure(s, t, current):
                if lab is _INTERNAL and (d, t_hat) in current:
                    matched = True
                    break
                for lab2, t2 in _edges_from(l, t_hat):
                    if lab2 == lab and (d, t2) in current:
                        matched = True
                        break
                if matched:
                    break
            if not matched:
                return False
        return True

    changed = True
    while changed:
        changed = False
        for s, t in sorted(rel):
            if not (simulates(s, t, rel) and simulates(t, s, rel)):
                rel.discard((s, t))
                changed = True
    return rel


def random_lts(rng: random.Random, max_states=8, max_labels=3, tau_bias=0.35):
    """A small random LTS with exactly one initial state."""
    n = rng.randint(1, max_states)
    labels = [f"l{i}" for i in range(rng.randint(1, max_labels))]
    transitions = []
    for _ in range(rng.randint(0, 2 * n)):
        src = rng.randrange(n)
        dst = rng.randrange(n)
        lab = _INTERNAL if rng.random() < tau_bias else rng.choice(labels)
        transitions.append((src, lab, dst))
    finals = frozenset(s for s in range(n) if rng.random() < 0.3)
    return Lts(
        num_states=n,
        initial_states=frozenset({rng.randrange(n)}),
        final_states=finals,
        transitions=tuple(sorted(set(transitions), key=lambda t: (t[0], t[1] or "", t[2]))),
    )


def disjoint_union(l1: Lts, l2: Lts):
    """(combined LTS, offset of l2's states)."""
    off = l1.num_states
    return (
        Lts(
            num_states=l1.num_states + l2.num_states,
            initial_states=frozenset(),
            final_states=l1.final_states | frozenset(s + off for s in l2.final_states),
            transitions=l1.transitions
            + tuple((s + off, lab, d + off) for (s, lab, d) in l2.transitions),
        ),
        off,
    )
