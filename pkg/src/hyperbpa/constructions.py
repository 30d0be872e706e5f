"""Tightening, permutation-completion and permuted projections of bad-prefix automata."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .automata import Dfa, absorb_accepting, explore, language_subset, live_states, minimize
from .errors import BadArity
from .representation import letter_projection, maps, permuted_copy


def tighten(a: Dfa) -> Dfa:
    """Accept in every state from which all infinite paths visit an accepting state."""
    avoiding = live_states(a, set(range(a.num_states)) - a.accepting)
    return Dfa(a.alphabet, a.delta, a.initial, frozenset(range(a.num_states)) - avoiding, a.labels)


def _copies_product(a: Dfa, source_alphabet, family) -> Dfa:
    """Reachable product of copies of ``a``; copy ``i`` reads letters projected through ``family[i]``."""
    moves = [letter_projection(source_alphabet, p) for p in family]
    delta = a.delta
    accepting = a.accepting
    n = len(family)

    def step(state, c):
        return tuple(delta[state[i]][moves[i][c]] for i in range(n))

    return explore(
        source_alphabet,
        (a.initial,) * n,
        step,
        lambda state: any(q in accepting for q in state),
    )


def permutation_complete(a: Dfa) -> Dfa:
    """Accept w iff some component map of w (repetition allowed) is accepted by ``tighten(a)``.

    Built as the reachable product of k^k copies of the tightened input, one
    per map, accepting when any copy accepts.  The result is closed under all
    maps but is not tightened again: see ``tighten`` for that.
    """
    k = a.arity
    return _copies_product(tighten(a), a.alphabet, maps(k, k))


def permuted_projection(a: Dfa, arity: int) -> Dfa:
    """DFA over the ``arity``-ary alphabet accepting w iff some k-projection of w is accepted by ``a``."""
    k = a.arity
    if arity < k:
        raise BadArity(f"projection arity {arity} is below automaton arity {k}")
    return _copies_product(a, a.alphabet.with_arity(arity), maps(k, arity))


def prefix_projection(a: Dfa, arity: int) -> Dfa:
    """DFA over the ``arity``-ary alphabet accepting w iff some prefix of w has a k-projection ``a`` accepts.

    Accepts the same infinite-word prefixes as ``permuted_projection`` but is
    much smaller: copies are minimized first, and every product state in which
    some copy accepts collapses into one absorbing accepting state.
    """
    k = a.arity
    if arity < k:
        raise BadArity(f"projection arity {arity} is below automaton arity {k}")
    base = minimize(absorb_accepting(a))
    moves = [letter_projection(base.alphabet.with_arity(arity), p) for p in maps(k, arity)]
    delta = base.delta
    accepting = base.accepting
    done = "accept"

    def settle(state):
        return done if any(q in accepting for q in state) else state

    def step(state, c):
        if state == done:
            return done
        return settle(tuple(delta[q][move[c]] for q, move in zip(state, moves)))

    return explore(base.alphabet.with_arity(arity), settle((base.initial,) * len(moves)), step, lambda s: s == done)


def is_permutation_complete(a: Dfa):
    """``None`` if every permuted copy's language is included in ``a``'s, else a shortest witness.

    The witness is accepted by the first failing permuted copy (maps in
    canonical order) and rejected by ``a``.
    """
    k = a.arity
    for p in maps(k, k):
        witness = language_subset(permuted_copy(a, p), a)
        if witness is not None:
            return witness
    return None


@dataclass(frozen=True)
class ConstructionReport:
    input_states: int
    output_states: int
    copies: int
    seconds: float


def run_construction(name: str, a: Dfa, arity: int | None = None) -> tuple[Dfa, ConstructionReport]:
    """Apply a named construction and report its size and timing."""
    builders: dict[str, tuple[Callable[[], Dfa], int]] = {
        "tighten": (lambda: tighten(a), 1),
        "permclose": (lambda: permutation_complete(a), a.arity ** a.arity),
    }
    if arity is not None:
        builders["project"] = (lambda: permuted_projection(a, arity), arity ** a.arity)
    build, copies = builders[name]
    start = time.perf_counter()
    out = build()
    return out, ConstructionReport(a.num_states, out.num_states, copies, time.perf_counter() - start)
