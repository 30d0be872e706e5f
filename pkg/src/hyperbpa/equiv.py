"""Covering checks over infinite extensions and cross-arity representation-equivalence."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automata import Dfa, live_states, product, shortest_path_codes
from .constructions import prefix_projection, tighten
from .errors import AlphabetMismatch
from .representation import TraceSet, lift_automaton, unzip


@dataclass(frozen=True)
class CoveringVerdict:
    """Outcome of a covering check; a failure carries the lasso ``prefix · cycle^ω``.

    The first ``accepted_length`` letters of ``prefix`` form a word accepted by
    the producer, and no prefix of the infinite word is accepted by the coverer.
    """

    ok: bool
    prefix: tuple = ()
    cycle: tuple = ()
    accepted_length: int = 0

    @property
    def accepted_prefix(self) -> tuple:
        return self.prefix[: self.accepted_length]


def _shortest_cycle(dfa: Dfa, start: int, allowed: frozenset):
    """Shortest nonempty code path from ``start`` back to itself inside ``allowed``."""
    parent = {}
    queue = deque([start])
    seen = {start}
    while queue:
        q = queue.popleft()
        for c, t in enumerate(dfa.delta[q]):
            if t not in allowed:
                continue
            if t == start:
                path = [c]
                while q != start:
                    q, c = parent[q]
                    path.append(c)
                return tuple(reversed(path))
            if t not in seen:
                seen.add(t)
                parent[t] = (q, c)
                queue.append(t)
    return None


def _path_to_cycle(dfa: Dfa, start: int, allowed: frozenset):
    """Shortest path from ``start`` inside ``allowed`` to a state lying on a cycle, plus that cycle."""
    parent = {start: None}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        cycle = _shortest_cycle(dfa, q, allowed)
        if cycle is not None:
            path = []
            while parent[q] is not None:
                q, c = parent[q]
                path.append(c)
            return tuple(reversed(path)), cycle
        for c, t in enumerate(dfa.delta[q]):
            if t in allowed and t not in parent:
                parent[t] = (q, c)
                queue.append(t)
    raise AssertionError("a live state always reaches a cycle")


def covering_check(producer: Dfa, coverer: Dfa) -> CoveringVerdict:
    """Is every infinite word with a producer-accepted prefix also given a coverer-accepted prefix?"""
    if producer.alphabet != coverer.alphabet:
        raise AlphabetMismatch(f"alphabets differ: {producer.alphabet} vs {coverer.alphabet}")
    prod = product(producer, coverer, lambda p, c: p)
    labels = prod.labels
    uncovered = {q for q in range(prod.num_states) if labels[q][1] not in coverer.accepting}
    live = live_states(prod, uncovered)
    stem = shortest_path_codes(
        prod,
        lambda q: q in live and labels[q][0] in producer.accepting,
        allowed=uncovered.__contains__,
    )
    if stem is None:
        return CoveringVerdict(True)
    end = prod.run_codes(stem)
    lead, cycle = _path_to_cycle(prod, end, live)
    decode = producer.alphabet.decode
    return CoveringVerdict(False, decode(stem + lead), decode(cycle), len(stem))


@dataclass(frozen=True)
class Violation:
    """A trace set represented as a bad prefix by exactly one of two automata.

    ``direction`` 1 means the lower-arity automaton represents it, 2 means the
    higher-arity one does; ``side`` is the argument position (0 or 1) of the
    representing automaton.  ``word`` is the accepted representation over the
    higher arity and ``lasso`` the uncovered infinite extension.
    """

    direction: int
    side: int
    traces: TraceSet
    word: tuple
    lasso: CoveringVerdict


def representation_equivalent(a: Dfa, b: Dfa) -> Violation | None:
    """``None`` when both automata represent the same bad prefixes, else a ``Violation``.

    Arguments may come in either arity order; the lower-arity one is lifted.
    """
    if a.alphabet.aps != b.alphabet.aps:
        raise AlphabetMismatch(f"atomic propositions differ: {a.alphabet.aps} vs {b.alphabet.aps}")
    swapped = a.arity > b.arity
    small, large = (b, a) if swapped else (a, b)
    k = large.arity
    lifted = small if small.arity == k else lift_automaton(small, k)
    # Covering only looks at whether some prefix is accepted, so the compact
    # prefix projection stands in for the permutation completion.
    checks = (
        (1, lambda: lifted, lambda: tighten(prefix_projection(tighten(large), k))),
        (2, lambda: tighten(large), lambda: tighten(prefix_projection(small, k))),
    )
    for direction, producer, coverer in checks:
        verdict = covering_check(producer(), coverer())
        if not verdict.ok:
            word = verdict.accepted_prefix
            side = (0 if direction == 1 else 1) ^ swapped
            return Violation(direction, side, unzip(word), word, verdict)
    return None
