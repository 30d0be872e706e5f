"""Finite automata over explicit product alphabets.

Letters of an arity-``k`` alphabet over atomic propositions ``aps`` are
``k``-tuples of AP subsets.  Internally every letter has a dense integer code:
a subset is a bitmask (bit ``j`` is ``aps[j]``) and a tuple is read as a
base-``2**len(aps)`` numeral with position 0 most significant.  Ascending codes
are the canonical letter order used for every tie-break in the package.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

from .errors import AlphabetMismatch

AP_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

ProductLetter = tuple  # tuple[frozenset[str], ...]
TupleWord = tuple  # tuple[ProductLetter, ...]


@dataclass(frozen=True)
class Alphabet:
    aps: tuple[str, ...]
    arity: int

    def __post_init__(self):
        object.__setattr__(self, "aps", tuple(self.aps))
        if self.arity < 1:
            raise AlphabetMismatch(f"arity must be positive, got {self.arity}")
        if len(set(self.aps)) != len(self.aps):
            raise AlphabetMismatch(f"duplicate atomic propositions in {self.aps}")
        for name in self.aps:
            if not AP_NAME.match(name):
                raise AlphabetMismatch(f"invalid atomic proposition name {name!r}")

    @property
    def base(self) -> int:
        return 1 << len(self.aps)

    @cached_property
    def size(self) -> int:
        return self.base ** self.arity

    def with_arity(self, arity: int) -> "Alphabet":
        return Alphabet(self.aps, arity)

    @cached_property
    def masks(self) -> tuple[tuple[int, ...], ...]:
        """Component bitmasks of every letter code, in code order."""
        out = []
        base = self.base
        for code in range(self.size):
            comps = []
            for _ in range(self.arity):
                code, m = divmod(code, base)
                comps.append(m)
            out.append(tuple(reversed(comps)))
        return tuple(out)

    @cached_property
    def letters(self) -> tuple[ProductLetter, ...]:
        return tuple(tuple(self.subset(m) for m in ms) for ms in self.masks)

    @cached_property
    def _codes(self) -> dict:
        return {letter: code for code, letter in enumerate(self.letters)}

    def subset(self, mask: int) -> frozenset:
        return frozenset(a for j, a in enumerate(self.aps) if mask >> j & 1)

    def mask(self, subset: Iterable[str]) -> int:
        m = 0
        for name in subset:
            try:
                m |= 1 << self.aps.index(name)
            except ValueError:
                raise AlphabetMismatch(f"unknown atomic proposition {name!r}; alphabet has {list(self.aps)}") from None
        return m

    def code_of_masks(self, masks: Sequence[int]) -> int:
        code = 0
        for m in masks:
            code = code * self.base + m
        return code

    def code(self, letter) -> int:
        """Integer code of a product letter given as a sequence of AP collections."""
        try:
            return self._codes[letter]
        except (KeyError, TypeError):
            pass
        letter = tuple(letter)
        if len(letter) != self.arity:
            raise AlphabetMismatch(f"letter {letter!r} has arity {len(letter)}, expected {self.arity}")
        return self.code_of_masks([self.mask(c) for c in letter])

    def encode(self, word) -> tuple[int, ...]:
        return tuple(self.code(letter) for letter in word)

    def decode(self, codes: Iterable[int]) -> TupleWord:
        letters = self.letters
        return tuple(letters[c] for c in codes)

    def format_letter(self, code: int) -> str:
        return "(" + ",".join(self.format_subset(m) for m in self.masks[code]) + ")"

    def format_subset(self, mask: int) -> str:
        return "{" + ",".join(a for j, a in enumerate(self.aps) if mask >> j & 1) + "}"


def _check_same_alphabet(a, b):
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"alphabets differ: {a.alphabet} vs {b.alphabet}")


@dataclass(frozen=True)
class Dfa:
    """A total DFA; ``delta[q][code]`` is the successor of ``q`` on letter ``code``."""

    alphabet: Alphabet
    delta: tuple[tuple[int, ...], ...]
    initial: int = 0
    accepting: frozenset = frozenset()
    labels: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        n = len(self.delta)
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range for {n} states")
        size = self.alphabet.size
        for q, row in enumerate(self.delta):
            if len(row) != size:
                raise ValueError(f"state {q} has {len(row)} transitions, expected {size}")
            for t in row:
                if not 0 <= t < n:
                    raise ValueError(f"transition target {t} out of range")
        if not self.accepting <= set(range(n)):
            raise ValueError("accepting states out of range")

    @property
    def num_states(self) -> int:
        return len(self.delta)

    @property
    def arity(self) -> int:
        return self.alphabet.arity

    def run_codes(self, codes: Iterable[int], start: int | None = None) -> int:
        q = self.initial if start is None else start
        delta = self.delta
        for c in codes:
            q = delta[q][c]
        return q

    def run(self, word) -> int:
        return self.run_codes(self.alphabet.encode(word))

    def accepts(self, word) -> bool:
        return self.run(word) in self.accepting

    def accepts_codes(self, codes: Iterable[int]) -> bool:
        return self.run_codes(codes) in self.accepting

    def to_nfa(self) -> "Nfa":
        return Nfa(
            self.alphabet,
            tuple(tuple(frozenset((t,)) for t in row) for row in self.delta),
            self.initial,
            self.accepting,
        )


@dataclass(frozen=True)
class Nfa:
    alphabet: Alphabet
    delta: tuple[tuple[frozenset, ...], ...]
    initial: int = 0
    accepting: frozenset = frozenset()
    all_accepting: bool = False
    labels: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        n = len(self.delta)
        if self.all_accepting and self.accepting != frozenset(range(n)):
            raise ValueError("a safety automaton must accept in every state")
        for row in self.delta:
            if len(row) != self.alphabet.size:
                raise ValueError("transition row does not cover the letter universe")

    @property
    def num_states(self) -> int:
        return len(self.delta)

    def accepts(self, word) -> bool:
        current = {self.initial}
        for c in self.alphabet.encode(word):
            current = set().union(*(self.delta[q][c] for q in current))
        return bool(current & self.accepting)


def explore(alphabet: Alphabet, start: Hashable, step: Callable, accept: Callable) -> Dfa:
    """Build the reachable DFA of an implicit deterministic transition system.

    States are numbered in BFS discovery order over ascending letter codes, and
    the discovered state objects are kept as labels.
    """
    index = {start: 0}
    order = [start]
    delta = []
    size = alphabet.size
    i = 0
    while i < len(order):
        state = order[i]
        row = []
        for c in range(size):
            t = step(state, c)
            j = index.get(t)
            if j is None:
                j = index[t] = len(order)
                order.append(t)
            row.append(j)
        delta.append(row)
        i += 1
    accepting = [q for q, s in enumerate(order) if accept(s)]
    return Dfa(alphabet, delta, 0, accepting, labels=tuple(order))


def determinize(nfa: Nfa) -> Dfa:
    """Subset construction; the empty subset, when reachable, is the dead state."""
    delta = nfa.delta
    cache = {}

    def step(subset, c):
        key = (subset, c)
        out = cache.get(key)
        if out is None:
            out = cache[key] = frozenset().union(*(delta[q][c] for q in subset))
        return out

    return explore(nfa.alphabet, frozenset((nfa.initial,)), step, lambda s: bool(s & nfa.accepting))


def conjunction(x: bool, y: bool) -> bool:
    return x and y


def disjunction(x: bool, y: bool) -> bool:
    return x or y


def difference(x: bool, y: bool) -> bool:
    return x and not y


def product(a: Dfa, b: Dfa, combine: Callable[[bool, bool], bool] = conjunction) -> Dfa:
    """Reachable synchronous product, labelled with the originating state pairs."""
    _check_same_alphabet(a, b)
    da, db = a.delta, b.delta
    fa, fb = a.accepting, b.accepting
    return explore(
        a.alphabet,
        (a.initial, b.initial),
        lambda s, c: (da[s[0]][c], db[s[1]][c]),
        lambda s: combine(s[0] in fa, s[1] in fb),
    )


def complement(dfa: Dfa) -> Dfa:
    return Dfa(dfa.alphabet, dfa.delta, dfa.initial, frozenset(range(dfa.num_states)) - dfa.accepting, dfa.labels)


def absorb_accepting(dfa: Dfa) -> Dfa:
    """Make accepting states absorbing, so a word is accepted iff some prefix of it was."""
    delta = [[q] * dfa.alphabet.size if q in dfa.accepting else row for q, row in enumerate(dfa.delta)]
    return Dfa(dfa.alphabet, delta, dfa.initial, dfa.accepting, dfa.labels)


def reachable(dfa: Dfa) -> list[int]:
    """States reachable from the initial state, in canonical BFS order."""
    seen = {dfa.initial}
    order = [dfa.initial]
    for q in order:
        for t in dfa.delta[q]:
            if t not in seen:
                seen.add(t)
                order.append(t)
    return order


def canonical(dfa: Dfa) -> Dfa:
    """Restrict to reachable states and renumber them in BFS order from the initial state."""
    order = reachable(dfa)
    new = {q: i for i, q in enumerate(order)}
    labels = tuple(dfa.labels[q] for q in order) if dfa.labels is not None else None
    return Dfa(
        dfa.alphabet,
        [[new[t] for t in dfa.delta[q]] for q in order],
        0,
        [new[q] for q in order if q in dfa.accepting],
        labels,
    )


def minimize(dfa: Dfa) -> Dfa:
    """Minimal DFA by Moore partition refinement, canonically numbered."""
    dfa = canonical(dfa)
    n = dfa.num_states
    delta = dfa.delta
    block = [1 if q in dfa.accepting else 0 for q in range(n)]
    count = len(set(block))
    while True:
        signatures = {}
        new_block = []
        for q in range(n):
            sig = (block[q], tuple(block[t] for t in delta[q]))
            new_block.append(signatures.setdefault(sig, len(signatures)))
        block = new_block
        if len(signatures) == count:
            break
        count = len(signatures)
    representative = {}
    for q in range(n):
        representative.setdefault(block[q], q)
    quotient = Dfa(
        dfa.alphabet,
        [[block[t] for t in delta[representative[b]]] for b in range(count)],
        block[dfa.initial],
        {block[q] for q in dfa.accepting},
    )
    return canonical(quotient)


def isomorphic(a: Dfa, b: Dfa) -> bool:
    """Structural isomorphism of the reachable parts (language equality when both are minimal)."""
    return canonical(a) == canonical(b)


def shortest_path_codes(dfa: Dfa, targets: Callable[[int], bool], allowed: Callable[[int], bool] | None = None):
    """Shortest code word from the initial state to a target state.

    BFS over ascending letter codes, so among shortest words the result is the
    lexicographically least.  When ``allowed`` is given, only states satisfying
    it are entered (the initial state included).  Returns ``None`` if no target
    is reachable.
    """
    start = dfa.initial
    if allowed is not None and not allowed(start):
        return None
    if targets(start):
        return ()
    parent = {start: None}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for c, t in enumerate(dfa.delta[q]):
            if t in parent or (allowed is not None and not allowed(t)):
                continue
            parent[t] = (q, c)
            if targets(t):
                path = []
                while parent[t] is not None:
                    t, c = parent[t]
                    path.append(c)
                return tuple(reversed(path))
            queue.append(t)
    return None


def shortest_accepted(dfa: Dfa):
    """A shortest accepted word (canonical tie-break), or ``None`` if the language is empty."""
    codes = shortest_path_codes(dfa, dfa.accepting.__contains__)
    return None if codes is None else dfa.alphabet.decode(codes)


def is_empty(dfa: Dfa) -> bool:
    return shortest_path_codes(dfa, dfa.accepting.__contains__) is None


def language_subset(a: Dfa, b: Dfa):
    """``None`` when L(a) is a subset of L(b), otherwise a shortest word of L(a) minus L(b)."""
    return shortest_accepted(product(a, b, difference))


def language_equal(a: Dfa, b: Dfa) -> bool:
    return is_empty(product(a, b, lambda x, y: x != y))


def live_states(dfa: Dfa, allowed: Iterable[int]) -> frozenset:
    """States of ``allowed`` from which some infinite path stays inside ``allowed``.

    Greatest fixpoint: repeatedly drop members without a successor left in the
    set.
    """
    alive = set(allowed)
    preds = {q: [] for q in alive}
    out_degree = {}
    for q in alive:
        d = 0
        for t in dfa.delta[q]:
            if t in alive:
                d += 1
                preds[t].append(q)
        out_degree[q] = d
    queue = deque(q for q in alive if out_degree[q] == 0)
    while queue:
        q = queue.popleft()
        alive.discard(q)
        for p in preds[q]:
            if p in alive:
                out_degree[p] -= 1
                if out_degree[p] == 0:
                    queue.append(p)
    return frozenset(alive)
