"""Trace sets, their tuple-word representations, and letterwise maps between arities."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Iterable, Sequence

from .automata import Alphabet, Dfa
from .errors import ArityMismatch, BadArity, RaggedTraces, TooManyTraces

Trace = tuple  # tuple[frozenset[str], ...]
PermutationMap = tuple  # 0-based images, position i -> map[i]


def make_trace(letters: Iterable[Iterable[str]]) -> Trace:
    return tuple(frozenset(letter) for letter in letters)


@dataclass(frozen=True)
class TraceSet:
    """A finite set of equal-length finite traces."""

    traces: frozenset
    aps: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        traces = frozenset(make_trace(t) for t in self.traces)
        lengths = {len(t) for t in traces}
        if len(lengths) > 1:
            raise RaggedTraces(f"traces have different lengths: {sorted(lengths)}")
        object.__setattr__(self, "traces", traces)
        if self.aps is not None:
            object.__setattr__(self, "aps", tuple(self.aps))

    @classmethod
    def of(cls, *traces, aps=None) -> "TraceSet":
        return cls(frozenset(make_trace(t) for t in traces), aps)

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)

    def __contains__(self, trace) -> bool:
        return make_trace(trace) in self.traces

    @property
    def length(self) -> int:
        return len(next(iter(self.traces))) if self.traces else 0

    def props(self) -> frozenset:
        out = set()
        for t in self.traces:
            for letter in t:
                out |= letter
        return frozenset(out)

    def without(self, trace) -> "TraceSet":
        return TraceSet(self.traces - {make_trace(trace)}, self.aps)

    def sorted(self, aps: Sequence[str]) -> list:
        """Traces in canonical order: lexicographic over letter bitmasks."""
        index = {a: j for j, a in enumerate(aps)}

        def key(trace):
            return tuple(sum(1 << index[a] for a in letter) for letter in trace)

        return sorted(self.traces, key=key)

    def __str__(self):
        aps = self.aps if self.aps is not None else tuple(sorted(self.props()))
        return "{ " + ", ".join(format_trace(t, aps) for t in self.sorted(aps)) + " }"


def format_trace(trace: Trace, aps: Sequence[str]) -> str:
    if not trace:
        return "ε"
    return "".join("{" + ",".join(a for a in aps if a in letter) + "}" for letter in trace)


def unzip(word) -> TraceSet:
    """The set of component projections of a tuple word; ``unzip(ε)`` is the singleton empty trace."""
    if not word:
        return TraceSet(frozenset({()}))
    arity = len(word[0])
    if any(len(letter) != arity for letter in word):
        raise ArityMismatch("tuple word mixes letters of different arity")
    return TraceSet(frozenset(tuple(letter[i] for letter in word) for i in range(arity)))


def zip_traces(traces: Sequence[Trace]):
    """The tuple word whose i-th component is ``traces[i]``."""
    if not traces:
        raise ValueError("cannot zip an empty sequence of traces")
    if len({len(t) for t in traces}) > 1:
        raise RaggedTraces("traces have different lengths")
    return tuple(tuple(letters) for letters in zip(*traces))


def _check_fits(t: TraceSet, arity: int):
    if not t.traces:
        raise ValueError("an empty trace set has no representation")
    if len(t) > arity:
        raise TooManyTraces(f"{len(t)} traces do not fit arity {arity}")


def canonical_representation(t: TraceSet, arity: int, aps: Sequence[str] | None = None):
    """Zip of the sorted traces, padding with copies of the last one up to ``arity``."""
    _check_fits(t, arity)
    if aps is None:
        aps = t.aps if t.aps is not None else sorted(t.props())
    ordered = t.sorted(aps)
    ordered += [ordered[-1]] * (arity - len(ordered))
    return zip_traces(ordered)


def all_representations(t: TraceSet, arity: int, aps: Sequence[str] | None = None) -> list:
    """Every tuple word of the given arity whose components cover exactly the traces of ``t``."""
    _check_fits(t, arity)
    if aps is None:
        aps = t.aps if t.aps is not None else sorted(t.props())
    ordered = t.sorted(aps)
    m = len(ordered)
    out = []
    seen = set()
    for choice in cartesian(range(m), repeat=arity):
        if len(set(choice)) != m:
            continue
        word = zip_traces([ordered[i] for i in choice])
        if word not in seen:
            seen.add(word)
            out.append(word)
    return out


def maps(k: int, m: int) -> list[PermutationMap]:
    """All maps {0..k-1} -> {0..m-1}, counting mixed-radix with position 0 fastest."""
    return [tuple(reversed(p)) for p in cartesian(range(m), repeat=k)]


def is_bijective(p: PermutationMap) -> bool:
    return sorted(p) == list(range(len(p)))


def project_word(word, p: PermutationMap):
    """Component ``i`` of every result letter is component ``p[i]`` of the input letter."""
    return tuple(tuple(letter[j] for j in p) for letter in word)


def permute_word(word, p: PermutationMap):
    k = len(p)
    for letter in word:
        if len(letter) != k:
            raise ArityMismatch(f"map of arity {k} applied to a letter of arity {len(letter)}")
    if any(not 0 <= j < k for j in p):
        raise ArityMismatch(f"map {p} leaves {{0..{k - 1}}}")
    return project_word(word, p)


def extend_word(word, arity: int, from_arity: int | None = None):
    """Pad every letter to ``arity`` components by repeating its last component."""
    if from_arity is None:
        if not word:
            return ()
        from_arity = len(word[0])
    if arity <= from_arity:
        raise BadArity(f"target arity {arity} must exceed {from_arity}")
    return tuple(tuple(letter) + (letter[-1],) * (arity - from_arity) for letter in word)


def letter_projection(source: Alphabet, p: PermutationMap) -> list[int]:
    """For each code of ``source``, the code of its ``p``-projection in the arity-``len(p)`` alphabet."""
    target = source.with_arity(len(p))
    return [target.code_of_masks([ms[j] for j in p]) for ms in source.masks]


def lift_automaton(a: Dfa, arity: int) -> Dfa:
    """Run ``a`` on letters whose extra components repeat the last one; everything else is rejected.

    The original states keep their numbers and one fresh non-accepting sink
    is appended.
    """
    k = a.arity
    if arity <= k:
        raise BadArity(f"target arity {arity} must exceed {k}")
    alphabet = a.alphabet.with_arity(arity)
    dead = a.num_states
    moves = []
    for ms in alphabet.masks:
        if all(m == ms[k - 1] for m in ms[k:]):
            moves.append(a.alphabet.code_of_masks(ms[:k]))
        else:
            moves.append(None)
    delta = [[dead if c is None else row[c] for c in moves] for row in a.delta]
    delta.append([dead] * alphabet.size)
    return Dfa(alphabet, delta, a.initial, a.accepting)


def permuted_copy(a: Dfa, p: PermutationMap) -> Dfa:
    """``a`` reading every letter through ``p``: accepts w iff ``a`` accepts ``permute_word(w, p)``."""
    k = a.arity
    if len(p) != k or any(not 0 <= j < k for j in p):
        raise ArityMismatch(f"map {p} does not act on arity {k}")
    moves = letter_projection(a.alphabet, p)
    return Dfa(a.alphabet, [[row[c] for c in moves] for row in a.delta], a.initial, a.accepting, a.labels)
