"""LTL bodies over trace-indexed atoms: parsing, normal forms, and safety automata."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Union

from .automata import Alphabet, Dfa, Nfa, determinize
from .errors import NotSafe, ParseError

# -- syntax tree ------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Atom:
    prop: str
    trace: Union[int, str]

    def __str__(self):
        return f"{self.prop}[{self.trace}]"


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return f"!{self.arg}"


@dataclass(frozen=True)
class Next:
    arg: "Formula"

    def __str__(self):
        return f"X {self.arg}"


@dataclass(frozen=True)
class Globally:
    arg: "Formula"

    def __str__(self):
        return f"G {self.arg}"


@dataclass(frozen=True)
class Finally:
    arg: "Formula"

    def __str__(self):
        return f"F {self.arg}"


@dataclass(frozen=True)
class _Binary:
    left: "Formula"
    right: "Formula"
    symbol = "?"

    def __str__(self):
        return f"({self.left} {self.symbol} {self.right})"


class And(_Binary):
    symbol = "&"


class Or(_Binary):
    symbol = "|"


class Implies(_Binary):
    symbol = "->"


class Iff(_Binary):
    symbol = "<->"


class Until(_Binary):
    symbol = "U"


class Release(_Binary):
    symbol = "R"


Formula = Union[Const, Atom, Not, Next, Globally, Finally, And, Or, Implies, Iff, Until, Release]
UNARY = (Not, Next, Globally, Finally)
BINARY = (And, Or, Implies, Iff, Until, Release)
TRUE = Const(True)
FALSE = Const(False)


def conjoin(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    return reduce(And, parts) if parts else TRUE


def subformulas(f: Formula):
    yield f
    if isinstance(f, UNARY):
        yield from subformulas(f.arg)
    elif isinstance(f, BINARY):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def atoms(f: Formula) -> list[Atom]:
    seen = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            seen.setdefault(g, None)
    return list(seen)


def map_atoms(f: Formula, fn) -> Formula:
    if isinstance(f, Atom):
        return fn(f)
    if isinstance(f, UNARY):
        return type(f)(map_atoms(f.arg, fn))
    if isinstance(f, BINARY):
        return type(f)(map_atoms(f.left, fn), map_atoms(f.right, fn))
    return f


# -- parsing ----------------------------------------------------------------

KEYWORDS = {"X", "U", "R", "G", "F", "true", "false", "forall", "exists"}
TOKEN = re.compile(r"\s*(?:(?P<comment>#[^\n]*)|(?P<sym><->|->|[!&|()\[\].])|(?P<word>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>[0-9]+)|(?P<bad>\S))")


@dataclass(frozen=True)
class Token:
    kind: str  # a keyword or symbol spelling, "ident", "number" or "end"
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "end" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def position(offset):
        line = max(i for i, s in enumerate(line_starts) if s <= offset)
        return line + 1, offset - line_starts[line] + 1

    pos = 0
    while True:
        m = TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        start = m.start(m.lastgroup)
        line, column = position(start)
        value = m.group(m.lastgroup)
        if m.lastgroup == "comment":
            continue
        if m.lastgroup == "bad":
            raise ParseError(f"unexpected character {value!r}", line, column)
        if m.lastgroup == "sym":
            tokens.append(Token(value, value, line, column))
        elif m.lastgroup == "num":
            tokens.append(Token("number", value, line, column))
        else:
            # A keyword spelling directly followed by '[' is an atom name.
            following = re.compile(r"\s*\[").match(text, pos)
            kind = value if value in KEYWORDS and following is None else "ident"
            tokens.append(Token(kind, value, line, column))
    line, column = position(len(text))
    tokens.append(Token("end", "", line, column))
    return tokens


class Parser:
    """Recursive-descent parser; binding from loosest: <->, ->, |, &, U/R, prefix operators."""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: Iterable[str]):
        tok = self.current
        raise ParseError(f"unexpected {tok.describe()}", tok.line, tok.column, expected)

    def expect(self, kind: str) -> Token:
        if self.current.kind != kind:
            self.fail([kind])
        return self.advance()

    def finish(self):
        if self.current.kind != "end":
            self.fail(["end of input", "<->", "->", "|", "&", "U", "R"])

    def formula(self) -> Formula:
        left = self.implication()
        while self.current.kind == "<->":
            self.advance()
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.current.kind == "->":
            self.advance()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.current.kind == "|":
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.binary_temporal()
        while self.current.kind == "&":
            self.advance()
            left = And(left, self.binary_temporal())
        return left

    def binary_temporal(self) -> Formula:
        left = self.unary()
        kind = self.current.kind
        if kind in ("U", "R"):
            self.advance()
            right = self.binary_temporal()
            return Until(left, right) if kind == "U" else Release(left, right)
        return left

    def unary(self) -> Formula:
        kind = self.current.kind
        ops = {"!": Not, "X": Next, "G": Globally, "F": Finally}
        if kind in ops:
            self.advance()
            return ops[kind](self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.current
        if tok.kind == "(":
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.kind in ("true", "false"):
            self.advance()
            return Const(tok.kind == "true")
        if tok.kind == "ident":
            self.advance()
            self.expect("[")
            var = self.current
            if var.kind == "number":
                self.advance()
                trace: Union[int, str] = int(var.text)
            elif var.kind == "ident" or var.kind in KEYWORDS:
                self.advance()
                trace = var.text
            else:
                self.fail(["trace variable"])
            self.expect("]")
            return Atom(tok.text, trace)
        self.fail(["(", "!", "X", "G", "F", "true", "false", "atom"])


def parse_ltl(text: str) -> Formula:
    parser = Parser(text)
    f = parser.formula()
    parser.finish()
    return f


# -- normal forms and classification ----------------------------------------


def to_nnf(f: Formula) -> Formula:
    """Negation normal form: negations only on atoms, no implications or biconditionals."""
    return _nnf(f, False)


def _nnf(f: Formula, negate: bool) -> Formula:
    if isinstance(f, Const):
        return Const(f.value != negate)
    if isinstance(f, Atom):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return _nnf(f.arg, not negate)
    if isinstance(f, Next):
        return Next(_nnf(f.arg, negate))
    if isinstance(f, Globally):
        inner = _nnf(f.arg, negate)
        return Finally(inner) if negate else Globally(inner)
    if isinstance(f, Finally):
        inner = _nnf(f.arg, negate)
        return Globally(inner) if negate else Finally(inner)
    if isinstance(f, And):
        parts = _nnf(f.left, negate), _nnf(f.right, negate)
        return Or(*parts) if negate else And(*parts)
    if isinstance(f, Or):
        parts = _nnf(f.left, negate), _nnf(f.right, negate)
        return And(*parts) if negate else Or(*parts)
    if isinstance(f, Implies):
        return _nnf(Or(Not(f.left), f.right), negate)
    if isinstance(f, Iff):
        pos_l, pos_r = _nnf(f.left, False), _nnf(f.right, False)
        neg_l, neg_r = _nnf(f.left, True), _nnf(f.right, True)
        if negate:
            return Or(And(pos_l, neg_r), And(neg_l, pos_r))
        return Or(And(pos_l, pos_r), And(neg_l, neg_r))
    if isinstance(f, Until):
        parts = _nnf(f.left, negate), _nnf(f.right, negate)
        return Release(*parts) if negate else Until(*parts)
    if isinstance(f, Release):
        parts = _nnf(f.left, negate), _nnf(f.right, negate)
        return Until(*parts) if negate else Release(*parts)
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    for g in subformulas(f):
        if isinstance(g, (Implies, Iff)):
            return False
        if isinstance(g, Not) and not isinstance(g.arg, Atom):
            return False
    return True


def is_syntactically_safe(f: Formula) -> bool:
    """True iff the negation normal form uses no eventuality (U or F)."""
    return not any(isinstance(g, (Until, Finally)) for g in subformulas(to_nnf(f)))


# -- tableau ----------------------------------------------------------------


def _key(f: Formula) -> str:
    return str(f)


def _obligation_key(obligation: frozenset) -> tuple:
    return tuple(sorted(_key(g) for g in obligation))


def _minimal(sets: Iterable[frozenset]) -> list[frozenset]:
    """Inclusion-minimal members, in canonical order."""
    unique = sorted(set(sets), key=lambda s: (len(s), _obligation_key(s)))
    out: list[frozenset] = []
    for s in unique:
        if not any(t <= s for t in out):
            out.append(s)
    return sorted(out, key=_obligation_key)


class Tableau:
    """Letter-by-letter expansion of NNF safety obligations over a product alphabet.

    ``expand(f, c)`` lists the alternative sets of obligations that must hold
    from the next position on, given that ``f`` holds now and the current
    letter has code ``c``.  An empty list means ``f`` is violated.
    """

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._cache: dict = {}

    def _atom(self, atom: Atom, c: int) -> bool:
        if not isinstance(atom.trace, int) or not 0 <= atom.trace < self.alphabet.arity:
            raise ValueError(f"atom {atom} refers to a trace outside arity {self.alphabet.arity}")
        try:
            bit = self.alphabet.aps.index(atom.prop)
        except ValueError:
            raise ValueError(f"atom {atom} uses a proposition outside {list(self.alphabet.aps)}") from None
        return bool(self.alphabet.masks[c][atom.trace] >> bit & 1)

    def expand(self, f: Formula, c: int) -> list[frozenset]:
        key = (f, c)
        out = self._cache.get(key)
        if out is None:
            out = self._cache[key] = self._expand(f, c)
        return out

    def _expand(self, f: Formula, c: int) -> list[frozenset]:
        empty = [frozenset()]
        if isinstance(f, Const):
            return empty if f.value else []
        if isinstance(f, Atom):
            return empty if self._atom(f, c) else []
        if isinstance(f, Not):
            return [] if self._atom(f.arg, c) else empty
        if isinstance(f, And):
            return self._both(self.expand(f.left, c), self.expand(f.right, c))
        if isinstance(f, Or):
            return _minimal(self.expand(f.left, c) + self.expand(f.right, c))
        if isinstance(f, Next):
            return self._next(f.arg)
        if isinstance(f, Release):
            stay = _minimal(self.expand(f.left, c) + self._next(f))
            return self._both(self.expand(f.right, c), stay)
        if isinstance(f, Globally):
            return self._both(self.expand(f.arg, c), self._next(f))
        raise NotSafe(f"{f} is not a safety operator")

    @staticmethod
    def _next(f: Formula) -> list[frozenset]:
        if f == TRUE:
            return [frozenset()]
        if f == FALSE:
            return []
        return [frozenset((f,))]

    @staticmethod
    def _both(xs: list[frozenset], ys: list[frozenset]) -> list[frozenset]:
        return _minimal(x | y for x in xs for y in ys)

    def step(self, obligation: frozenset, c: int) -> list[frozenset]:
        out = [frozenset()]
        for f in sorted(obligation, key=_key):
            out = self._both(out, self.expand(f, c))
            if not out:
                break
        return out


def _check_safe(f: Formula, alphabet: Alphabet) -> Formula:
    g = to_nnf(f)
    if not is_syntactically_safe(g):
        raise NotSafe(f"{f} uses an eventuality (U or F) and is not syntactically safe")
    for atom in atoms(g):
        if not isinstance(atom.trace, int):
            raise ValueError(f"atom {atom} has an unresolved trace variable")
        if not 0 <= atom.trace < alphabet.arity:
            raise ValueError(f"atom {atom} refers to a trace outside arity {alphabet.arity}")
        if atom.prop not in alphabet.aps:
            raise ValueError(f"atom {atom} uses a proposition outside {list(alphabet.aps)}")
    return g


def _tableau_graph(f: Formula, alphabet: Alphabet):
    """Reachable obligation sets with their successor lists, restricted to those with infinite runs."""
    g = _check_safe(f, alphabet)
    tableau = Tableau(alphabet)
    start = frozenset() if g == TRUE else frozenset((g,))
    index = {start: 0}
    states = [start]
    succ: list[list[list[int]]] = []
    i = 0
    while i < len(states):
        row = []
        for c in range(alphabet.size):
            targets = []
            for t in tableau.step(states[i], c):
                j = index.get(t)
                if j is None:
                    j = index[t] = len(states)
                    states.append(t)
                targets.append(j)
            row.append(targets)
        succ.append(row)
        i += 1
    # Greatest fixpoint: keep states with some successor that is kept.
    alive = set(range(len(states)))
    changed = True
    while changed:
        changed = False
        for q in sorted(alive):
            if not any(t in alive for targets in succ[q] for t in targets):
                alive.discard(q)
                changed = True
    return states, succ, alive


def safety_nfa(f: Formula, aps: Sequence[str], arity: int) -> Nfa:
    """Tableau safety automaton for a syntactically safe body; every state accepts.

    States are obligation sets from which some infinite run exists.  A missing
    transition is a violation.  For an unsatisfiable body the automaton is a
    single state without transitions.
    """
    alphabet = Alphabet(tuple(aps), arity)
    states, succ, alive = _tableau_graph(f, alphabet)
    kept = [q for q in range(len(states)) if q in alive]
    if 0 not in alive:
        return Nfa(alphabet, (tuple(frozenset() for _ in range(alphabet.size)),), 0, {0}, True, (frozenset({FALSE}),))
    new = {q: i for i, q in enumerate(kept)}
    delta = tuple(
        tuple(frozenset(new[t] for t in targets if t in alive) for targets in succ[q]) for q in kept
    )
    return Nfa(alphabet, delta, 0, frozenset(range(len(kept))), True, tuple(states[q] for q in kept))


def bad_prefix_dfa(f: Formula, aps: Sequence[str], arity: int) -> Dfa:
    """Deterministic automaton accepting exactly the finite words no infinite extension of which satisfies ``f``."""
    alphabet = Alphabet(tuple(aps), arity)
    states, succ, alive = _tableau_graph(f, alphabet)
    if 0 not in alive:
        return Dfa(alphabet, [[0] * alphabet.size], 0, {0}, labels=(frozenset(),))
    nfa = safety_nfa(f, aps, arity)
    dfa = determinize(nfa)
    dead = frozenset()
    accepting = {q for q, label in enumerate(dfa.labels) if label == dead}
    return Dfa(alphabet, dfa.delta, dfa.initial, accepting, dfa.labels)
