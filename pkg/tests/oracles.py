"""Reference implementations used to cross-check the package.

Everything here is written directly from the definitions, without going
through the package's constructions: explicit word enumeration, a lasso-word
LTL evaluator, and graph searches.
"""

from __future__ import annotations

import random
from itertools import combinations, product

from hyperbpa.automata import Alphabet, Dfa
from hyperbpa.ltl import (
    And,
    Atom,
    Const,
    Finally,
    Globally,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Release,
    Until,
)


def subsets(aps):
    """All subsets of ``aps`` as frozensets, smallest first."""
    return [frozenset(c) for r in range(len(aps) + 1) for c in combinations(aps, r)]


def letters(aps, arity):
    return [tuple(ls) for ls in product(subsets(aps), repeat=arity)]


def words(aps, arity, max_len):
    ls = letters(aps, arity)
    for n in range(max_len + 1):
        yield from product(ls, repeat=n)


def random_dfa(rng: random.Random, aps=("a",), arity=2, max_states=4, min_states=1) -> Dfa:
    alphabet = Alphabet(tuple(aps), arity)
    n = rng.randint(min_states, max_states)
    delta = [[rng.randrange(n) for _ in range(alphabet.size)] for _ in range(n)]
    accepting = {q for q in range(n) if rng.random() < 0.4}
    return Dfa(alphabet, delta, 0, accepting)


def corpus(seed=2024, count=50, **kwargs) -> list[Dfa]:
    rng = random.Random(seed)
    return [random_dfa(rng, **kwargs) for _ in range(count)]


# -- graph oracles -----------------------------------------------------------


def successors(dfa: Dfa, q: int) -> set:
    return set(dfa.delta[q])


def reach(dfa: Dfa, start: int, allowed: set) -> set:
    """States reachable from ``start`` (inclusive) along paths inside ``allowed``."""
    if start not in allowed:
        return set()
    seen = {start}
    stack = [start]
    while stack:
        q = stack.pop()
        for t in successors(dfa, q):
            if t in allowed and t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def on_cycle(dfa: Dfa, q: int, allowed: set) -> bool:
    return any(q in reach(dfa, t, allowed) for t in successors(dfa, q) if t in allowed)


def tight_accepting(dfa: Dfa) -> frozenset:
    """States from which no path stays outside the accepting set forever."""
    outside = set(range(dfa.num_states)) - dfa.accepting
    out = set()
    for q in range(dfa.num_states):
        region = reach(dfa, q, outside)
        if not any(on_cycle(dfa, r, outside) for r in region):
            out.add(q)
    return frozenset(out)


def oracle_tighten(dfa: Dfa) -> Dfa:
    return Dfa(dfa.alphabet, dfa.delta, dfa.initial, tight_accepting(dfa))


def has_live_path(dfa: Dfa, q: int, allowed: set) -> bool:
    """Some infinite path from ``q`` stays inside ``allowed``."""
    return any(on_cycle(dfa, r, allowed) for r in reach(dfa, q, allowed))


def covers(producer: Dfa, coverer: Dfa, max_len: int) -> bool:
    """Bounded covering check: every lasso word u·v^ω with |u|, |v| small."""
    aps, k = producer.alphabet.aps, producer.alphabet.arity
    for u in words(aps, k, max_len):
        for v in words(aps, k, max_len):
            if not v:
                continue
            w = u + v * (producer.num_states * coverer.num_states + 1)
            prefixes = [w[:i] for i in range(len(w) + 1)]
            if any(producer.accepts(p) for p in prefixes) and not any(coverer.accepts(p) for p in prefixes):
                return False
    return True


# -- representation oracles --------------------------------------------------


def all_maps(k, m):
    return list(product(range(m), repeat=k))


def apply_map(word, p):
    return tuple(tuple(letter[j] for j in p) for letter in word)


def closure_accepts(dfa: Dfa, word) -> bool:
    """Does some component map (with repetition) of ``word`` land in L(dfa)?"""
    k = dfa.alphabet.arity
    return any(dfa.accepts(apply_map(word, p)) for p in all_maps(k, k))


def projection_accepts(dfa: Dfa, word, arity) -> bool:
    k = dfa.alphabet.arity
    return any(dfa.accepts(apply_map(word, p)) for p in all_maps(k, arity))


def trace_set(word):
    if not word:
        return frozenset({()})
    return frozenset(tuple(letter[i] for letter in word) for i in range(len(word[0])))


# -- lasso-word LTL semantics ------------------------------------------------


def atom_holds(atom: Atom, letter) -> bool:
    return atom.prop in letter[atom.trace]


def evaluate_lasso(f, stem, cycle) -> bool:
    """Truth of ``f`` at position 0 of ``stem · cycle^ω`` by fixpoint iteration over positions."""
    return lasso_vector(f, stem, cycle, [f])[0]


def postorder(root) -> list:
    """Distinct subformulas, each listed after all of its own subformulas."""
    out = {}

    def visit(g):
        if g in out:
            return
        for child in (getattr(g, "arg", None), getattr(g, "left", None), getattr(g, "right", None)):
            if child is not None:
                visit(child)
        out[g] = None

    visit(root)
    return list(out)


def lasso_vector(root, stem, cycle, wanted):
    positions = list(stem) + list(cycle)
    n = len(positions)
    nxt = [i + 1 if i + 1 < n else len(stem) for i in range(n)]
    values = {}
    for g in postorder(root):
        values[g] = _eval_node(g, positions, nxt, values)
    return [values[g][0] for g in wanted]


def _eval_node(g, positions, nxt, values):
    n = len(positions)
    if isinstance(g, Const):
        return [g.value] * n
    if isinstance(g, Atom):
        return [atom_holds(g, letter) for letter in positions]
    if isinstance(g, Not):
        return [not x for x in values[g.arg]]
    if isinstance(g, And):
        return [x and y for x, y in zip(values[g.left], values[g.right])]
    if isinstance(g, Or):
        return [x or y for x, y in zip(values[g.left], values[g.right])]
    if isinstance(g, Implies):
        return [(not x) or y for x, y in zip(values[g.left], values[g.right])]
    if isinstance(g, Iff):
        return [x == y for x, y in zip(values[g.left], values[g.right])]
    if isinstance(g, Next):
        return [values[g.arg][nxt[i]] for i in range(n)]
    if isinstance(g, (Until, Finally)):
        left = [True] * n if isinstance(g, Finally) else values[g.left]
        right = values[g.arg] if isinstance(g, Finally) else values[g.right]
        val = [False] * n
        for _ in range(n + 1):
            val = [right[i] or (left[i] and val[nxt[i]]) for i in range(n)]
        return val
    if isinstance(g, (Release, Globally)):
        left = [False] * n if isinstance(g, Globally) else values[g.left]
        right = values[g.arg] if isinstance(g, Globally) else values[g.right]
        val = [True] * n
        for _ in range(n + 1):
            val = [right[i] and (left[i] or val[nxt[i]]) for i in range(n)]
        return val
    raise TypeError(g)


class LassoOracle:
    """Decides badness of finite words by searching bounded lasso extensions.

    A word w is judged non-bad iff some ``w · x · v^ω`` with ``|x| <= bound``
    and ``1 <= |v| <= bound`` satisfies the formula.  Instead of evaluating each
    lasso separately, the truth values of all subformulas at the start of a
    suffix are propagated backwards one letter at a time; prepending a letter
    is exact once the values at the cycle entry are known.
    """

    def __init__(self, f, aps, arity, bound):
        self.f = f
        self.nodes = postorder(f)
        self.index = {g: i for i, g in enumerate(self.nodes)}
        self.root = self.index[f]
        self.letters = letters(aps, arity)
        tails = set()
        for length in range(1, bound + 1):
            for cycle in product(self.letters, repeat=length):
                tails.add(tuple(lasso_vector(f, (), cycle, self.nodes)))
        frontier = set(tails)
        for _ in range(bound):
            frontier = {self.prepend(letter, vec) for letter in self.letters for vec in frontier}
            tails |= frontier
        self.tails = frozenset(tails)
        self._memo = {(): self.tails}

    def prepend(self, letter, after):
        now = [False] * len(self.nodes)
        idx = self.index
        for i, g in enumerate(self.nodes):
            if isinstance(g, Const):
                v = g.value
            elif isinstance(g, Atom):
                v = atom_holds(g, letter)
            elif isinstance(g, Not):
                v = not now[idx[g.arg]]
            elif isinstance(g, And):
                v = now[idx[g.left]] and now[idx[g.right]]
            elif isinstance(g, Or):
                v = now[idx[g.left]] or now[idx[g.right]]
            elif isinstance(g, Implies):
                v = (not now[idx[g.left]]) or now[idx[g.right]]
            elif isinstance(g, Iff):
                v = now[idx[g.left]] == now[idx[g.right]]
            elif isinstance(g, Next):
                v = after[idx[g.arg]]
            elif isinstance(g, Until):
                v = now[idx[g.right]] or (now[idx[g.left]] and after[i])
            elif isinstance(g, Release):
                v = now[idx[g.right]] and (now[idx[g.left]] or after[i])
            elif isinstance(g, Globally):
                v = now[idx[g.arg]] and after[i]
            elif isinstance(g, Finally):
                v = now[idx[g.arg]] or after[i]
            else:
                raise TypeError(g)
            now[i] = v
        return tuple(now)

    def starts(self, word):
        """Subformula vectors at position 0 over all bounded extensions of ``word``."""
        memo = self._memo
        if word in memo:
            return memo[word]
        rest = self.starts(word[1:])
        out = frozenset(self.prepend(word[0], vec) for vec in rest)
        memo[word] = out
        return out

    def is_bad(self, word) -> bool:
        return not any(vec[self.root] for vec in self.starts(tuple(word)))
