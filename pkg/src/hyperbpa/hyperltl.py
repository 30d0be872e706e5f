"""HyperLTL formulas with trace quantifiers, and a teacher answering learning queries for them."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .automata import Dfa, live_states, product, shortest_path_codes
from .constructions import prefix_projection, tighten
from .equiv import covering_check, representation_equivalent
from .errors import (
    AlphabetMismatch,
    ArityTooLarge,
    IndexOutOfRange,
    NotUniversallySafe,
    ParseError,
    UnboundVariable,
)
from .ltl import Atom, Formula, Parser, atoms, bad_prefix_dfa, conjoin, is_syntactically_safe, map_atoms
from .representation import PermutationMap, TraceSet, canonical_representation, lift_automaton, maps, unzip


@dataclass(frozen=True)
class HyperFormula:
    """Quantifier prefix plus body; body atoms refer to traces by quantifier position."""

    quantifiers: tuple  # of (kind, variable) with kind in {"forall", "exists"}
    body: Formula

    @property
    def arity(self) -> int:
        return len(self.quantifiers)

    @property
    def variables(self) -> tuple:
        return tuple(v for _, v in self.quantifiers)

    def props(self) -> tuple:
        return tuple(sorted({a.prop for a in atoms(self.body)}))

    def __str__(self):
        names = self.variables
        prefix = "".join(f"{kind} {var}. " for kind, var in self.quantifiers)
        return prefix + str(map_atoms(self.body, lambda a: Atom(a.prop, names[a.trace])))


def parse_hyper(text: str) -> HyperFormula:
    parser = Parser(text)
    quantifiers = []
    while parser.current.kind in ("forall", "exists"):
        kind = parser.advance().kind
        var = parser.current
        if var.kind != "ident":
            parser.fail(["trace variable"])
        parser.advance()
        if var.text in {v for _, v in quantifiers}:
            raise ParseError(f"trace variable {var.text!r} quantified twice", var.line, var.column)
        parser.expect(".")
        quantifiers.append((kind, var.text))
    body = parser.formula()
    parser.finish()
    index = {v: i for i, (_, v) in enumerate(quantifiers)}

    def resolve(atom: Atom) -> Atom:
        if atom.trace not in index:
            raise UnboundVariable(f"trace variable {atom.trace!r} of {atom} is not quantified")
        return Atom(atom.prop, index[atom.trace])

    return HyperFormula(tuple(quantifiers), map_atoms(body, resolve))


def is_universally_safe(f: HyperFormula) -> bool:
    return all(kind == "forall" for kind, _ in f.quantifiers) and is_syntactically_safe(f.body)


def substitute(body: Formula, mapping: PermutationMap) -> Formula:
    """Rename trace index ``i`` to ``mapping[i]`` in every atom."""

    def rename(atom: Atom) -> Atom:
        if not isinstance(atom.trace, int) or not 0 <= atom.trace < len(mapping):
            raise IndexOutOfRange(f"atom {atom} is outside a map over {len(mapping)} traces")
        return Atom(atom.prop, mapping[atom.trace])

    return map_atoms(body, rename)


def assignment_closure(f: HyperFormula, n: int) -> Formula:
    """Conjunction of the body over every assignment of its variables to ``n`` trace positions."""
    if not is_universally_safe(f):
        raise NotUniversallySafe(f"{f} is not universally safe")
    if n < 1:
        raise ValueError("the closure arity must be positive")
    seen = {}
    for p in maps(f.arity, n):
        g = substitute(f.body, p)
        seen.setdefault(g, None)
    return conjoin(seen)


@dataclass(frozen=True)
class Counterexample:
    """A positive counterexample carries a missed bad prefix, a negative one a wrongly accepted word."""

    positive: bool
    traces: TraceSet | None = None
    word: tuple | None = None

    @classmethod
    def missed(cls, traces: TraceSet) -> "Counterexample":
        return cls(True, traces=traces)

    @classmethod
    def wrongly_accepted(cls, word: tuple) -> "Counterexample":
        return cls(False, word=word)


class Teacher:
    """Shared query bookkeeping and counterexample minimization."""

    aps: tuple
    max_arity: int

    def __init__(self):
        self.membership_queries = 0
        self.equivalence_queries = 0
        self._member_cache: dict = {}

    def member(self, t: TraceSet) -> bool:
        self.membership_queries += 1
        return self._member(t)

    def _member(self, t: TraceSet) -> bool:
        key = t.traces
        out = self._member_cache.get(key)
        if out is None:
            out = self._member_cache[key] = self._decide(t)
        return out

    def _decide(self, t: TraceSet) -> bool:
        raise NotImplementedError

    def equivalence(self, conjecture: Dfa) -> Counterexample | None:
        self.equivalence_queries += 1
        if conjecture.alphabet.aps != self.aps:
            raise AlphabetMismatch(f"conjecture reads {conjecture.alphabet.aps}, teacher uses {self.aps}")
        return self._equivalence(conjecture)

    def _equivalence(self, conjecture: Dfa) -> Counterexample | None:
        raise NotImplementedError

    def shrink(self, t: TraceSet, exact: bool = False) -> TraceSet:
        """Drop traces while the set stays a bad prefix.

        Greedy deletion in canonical order by default; with ``exact`` and at
        most four traces, a smallest bad subset is found by exhaustive search.
        """
        ordered = t.sorted(self.aps)
        if exact and len(ordered) <= 4:
            for size in range(1, len(ordered)):
                for subset in combinations(ordered, size):
                    candidate = TraceSet(frozenset(subset), self.aps)
                    if self._member(candidate):
                        return candidate
            return t
        kept = list(ordered)
        for trace in ordered:
            if len(kept) > 1:
                candidate = TraceSet(frozenset(x for x in kept if x != trace), self.aps)
                if self._member(candidate):
                    kept.remove(trace)
        return TraceSet(frozenset(kept), self.aps)


class HyperLtlTeacher(Teacher):
    """Exact membership and equivalence for a universally safe HyperLTL formula."""

    def __init__(self, formula: HyperFormula, aps: Sequence[str] | None = None, exact_shrink: bool = False):
        super().__init__()
        if not is_universally_safe(formula):
            raise NotUniversallySafe(f"{formula} is not universally safe")
        self.formula = formula
        self.aps = tuple(aps) if aps is not None else formula.props()
        missing = set(formula.props()) - set(self.aps)
        if missing:
            raise AlphabetMismatch(f"formula uses propositions {sorted(missing)} outside {list(self.aps)}")
        self.max_arity = formula.arity
        self.exact_shrink = exact_shrink
        self._automata: dict[int, Dfa] = {}

    def automaton(self, n: int) -> Dfa:
        """Tight bad-prefix DFA of the closure of the formula over ``n`` trace positions."""
        dfa = self._automata.get(n)
        if dfa is None:
            phi = assignment_closure(self.formula, n)
            dfa = self._automata[n] = tighten(bad_prefix_dfa(phi, self.aps, n))
        return dfa

    def _decide(self, t: TraceSet) -> bool:
        if not t.traces:
            return False
        n = len(t)
        dfa = self.automaton(n)
        return dfa.accepts(canonical_representation(t, n, self.aps))

    def _equivalence(self, conjecture: Dfa) -> Counterexample | None:
        k = self.formula.arity
        kl = conjecture.arity
        if kl > k:
            raise ArityTooLarge(f"conjecture arity {kl} exceeds the formula's {k} quantifiers")
        bad = self.automaton(k)
        # Soundness: a conjecture-accepted word the formula automaton cannot yet reject.
        lifted = conjecture if kl == k else lift_automaton(conjecture, k)
        prod = product(lifted, bad, lambda x, y: x)
        labels = prod.labels
        fine = live_states(prod, {q for q in range(prod.num_states) if labels[q][1] not in bad.accepting})
        codes = shortest_path_codes(prod, lambda q: q in fine and labels[q][0] in lifted.accepting)
        if codes is not None:
            word = prod.alphabet.decode(codes)
            return Counterexample.wrongly_accepted(tuple(letter[:kl] for letter in word))
        # Completeness: a bad prefix none of whose extensions the conjecture catches.
        verdict = covering_check(bad, tighten(prefix_projection(conjecture, k)))
        if not verdict.ok:
            t = unzip(verdict.accepted_prefix)
            t = TraceSet(t.traces, self.aps)
            return Counterexample.missed(self.shrink(t, self.exact_shrink))
        return None


class AutomatonTeacher(Teacher):
    """Teacher whose target is the hyperproperty represented by a reference bad-prefix automaton."""

    def __init__(self, reference: Dfa, exact_shrink: bool = False):
        super().__init__()
        self.reference = reference
        self.aps = reference.alphabet.aps
        self.max_arity = reference.arity
        self.exact_shrink = exact_shrink
        self._automata: dict[int, Dfa] = {}

    def automaton(self, m: int) -> Dfa:
        """Tight DFA accepting the m-ary words some prefix of which has a projection the reference accepts."""
        dfa = self._automata.get(m)
        if dfa is None:
            dfa = self._automata[m] = tighten(prefix_projection(self.reference, m))
        return dfa

    def _decide(self, t: TraceSet) -> bool:
        if not t.traces:
            return False
        m = max(len(t), self.reference.arity)
        return self.automaton(m).accepts(canonical_representation(t, m, self.aps))

    def _equivalence(self, conjecture: Dfa) -> Counterexample | None:
        violation = representation_equivalent(conjecture, self.reference)
        if violation is None:
            return None
        if violation.side == 1:
            t = TraceSet(violation.traces.traces, self.aps)
            return Counterexample.missed(self.shrink(t, self.exact_shrink))
        kl = conjecture.arity
        if violation.direction == 1:
            # The lifted conjecture accepted the word; drop the padding components.
            return Counterexample.wrongly_accepted(tuple(letter[:kl] for letter in violation.word))
        # The tightened conjecture accepted; unroll the lasso until the conjecture itself accepts.
        lasso = violation.lasso
        word = list(lasso.prefix)
        limit = len(word) + (conjecture.num_states + 1) * max(1, len(lasso.cycle))
        for n in range(len(word) + 1):
            if conjecture.accepts(word[:n]):
                return Counterexample.wrongly_accepted(tuple(word[:n]))
        while len(word) <= limit:
            for letter in lasso.cycle:
                word.append(letter)
                if conjecture.accepts(word):
                    return Counterexample.wrongly_accepted(tuple(word))
        raise AssertionError("an uncovered lasso accepted by the tightened conjecture must reach acceptance")
