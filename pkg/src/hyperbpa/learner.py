"""Angluin-style learning of bad-prefix automata with arity escalation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .automata import Alphabet, Dfa, language_subset, minimize
from .constructions import is_permutation_complete, tighten
from .errors import BadArity, BudgetExceeded, TableNotReady, UnknownWord
from .hyperltl import Counterexample, Teacher
from .representation import TraceSet, canonical_representation


@dataclass(frozen=True)
class ConsistencyWitness:
    """Rows of ``first`` and ``second`` agree, but differ on ``letter · suffix``."""

    first: tuple
    second: tuple
    letter: int
    suffix: tuple


class ObservationTable:
    """Access words ``S``, separating suffixes ``E`` and the membership entries they induce.

    Words are stored as tuples of letter codes of ``alphabet``.  Entries are
    keyed by the concatenated word, and answers are cached per trace set so an
    arity extension reuses everything already asked.
    """

    def __init__(self, alphabet: Alphabet, teacher: Teacher):
        self.alphabet = alphabet
        self.teacher = teacher
        self.S: list[tuple] = [()]
        self.E: list[tuple] = [()]
        self.entries: dict[tuple, bool] = {}
        self.answers: dict[frozenset, bool] = {}
        self.queries = 0
        self.e_closures = 0
        self.fill()

    @property
    def arity(self) -> int:
        return self.alphabet.arity

    def traces(self, word: tuple) -> TraceSet:
        if not word:
            return TraceSet(frozenset({()}), self.alphabet.aps)
        subset = self.alphabet.subset
        masks = self.alphabet.masks
        return TraceSet(
            frozenset(tuple(subset(masks[c][i]) for c in word) for i in range(self.arity)),
            self.alphabet.aps,
        )

    def query(self, word: tuple) -> bool:
        value = self.entries.get(word)
        if value is None:
            t = self.traces(word)
            value = self.answers.get(t.traces)
            if value is None:
                self.queries += 1
                value = self.answers[t.traces] = self.teacher.member(t)
            self.entries[word] = value
        return value

    def frontier(self) -> list[tuple]:
        """S·Σ minus S, in S order then letter order."""
        members = set(self.S)
        out = []
        for s in self.S:
            for c in range(self.alphabet.size):
                t = s + (c,)
                if t not in members:
                    out.append(t)
        return out

    def fill(self):
        for s in self.S + self.frontier():
            for e in self.E:
                self.query(s + e)

    def row(self, word: tuple) -> tuple:
        if word[:-1] not in self.S and word not in self.S:
            raise UnknownWord(word)
        return tuple(self.entries[word + e] for e in self.E)

    def distinct_rows(self) -> int:
        return len({self.row(s) for s in self.S})

    def check_closed(self):
        """First frontier word whose row no access word has, or ``None``."""
        rows = {self.row(s) for s in self.S}
        for t in self.frontier():
            if self.row(t) not in rows:
                return t
        return None

    def check_consistent(self):
        """First pair of equal-row access words separated after one letter, or ``None``."""
        S = self.S
        for i, s in enumerate(S):
            rs = self.row(s)
            for t in S[i + 1 :]:
                if self.row(t) != rs:
                    continue
                for c in range(self.alphabet.size):
                    for e in self.E:
                        if self.entries[s + (c,) + e] != self.entries[t + (c,) + e]:
                            return ConsistencyWitness(s, t, c, e)
        return None

    def add_access(self, words):
        members = set(self.S)
        for w in words:
            if w not in members:
                members.add(w)
                self.S.append(w)
        self.fill()

    def add_suffix(self, suffix: tuple):
        if suffix not in self.E:
            self.E.append(suffix)
        self.fill()

    def close_suffixes(self) -> bool:
        """Make ``E`` suffix-closed again; reports whether anything was added."""
        present = set(self.E)
        missing = []
        for e in self.E:
            for i in range(1, len(e)):
                if e[i:] not in present:
                    present.add(e[i:])
                    missing.append(e[i:])
        self.E.extend(missing)
        if missing:
            self.e_closures += 1
            self.fill()
        return bool(missing)

    def repair(self):
        """Resolve closedness and consistency defects until there are none."""
        while True:
            witness = self.check_closed()
            if witness is not None:
                self.add_access([witness])
                continue
            defect = self.check_consistent()
            if defect is not None:
                self.add_suffix((defect.letter,) + defect.suffix)
                continue
            return self

    def hypothesis(self) -> Dfa:
        if self.check_closed() is not None or self.check_consistent() is not None:
            raise TableNotReady("the observation table must be closed and consistent")
        index: dict[tuple, int] = {}
        reps = []
        for s in self.S:
            r = self.row(s)
            if r not in index:
                index[r] = len(reps)
                reps.append(s)
        delta = [[index[self.row(s + (c,))] for c in range(self.alphabet.size)] for s in reps]
        accepting = [i for i, s in enumerate(reps) if self.entries[s]]
        return Dfa(self.alphabet, delta, 0, accepting, labels=tuple(reps))

    def extend(self, arity: int):
        """Move the table to a larger arity by padding every word with copies of its last component."""
        if arity <= self.arity:
            raise BadArity(f"target arity {arity} must exceed {self.arity}")
        alphabet = self.alphabet.with_arity(arity)
        old_entries = self.entries
        self.S = [_lift_codes(self.alphabet, s, alphabet) for s in self.S]
        self.E = [_lift_codes(self.alphabet, e, alphabet) for e in self.E]
        lifted = {_lift_codes(self.alphabet, w, alphabet): v for w, v in old_entries.items()}
        self.alphabet = alphabet
        self.entries = {}
        self.fill()
        for w, v in lifted.items():
            if w in self.entries and self.entries[w] != v:
                raise AssertionError(f"extension changed the entry of {w}")
        self.close_suffixes()
        return self

    def add_counterexample(self, cex: Counterexample, max_arity: int | None = None):
        if cex.positive:
            t = cex.traces
            if len(t) > self.arity:
                if max_arity is not None and len(t) > max_arity:
                    raise BudgetExceeded(f"counterexample needs arity {len(t)} beyond the limit {max_arity}")
                self.extend(len(t))
            word = self.alphabet.encode(canonical_representation(t, self.arity, self.alphabet.aps))
        else:
            word = cex.word
            k = len(word[0]) if word else self.arity
            source = self.alphabet.with_arity(k)
            word = source.encode(word)
            if k < self.arity:
                word = _lift_codes(source, word, self.alphabet)
            elif k > self.arity:
                raise BadArity(f"negative counterexample of arity {k} exceeds table arity {self.arity}")
        self.add_access(_prefixes(word))
        return self


def _lift_codes(source: Alphabet, word: tuple, target: Alphabet) -> tuple:
    """Re-encode a code word at a larger arity, repeating each letter's last component."""
    extra = target.arity - source.arity
    masks = source.masks
    return tuple(target.code_of_masks(masks[c] + (masks[c][-1],) * extra) for c in word)


@dataclass
class Round:
    hypothesis: Dfa
    arity: int
    rows_before: int
    rows_after: int
    counterexample: Counterexample | None = None
    source: str = "teacher"  # or "permutation" / "tightness"
    extended: bool = False


@dataclass
class LearnReport:
    dfa: Dfa | None = None
    arity: int = 1
    membership_queries: int = 0
    equivalence_queries: int = 0
    arity_extensions: int = 0
    permutation_counterexamples: int = 0
    tightness_counterexamples: int = 0
    suffix_closures: int = 0
    rounds: list[Round] = field(default_factory=list)

    @property
    def hypotheses(self) -> list[Dfa]:
        return [r.hypothesis for r in self.rounds]

    @property
    def hypothesis_sizes(self) -> list[int]:
        return [r.hypothesis.num_states for r in self.rounds]

    def stats(self) -> dict:
        return {
            "membership_queries": self.membership_queries,
            "equivalence_queries": self.equivalence_queries,
            "final_arity": self.arity,
            "final_states": self.dfa.num_states if self.dfa is not None else 0,
            "rounds": len(self.rounds),
        }


def learn(teacher: Teacher, max_rounds: int | None = None, max_arity: int | None = None) -> LearnReport:
    """Learn a minimal, tight, permutation-complete bad-prefix automaton from a teacher."""
    if max_arity is None:
        max_arity = teacher.max_arity
    table = ObservationTable(Alphabet(teacher.aps, 1), teacher)
    report = LearnReport()

    def sync():
        report.arity = table.arity
        report.membership_queries = table.queries
        report.suffix_closures = table.e_closures

    while True:
        if max_rounds is not None and len(report.rounds) >= max_rounds:
            sync()
            raise BudgetExceeded(f"no answer within {max_rounds} rounds", report)
        table.repair()
        rows_before = table.distinct_rows()
        hyp = table.hypothesis()
        current = Round(hyp, table.arity, rows_before, rows_before)
        report.rounds.append(current)
        report.equivalence_queries += 1
        cex = teacher.equivalence(hyp)
        if cex is None:
            witness = is_permutation_complete(hyp)
            if witness is not None:
                current.source = "permutation"
                report.permutation_counterexamples += 1
            else:
                witness = language_subset(tighten(hyp), hyp)
                if witness is not None:
                    current.source = "tightness"
                    report.tightness_counterexamples += 1
            if witness is None:
                report.dfa = minimize(hyp)
                sync()
                return report
            # The witness represents a bad prefix the hypothesis rejects; add it verbatim.
            codes = table.alphabet.encode(witness)
            table.add_access(_prefixes(codes))
            current.counterexample = Counterexample.missed(table.traces(codes))
        else:
            current.counterexample = cex
            arity = table.arity
            try:
                table.add_counterexample(cex, max_arity)
            except BudgetExceeded as exc:
                sync()
                raise BudgetExceeded(str(exc), report) from None
            if table.arity != arity:
                current.extended = True
                report.arity_extensions += 1
        table.repair()
        current.rows_after = table.distinct_rows()
        # An arity extension may leave the row count unchanged; any other counterexample must grow it.
        if current.rows_after < rows_before or (not current.extended and current.rows_after == rows_before):
            raise AssertionError(f"counterexample round left {rows_before} rows at {current.rows_after}")


def _prefixes(word: tuple) -> list[tuple]:
    return [word[:i] for i in range(len(word) + 1)]
