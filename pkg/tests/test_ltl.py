import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import letter
from hyperbpa.automata import language_equal, minimize, isomorphic, shortest_accepted
from hyperbpa.constructions import tighten
from hyperbpa.errors import NotSafe, ParseError
from hyperbpa.ltl import (
    FALSE,
    TRUE,
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
    bad_prefix_dfa,
    is_nnf,
    is_syntactically_safe,
    parse_ltl,
    safety_nfa,
    to_nnf,
)
from oracles import LassoOracle, evaluate_lasso, letters, words

a0, a1, b1 = Atom("a", 0), Atom("a", 1), Atom("b", 1)
ap, aq = Atom("a", "p"), Atom("a", "q")


def formulas(atoms, safe=False, depth=3):
    leaves = st.sampled_from(atoms + [TRUE, FALSE])
    if safe:
        leaves = st.one_of(leaves, st.sampled_from([Not(x) for x in atoms]))

    def extend(children):
        unary = [Next, Globally] if safe else [Not, Next, Globally, Finally]
        binary = [And, Or, Release] if safe else [And, Or, Implies, Iff, Until, Release]
        return st.one_of(
            st.builds(lambda op, x: op(x), st.sampled_from(unary), children),
            st.builds(lambda op, x, y: op(x, y), st.sampled_from(binary), children, children),
        )

    return st.recursive(leaves, extend, max_leaves=depth + 2)


def lassos(aps, arity):
    letter_st = st.sampled_from(letters(aps, arity))
    return st.tuples(st.lists(letter_st, max_size=3).map(tuple), st.lists(letter_st, min_size=1, max_size=3).map(tuple))


class TestParser:
    def test_intro_conjunction(self):
        f = parse_ltl("a[p] & G (a[p] <-> a[q])")
        assert f == And(ap, Globally(Iff(ap, aq)))

    def test_noninterference_release(self):
        f = parse_ltl("(!(i[p] <-> i[q])) R (o[p] <-> o[q])")
        assert f == Release(Not(Iff(Atom("i", "p"), Atom("i", "q"))), Iff(Atom("o", "p"), Atom("o", "q")))

    def test_unclosed_bracket(self):
        with pytest.raises(ParseError) as info:
            parse_ltl("a[p U b[q]")
        assert info.value.line == 1
        assert info.value.column == 5
        assert info.value.expected == ("]",)

    def test_precedence(self):
        f = parse_ltl("a[0] | b[1] & a[1] -> X a[0] <-> a[1] U b[1] R a[0]")
        inner = Implies(Or(a0, And(b1, a1)), Next(a0))
        assert f == Iff(inner, Until(a1, Release(b1, a0)))

    def test_implication_right_associative(self):
        assert parse_ltl("a[0] -> a[1] -> b[1]") == Implies(a0, Implies(a1, b1))

    def test_keywords_as_names(self):
        assert parse_ltl("G[0] & X X[1]") == And(Atom("G", 0), Next(Atom("X", 1)))

    def test_multiline_position_and_comments(self):
        with pytest.raises(ParseError) as info:
            parse_ltl("# comment\na[p] &\n  )")
        assert (info.value.line, info.value.column) == (3, 3)

    @pytest.mark.parametrize("text", ["", "a[p] b[q]", "a[]", "(a[p]", "a[p] $"])
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_ltl(text)

    @settings(max_examples=150, deadline=None)
    @given(formulas([a0, a1, b1], depth=6))
    def test_print_parse_round_trip(self, f):
        assert parse_ltl(str(f)) == f


class TestNnf:
    def test_until_dual(self):
        assert to_nnf(Not(Until(Atom("a", "p"), Atom("b", "q")))) == Release(Not(Atom("a", "p")), Not(Atom("b", "q")))

    def test_double_negation(self):
        assert to_nnf(Not(Not(ap))) == ap

    def test_iff(self):
        assert to_nnf(Iff(ap, Atom("b", "q"))) == Or(And(ap, Atom("b", "q")), And(Not(ap), Not(Atom("b", "q"))))

    @settings(max_examples=150, deadline=None)
    @given(formulas([a0, a1], depth=5), lassos(("a",), 2))
    def test_semantics_preserved(self, f, lasso):
        g = to_nnf(f)
        assert is_nnf(g)
        assert evaluate_lasso(g, *lasso) == evaluate_lasso(f, *lasso)


class TestSafety:
    def test_intro(self):
        assert is_syntactically_safe(to_nnf(parse_ltl("G (a[p] -> a[q])")))

    def test_eventually(self):
        assert not is_syntactically_safe(parse_ltl("F a[p]"))

    def test_noninterference(self):
        assert is_syntactically_safe(parse_ltl("(!(i[p]<->i[q])) R (o[p]<->o[q])"))

    def test_negated_always_is_eventually(self):
        assert not is_syntactically_safe(parse_ltl("!G a[p]"))
        assert is_syntactically_safe(parse_ltl("!F a[p]"))


class TestSafetyNfa:
    def test_always(self):
        nfa = safety_nfa(Globally(a0), ("a",), 1)
        assert nfa.num_states == 1
        assert nfa.all_accepting
        assert nfa.delta[0][0] == frozenset()
        assert nfa.delta[0][1] == frozenset({0})

    def test_run_body(self):
        body = And(a0, Globally(Iff(a0, a1)))
        nfa = safety_nfa(body, ("a",), 2)
        assert nfa.accepts((letter("a", "a"), letter("", ""), letter("a", "a")))
        assert not nfa.accepts((letter("", ""),))
        assert not nfa.accepts((letter("a", "a"), letter("a", "")))

    def test_not_safe(self):
        with pytest.raises(NotSafe):
            safety_nfa(Finally(a0), ("a",), 1)

    def test_unsatisfiable(self):
        nfa = safety_nfa(And(a0, Not(a0)), ("a",), 1)
        assert nfa.num_states == 1
        assert not nfa.accepts((letter("a"),))

    def test_atom_outside_arity(self):
        with pytest.raises(ValueError):
            safety_nfa(a1, ("a",), 1)


class TestBadPrefixDfa:
    def test_run_is_d2(self, d2):
        body = And(a0, Globally(Iff(a0, a1)))
        assert isomorphic(minimize(bad_prefix_dfa(body, ("a",), 2)), d2)

    def test_always(self):
        dfa = bad_prefix_dfa(Globally(a0), ("a",), 1)
        assert dfa.num_states - len(dfa.accepting) == 1
        assert minimize(dfa).num_states == 2
        for w in words(("a",), 1, 4):
            assert dfa.accepts(w) == any(not ltr[0] for ltr in w)

    def test_true(self):
        assert shortest_accepted(bad_prefix_dfa(TRUE, ("a",), 1)) is None

    def test_false(self):
        assert bad_prefix_dfa(FALSE, ("a",), 1).accepts(())

    def test_not_safe(self):
        with pytest.raises(NotSafe):
            bad_prefix_dfa(Until(a0, a0), ("a",), 1)

    @settings(max_examples=60, deadline=None)
    @given(formulas([a0, a1], safe=True, depth=4))
    def test_lasso_oracle(self, f):
        dfa = bad_prefix_dfa(f, ("a",), 2)
        oracle = LassoOracle(f, ("a",), 2, max(1, dfa.num_states))
        for w in words(("a",), 2, 3):
            bad = dfa.accepts(w)
            assert bad == oracle.is_bad(w)
            if bad:
                assert all(dfa.accepts(w + (ltr,)) for ltr in letters(("a",), 2))
        assert language_equal(tighten(dfa), dfa)


def test_const_printing():
    assert str(Const(True)) == "true"
    assert parse_ltl("true & !false") == And(TRUE, Not(FALSE))
