"""Bad-prefix automata for regular k-safety hyperproperties, with an active learner."""

from .automata import (
    Alphabet,
    Dfa,
    Nfa,
    absorb_accepting,
    canonical,
    complement,
    determinize,
    isomorphic,
    language_equal,
    language_subset,
    live_states,
    minimize,
    product,
    shortest_accepted,
)
from .constructions import is_permutation_complete, permutation_complete, permuted_projection, prefix_projection, tighten
from .equiv import CoveringVerdict, Violation, covering_check, representation_equivalent
from .hyperltl import (
    AutomatonTeacher,
    Counterexample,
    HyperFormula,
    HyperLtlTeacher,
    assignment_closure,
    is_universally_safe,
    parse_hyper,
    substitute,
)
from .learner import LearnReport, ObservationTable, learn
from .ltl import bad_prefix_dfa, is_syntactically_safe, parse_ltl, safety_nfa, to_nnf
from .representation import (
    TraceSet,
    all_representations,
    canonical_representation,
    extend_word,
    lift_automaton,
    permute_word,
    permuted_copy,
    unzip,
)

__all__ = [name for name in dir() if not name.startswith("_")]
