from pathlib import Path

import pytest

from hyperbpa.formats import read_automaton
from hyperbpa.hyperltl import HyperLtlTeacher, parse_hyper

FIXTURES = Path(__file__).parent / "fixtures"

PHI_RUN = "forall p. forall q. a[p] & G (a[p] <-> a[q])"
PHI_INTRO = "forall p. forall q. G (a[p] -> a[q])"
NONINTERFERENCE = "forall p. forall q. (!(i[p] <-> i[q])) R (o[p] <-> o[q])"


def load(name):
    return read_automaton((FIXTURES / name).read_text())


@pytest.fixture(scope="session")
def d1():
    return load("d1.bpa")


@pytest.fixture(scope="session")
def d2():
    return load("d2.bpa")


@pytest.fixture(scope="session")
def asym():
    return load("asym.bpa")


@pytest.fixture
def run_teacher():
    return HyperLtlTeacher(parse_hyper(PHI_RUN))


@pytest.fixture
def intro_teacher():
    return HyperLtlTeacher(parse_hyper(PHI_INTRO))


def letter(*components):
    """Shorthand: letter("a", "") is the product letter ({a},{})."""
    return tuple(frozenset(c.split(",")) if c else frozenset() for c in components)


def word(*letters):
    return tuple(letters)
