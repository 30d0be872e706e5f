"""Text formats for automata and trace sets, and DOT export."""

from __future__ import annotations

import re
from collections import defaultdict

from .automata import AP_NAME, Alphabet, Dfa
from .errors import ParseError, RaggedTraces
from .representation import TraceSet, format_trace

GROUP = re.compile(r"\{([^{}]*)\}")
LETTER = re.compile(r"\(\s*((?:\{[^{}]*\}\s*,?\s*)*)\)")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_subset(body: str, lineno: int, column: int) -> frozenset:
    names = [n.strip() for n in body.split(",") if n.strip()]
    for n in names:
        if not AP_NAME.match(n):
            raise ParseError(f"invalid proposition name {n!r}", lineno, column, ["proposition name"])
    return frozenset(names)


def parse_letter(text: str, lineno: int = 1, column: int = 1) -> tuple:
    """Parse ``({a},{})`` into a tuple of AP sets."""
    m = LETTER.fullmatch(text.strip())
    if m is None:
        raise ParseError(f"malformed letter {text!r}", lineno, column, ["(", "{"])
    return tuple(_parse_subset(g.group(1), lineno, column) for g in GROUP.finditer(m.group(1)))


def read_automaton(text: str) -> Dfa:
    header: dict[str, tuple[int, list[str]]] = {}
    transitions = []
    saw_magic = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if not saw_magic:
            if line.split() != ["bpa", "1"]:
                raise ParseError("automaton files start with 'bpa 1'", lineno, 1, ["bpa 1"])
            saw_magic = True
            continue
        if keyword == "trans":
            m = re.fullmatch(r"(\d+)\s+(\(.*\))\s+(\d+)", rest)
            if m is None:
                raise ParseError("expected 'trans SOURCE (LETTER) TARGET'", lineno, 1, ["trans"])
            transitions.append((lineno, int(m.group(1)), parse_letter(m.group(2), lineno), int(m.group(3))))
        elif keyword in ("aps", "arity", "states", "initial", "accepting"):
            if keyword in header:
                raise ParseError(f"duplicate '{keyword}' line", lineno, 1)
            header[keyword] = (lineno, rest.split())
        else:
            raise ParseError(f"unknown directive {keyword!r}", lineno, 1, ["aps", "arity", "states", "initial", "accepting", "trans"])
    if not saw_magic:
        raise ParseError("empty automaton file", 1, 1, ["bpa 1"])
    for key in ("aps", "arity", "states", "initial"):
        if key not in header:
            raise ParseError(f"missing '{key}' line", 1, 1, [key])

    def number(key: str, value: str) -> int:
        if not value.isdigit():
            raise ParseError(f"'{key}' expects a number, got {value!r}", header[key][0], 1, ["number"])
        return int(value)

    aps = tuple(header["aps"][1])
    arity = number("arity", "".join(header["arity"][1]))
    try:
        alphabet = Alphabet(aps, arity)
    except ValueError as exc:
        raise ParseError(str(exc), header["aps"][0], 1) from None
    n = number("states", "".join(header["states"][1]))
    initial = number("initial", "".join(header["initial"][1]))
    accepting = [number("accepting", v) for v in header.get("accepting", (0, []))[1]]
    for q in accepting + [initial]:
        if not 0 <= q < n:
            raise ParseError(f"state {q} out of range 0..{n - 1}", header["states"][0], 1)
    delta: list[list[int | None]] = [[None] * alphabet.size for _ in range(n)]
    for lineno, src, letter, dst in transitions:
        if not (0 <= src < n and 0 <= dst < n):
            raise ParseError(f"transition state out of range 0..{n - 1}", lineno, 1)
        try:
            code = alphabet.code(letter)
        except ValueError as exc:
            raise ParseError(str(exc), lineno, 1) from None
        if delta[src][code] not in (None, dst):
            raise ParseError(f"state {src} has two successors on {alphabet.format_letter(code)}", lineno, 1)
        delta[src][code] = dst
    if any(t is None for row in delta for t in row):
        dead = n
        delta = [[dead if t is None else t for t in row] for row in delta]
        delta.append([dead] * alphabet.size)
    return Dfa(alphabet, delta, initial, accepting)


def write_automaton(dfa: Dfa) -> str:
    alphabet = dfa.alphabet
    lines = [
        "bpa 1",
        "aps " + " ".join(alphabet.aps),
        f"arity {alphabet.arity}",
        f"states {dfa.num_states}",
        f"initial {dfa.initial}",
        "accepting " + " ".join(str(q) for q in sorted(dfa.accepting)),
    ]
    for q, row in enumerate(dfa.delta):
        for code, t in enumerate(row):
            lines.append(f"trans {q} {alphabet.format_letter(code)} {t}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def to_dot(dfa: Dfa, name: str = "bpa") -> str:
    """Graphviz rendering with one edge per state pair, labelled by its letters."""
    alphabet = dfa.alphabet
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  init [shape=point];']
    for q in range(dfa.num_states):
        shape = "doublecircle" if q in dfa.accepting else "circle"
        lines.append(f'  q{q} [shape={shape}, label="q{q}"];')
    lines.append(f"  init -> q{dfa.initial};")
    for q, row in enumerate(dfa.delta):
        grouped = defaultdict(list)
        for code, t in enumerate(row):
            grouped[t].append(alphabet.format_letter(code))
        for t in sorted(grouped):
            label = "\\n".join(grouped[t])
            lines.append(f'  q{q} -> q{t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_trace(text: str, lineno: int = 1) -> tuple:
    body = text.strip()
    if body in ("", "ε", "eps"):
        return ()
    pos = 0
    letters = []
    for m in GROUP.finditer(body):
        if body[pos : m.start()].strip():
            raise ParseError(f"unexpected text {body[pos:m.start()]!r} in trace", lineno, pos + 1, ["{"])
        letters.append(_parse_subset(m.group(1), lineno, m.start() + 1))
        pos = m.end()
    if body[pos:].strip():
        raise ParseError(f"unexpected text {body[pos:]!r} in trace", lineno, pos + 1, ["{"])
    return tuple(letters)


def read_traces(text: str, aps=None) -> TraceSet:
    """One trace per line such as ``{a}{}``; all traces must have the same length."""
    traces = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if line:
            traces.append((lineno, parse_trace(line, lineno)))
    lengths = {len(t) for _, t in traces}
    if len(lengths) > 1:
        first = traces[0][1]
        bad = next(lineno for lineno, t in traces if len(t) != len(first))
        raise RaggedTraces(f"trace on line {bad} has a different length from the first trace")
    if aps is not None:
        for lineno, t in traces:
            unknown = set().union(*t) - set(aps) if t else set()
            if unknown:
                raise ParseError(f"propositions {sorted(unknown)} are not among {list(aps)}", lineno, 1)
    return TraceSet(frozenset(t for _, t in traces), aps)


def write_traces(t: TraceSet, aps) -> str:
    return "".join(format_trace(trace, aps) + "\n" for trace in t.sorted(aps))
