"""Command-line interface: ``hyperbpa <command> ...``.

Exit codes: 0 for success or an affirmative verdict, 1 for a negative
verdict, 2 for usage, input or classification errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .automata import minimize
from .constructions import is_permutation_complete, permutation_complete, tighten
from .equiv import representation_equivalent
from .errors import BudgetExceeded, HyperBpaError
from .formats import read_automaton, read_traces, to_dot, write_automaton, write_traces
from .hyperltl import HyperLtlTeacher, assignment_closure, is_universally_safe, parse_hyper
from .learner import learn
from .ltl import bad_prefix_dfa


class CommandError(Exception):
    """An input problem reported on stderr with exit code 2."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _formula(path: str):
    f = parse_hyper(_read(path))
    if not is_universally_safe(f):
        raise CommandError(f"{path}: not universally-safe")
    return f


def _emit_automaton(args, dfa):
    _write(args.output, write_automaton(dfa))
    if getattr(args, "dot", None):
        _write(args.dot, to_dot(dfa))


def cmd_compile(args) -> int:
    f = _formula(args.formula)
    arity = args.arity if args.arity is not None else f.arity
    if arity < 1:
        raise CommandError("--arity must be at least 1")
    aps = f.props()
    dfa = minimize(tighten(bad_prefix_dfa(assignment_closure(f, arity), aps, arity)))
    _emit_automaton(args, dfa)
    print(f"states {dfa.num_states} arity {arity}", file=sys.stderr if args.output is None else sys.stdout)
    return 0


def cmd_member(args) -> int:
    f = _formula(args.formula)
    teacher = HyperLtlTeacher(f)
    traces = read_traces(_read(args.traces), teacher.aps)
    bad = teacher.member(traces)
    print("bad-prefix" if bad else "not-a-bad-prefix")
    return 0 if bad else 1


def cmd_equiv(args) -> int:
    a = read_automaton(_read(args.first))
    b = read_automaton(_read(args.second))
    violation = representation_equivalent(a, b)
    if violation is None:
        print("equivalent")
        return 0
    which = (args.first, args.second)[violation.side]
    print(f"not-equivalent direction {violation.direction}: bad prefix represented only by {which}")
    _write(args.output, write_traces(violation.traces, a.alphabet.aps))
    return 1


def _transform(fn):
    def command(args) -> int:
        dfa = fn(read_automaton(_read(args.automaton)))
        _emit_automaton(args, dfa)
        return 0

    return command


cmd_tighten = _transform(tighten)
cmd_permclose = _transform(lambda a: minimize(permutation_complete(a)))
cmd_min = _transform(minimize)


def cmd_check_complete(args) -> int:
    dfa = read_automaton(_read(args.automaton))
    witness = is_permutation_complete(dfa)
    if witness is None:
        print("permutation-complete")
        return 0
    print("not-permutation-complete")
    print("witness " + " ".join(dfa.alphabet.format_letter(c) for c in dfa.alphabet.encode(witness)))
    return 1


def cmd_classify(args) -> int:
    f = parse_hyper(_read(args.formula))
    safe = is_universally_safe(f)
    print("universally-safe" if safe else "not-universally-safe")
    print(f"quantifiers {f.arity}")
    return 0 if safe else 1


def cmd_learn(args) -> int:
    teacher = HyperLtlTeacher(_formula(args.formula))
    try:
        report = learn(teacher, max_rounds=args.max_rounds, max_arity=args.max_arity)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.stats and exc.report is not None:
            _write(args.stats, _stats_text(exc.report.stats()))
        return 2
    _emit_automaton(args, report.dfa)
    if args.stats:
        _write(args.stats, _stats_text(report.stats()))
    return 0


def _stats_text(stats: dict) -> str:
    return "".join(f"{k} {v}\n" for k, v in stats.items())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperbpa", description="Bad-prefix automata for k-safety hyperproperties.")
    sub = parser.add_subparsers(dest="command", required=True)

    def outputs(p, dot=True):
        p.add_argument("-o", "--output", help="output automaton file (default: stdout)")
        if dot:
            p.add_argument("--dot", help="also write a Graphviz rendering")

    p = sub.add_parser("compile", help="compile a universally-safe formula to a tight bad-prefix automaton")
    p.add_argument("formula")
    p.add_argument("--arity", type=int, help="closure arity (default: number of quantifiers)")
    outputs(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("member", help="decide whether a trace set is a bad prefix of a formula")
    p.add_argument("formula")
    p.add_argument("traces")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("equiv", help="check two automata for representation-equivalence")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output", help="write the witness trace set here")
    p.set_defaults(func=cmd_equiv)

    for name, func, text in (
        ("tighten", cmd_tighten, "accept as soon as every extension is doomed"),
        ("permclose", cmd_permclose, "close an automaton under component maps"),
        ("min", cmd_min, "minimize an automaton"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("automaton")
        outputs(p)
        p.set_defaults(func=func)

    p = sub.add_parser("check-complete", help="check permutation-completeness")
    p.add_argument("automaton")
    p.set_defaults(func=cmd_check_complete)

    p = sub.add_parser("classify", help="classify a HyperLTL formula")
    p.add_argument("formula")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("learn", help="learn a bad-prefix automaton from a formula teacher")
    p.add_argument("--formula", required=True)
    p.add_argument("--max-arity", type=int)
    p.add_argument("--max-rounds", type=int)
    p.add_argument("--stats", help="write query statistics as 'key value' lines")
    outputs(p)
    p.set_defaults(func=cmd_learn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CommandError, HyperBpaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
