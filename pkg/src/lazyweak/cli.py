"""Command-line front end.

Reports are ``key=value`` lines on stdout.  Exit status 2 means the input was
rejected (bad file, bad word, unsupported feature); ``member`` exits 1 on a
rejected word, ``check`` on an invalid automaton and ``check-equiv`` on any
disagreement.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__, hoa
from .automata import AlternatingAutomaton, LassoWord, check_stratified, validate
from .errors import InputError, RejectingDag
from .games import empty_one_letter, member, run_dag
from .generate import random_automaton, random_lasso, rng_for
from .measures import PeriodicDag, decompose_cobuchi, decompose_parity, odd_cycle
from .translate import (
    TranslationReport,
    buchi_to_weak,
    cobuchi_to_weak,
    parity_to_buchi,
    parity_to_weak_report,
    parity_tree,
)
from .trees import lazify, universal_leaf_count, universal_tree

SEED_ENV = "LAZYWEAK_SEED"


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def load(path: str) -> AlternatingAutomaton:
    return hoa.parse(_read(path))


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV}={raw!r} is not an integer") from None
    if value < 0:
        raise InputError(f"{SEED_ENV} must be a natural number")
    return value


def _seed_arg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be a natural number")
    return value


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


# -- subcommands ---------------------------------------------------------------

def cmd_translate(args) -> int:
    A = load(args.input)
    prune = not args.no_prune
    if args.to == "weak":
        if A.kind == "cobuchi":
            out = cobuchi_to_weak(A, prune=prune)
            report = TranslationReport(A.n, out.n, A.d)
        elif A.kind == "buchi":
            out = buchi_to_weak(A, prune=prune)
            report = TranslationReport(A.n, out.n, A.d)
        elif A.kind == "parity":
            out, report = parity_to_weak_report(A, prune=prune)
        else:
            raise InputError(f"input is already {A.kind}")
    else:
        if A.kind != "parity":
            raise InputError(f"--to buchi expects a parity automaton, got {A.kind}")
        tree = parity_tree(A)
        out = parity_to_buchi(A, tree, prune=prune)
        report = TranslationReport(A.n, out.n, A.d, universal_leaves=universal_leaf_count(A.n, A.d // 2))
    _write(args.output, hoa.emit(out))
    if args.dot:
        _write(args.dot, hoa.to_dot(out))
    if args.stats:
        stream = sys.stdout if args.output not in (None, "-") else sys.stderr
        for line in report.lines():
            print(line, file=stream)
    return 0


def cmd_member(args) -> int:
    A = load(args.input)
    w = LassoWord.parse(args.word)
    accepted = member(A, w)
    print(f"accepted={_bool(accepted)}")
    return 0 if accepted else 1


def cmd_empty(args) -> int:
    A = load(args.input)
    print(f"empty={_bool(empty_one_letter(A))}")
    return 0


def _first_choice(q, i, options):
    return options[0]


def cmd_decompose(args) -> int:
    text = _read(args.input)
    if text.lstrip().startswith("HOA:"):
        if args.word is None:
            raise InputError("decomposing an automaton needs --word")
        A = hoa.parse(text)
        w = LassoWord.parse(args.word)
        G = run_dag(A, w)
        if G is None:
            # no winning strategy exists; any strategy yields a rejecting dag
            G = run_dag(A, w, choose=_first_choice)
    else:
        G = PeriodicDag.parse(text).check()
    if args.dag_out:
        _write(args.dag_out, G.to_text())
    cycle = odd_cycle(G)
    print(f"accepting={_bool(cycle is None)}")
    print(f"width={G.width()}")
    if cycle is not None:
        print("odd_cycle=" + " ".join(map(str, cycle)))
        return 1
    try:
        if args.cobuchi:
            dec = decompose_cobuchi(G)
            print(f"labels_max={max(dec.labels.values(), default=0)}")
            for v in G.vertices:
                print(f"label {v} {dec.labels[v]}")
            return 0
        dec = decompose_parity(G)
    except RejectingDag as exc:
        print("odd_cycle=" + " ".join(map(str, exc.cycle or [])))
        return 1
    print(f"leaves={len(dec.tree.leaves)}")
    print(f"height={dec.tree.height}")
    print(dec.lazy_tree.render(), end="" if dec.lazy_tree.render().endswith("\n") else "\n")
    for v in G.vertices:
        print(f"label {v} <{','.join(map(str, dec.labels[v]))}>")
    return 0


def cmd_universal_tree(args) -> int:
    if args.n < 0 or args.h < 0:
        raise InputError("n and h must be natural numbers")
    T = universal_tree(args.n, args.h)
    print(f"leaves={len(T.leaves)}")
    print(f"nodes={T.size}")
    shown = lazify(T) if args.lazy else T
    if args.dot:
        sys.stdout.write(shown.to_dot())
    else:
        text = shown.render()
        print(text, end="" if text.endswith("\n") else "\n")
    return 0


def cmd_random(args) -> int:
    seed = resolve_seed(args.seed)
    A = random_automaton(args.n, args.d, args.alphabet, seed, kind=args.kind, depth=args.depth)
    _write(args.output, hoa.emit(A))
    return 0


def _agree(job):
    A, B, w = job
    return member(A, w), member(B, w)


def cmd_check_equiv(args) -> int:
    A = load(args.a)
    B = load(args.b)
    if A.alphabet != B.alphabet:
        raise InputError(f"alphabets differ: {A.alphabet} vs {B.alphabet}")
    if args.samples < 0:
        raise InputError("--samples must be nonnegative")
    seed = resolve_seed(args.seed)
    words = [
        random_lasso(rng_for(seed, "check-equiv", k), A.alphabet, args.max_prefix, args.max_period)
        for k in range(args.samples)
    ]
    jobs = [(A, B, w) for w in words]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_agree, jobs))
    else:
        results = [_agree(j) for j in jobs]
    agree = 0
    for w, (a, b) in zip(words, results):
        if a == b:
            agree += 1
        else:
            print(f"disagree word={w} a={_bool(a)} b={_bool(b)}")
    print(f"agreement={agree}/{len(words)}")
    return 0 if agree == len(words) else 1


def cmd_check(args) -> int:
    A = hoa.parse(_read(args.input), validate=False)
    problems = validate(A)
    print(f"valid={_bool(not problems)}")
    print(f"kind={A.kind}")
    print(f"states={A.n}")
    if not problems:
        print(f"stratified={_bool(check_stratified(A))}")
    for p in problems:
        print(f"problem {p}")
    return 0 if not problems else 1


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lazyweak",
        description="Translate alternating parity automata to weak automata and check the results.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="translate an automaton (HOA) to weak or Buchi")
    p.add_argument("input")
    p.add_argument("--to", choices=("weak", "buchi"), default="weak")
    p.add_argument("-o", "--output")
    p.add_argument("--stats", action="store_true", help="print size statistics")
    p.add_argument("--no-prune", action="store_true", help="keep unreachable states")
    p.add_argument("--dot", metavar="FILE", help="also write a DOT rendering")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("member", help="decide membership of a lasso word")
    p.add_argument("input")
    p.add_argument("--word", required=True, help='lasso "u;v" for u.v^omega')
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("empty", help="emptiness over a one-letter alphabet")
    p.add_argument("input")
    p.set_defaults(func=cmd_empty)

    p = sub.add_parser("decompose", help="progress-measure decomposition of a run dag")
    p.add_argument("input", help="HOA automaton (with --word) or periodic dag text")
    p.add_argument("--word")
    p.add_argument("--cobuchi", action="store_true", help="co-Buchi decomposition instead of parity")
    p.add_argument("--dag-out", metavar="FILE", help="write the run dag as text")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("universal-tree", help="show the (n, h)-universal tree")
    p.add_argument("n", type=int)
    p.add_argument("h", type=int)
    p.add_argument("--lazy", action="store_true", help="show the lazified tree")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_universal_tree)

    p = sub.add_parser("random", help="generate a seeded random automaton")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--kind", choices=("parity", "buchi", "cobuchi"), default="parity")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--seed", type=_seed_arg)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("check-equiv", help="compare two automata on random lasso words")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=_seed_arg)
    p.add_argument("--max-prefix", type=int, default=4)
    p.add_argument("--max-period", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_check_equiv)

    p = sub.add_parser("check", help="validate an automaton and report its structure")
    p.add_argument("input")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
