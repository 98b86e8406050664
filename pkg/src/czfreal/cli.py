"""Batch driver for term evaluation, set codes, realizability checks and axiom suites.

Exit codes: 0 when everything is ok or Realized, 1 when anything is Refuted or
invalid, 2 when something is Unknown at the given budget, 3 for usage and
parse errors.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Sequence

from . import axioms, formula as F, treeset as ts
from .pca import OutOfFuel, PcaError
from .programs import library
from .realizability import CheckBudget, Checker, Verdict, default_pca
from .termsyntax import TermSyntaxError, parse_term

EXIT_OK, EXIT_REFUTED, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3

BUILTINS = ("id", "sym", "trans", "memleft", "memright", "eqn", "induction")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2, we want 3
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_budget(p: argparse.ArgumentParser) -> None:
    d = CheckBudget()
    p.add_argument("--fuel", type=int, default=d.fuel, help="PCA steps per application")
    p.add_argument("--hf-rank", type=int, default=d.hf_rank)
    p.add_argument("--hf-width", type=int, default=d.hf_width)
    p.add_argument("--realizer-bound", type=int, default=d.realizer_bound)
    p.add_argument("--bounded", choices=("canonical", "desugar"), default=d.bounded,
                   help="how bounded quantifiers are checked")


def _budget(args: argparse.Namespace) -> CheckBudget:
    return CheckBudget(args.fuel, args.hf_rank, args.hf_width, args.realizer_bound, args.bounded)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="czfreal", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="dump evidence traces")
    # -v is accepted after the subcommand too; SUPPRESS keeps it from resetting the global flag
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="dump evidence traces")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pca-eval", parents=[common], help="apply a term to an argument")
    p.add_argument("term")
    p.add_argument("arg", nargs="?", help="argument term; without it the term is just evaluated")
    p.add_argument("--fuel", type=int, default=CheckBudget().fuel)

    p = sub.add_parser("set", parents=[common], help="validate and transform set-code files")
    p.add_argument("op", choices=("validate", "members", "subtree", "pair", "union",
                                  "omega", "decode", "random"))
    p.add_argument("inputs", nargs="*", help="set-code files (a number for omega)")
    p.add_argument("--prefix", default="", help="comma-separated labels, for subtree")
    p.add_argument("--tagged", action="store_true", help="union with <a, b> labels")
    p.add_argument("--seed", type=int, default=0, help="seed for random")
    p.add_argument("--depth", type=int, default=3, help="depth bound for random")

    p = sub.add_parser("check", parents=[common], help="check e |- phi")
    p.add_argument("--realizer", required=True,
                   help=f"a numeral, one of {', '.join(BUILTINS)}, or a term")
    p.add_argument("--formula", required=True)
    p.add_argument("--env", action="append", default=[], metavar="NAME=FILE")
    _add_budget(p)

    p = sub.add_parser("axiom", parents=[common], help="run an axiom's verification suite")
    p.add_argument("name", choices=axioms.AXIOM_NAMES)
    p.add_argument("--suite-rank", type=int, default=2)
    p.add_argument("--suite-width", type=int, default=2)
    p.add_argument("--phi", help="formula for separation (in x) or collection (in x, y)")
    p.add_argument("--truncation", type=int, default=3, help="for infinity")
    _add_budget(p)

    p = sub.add_parser("enumerate-hf", parents=[common], help="list hereditarily finite sets")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    return parser


def _load(path: str) -> ts.TreeSet:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None
    try:
        return ts.TreeSet(ts.parse_tuples(text))
    except ValueError as err:
        raise UsageError(f"{path}: {err}") from None


def _term_value(text: str, pca, fuel: int) -> int:
    lib = library(pca)
    word = text.strip()
    if word.isdigit():
        return int(word)
    if word in BUILTINS:
        return getattr(lib, word)
    try:
        term = parse_term(text, lib.constants(**{name: getattr(lib, name) for name in BUILTINS}))
    except TermSyntaxError as err:
        raise UsageError(f"bad term {text!r}: {err}") from None
    try:
        return pca.eval(term, fuel)
    except ValueError as err:  # open term
        raise UsageError(str(err)) from None


def _short(n: int) -> str:
    text = str(n)
    return text if len(text) <= 24 else f"{text[:8]}...{text[-8:]} ({n.bit_length()} bits)"


def _verdict_code(verdicts: Sequence[Verdict]) -> int:
    if Verdict.REFUTED in verdicts:
        return EXIT_REFUTED
    if Verdict.UNKNOWN in verdicts:
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_pca_eval(args, out) -> int:
    pca = default_pca()
    try:
        f = _term_value(args.term, pca, args.fuel)
        value = f if args.arg is None else pca.apply(f, _term_value(args.arg, pca, args.fuel),
                                                     args.fuel)
    except OutOfFuel:
        print(f"out of fuel (fuel={args.fuel})", file=out)
        return EXIT_UNKNOWN
    except PcaError as err:
        print(f"error: {err}", file=out)
        return EXIT_REFUTED
    print(value, file=out)
    return EXIT_OK


def cmd_set(args, out) -> int:
    op, inputs = args.op, args.inputs
    if op == "omega":
        if len(inputs) != 1 or not inputs[0].isdigit():
            raise UsageError("set omega takes one natural number")
        out.write(ts.dumps(axioms.omega_set(int(inputs[0]))))
        return EXIT_OK
    if op == "random":
        rng = random.Random(args.seed)
        out.write(ts.dumps(ts.random_tree(rng, max_depth=args.depth)))
        return EXIT_OK
    want = {"pair": 2}.get(op, None)
    if want is not None and len(inputs) != want:
        raise UsageError(f"set {op} takes {want} files")
    if not inputs:
        raise UsageError(f"set {op} needs at least one file")
    if op == "validate":
        bad = 0
        for path in inputs:
            try:
                text = Path(path).read_text() if path != "-" else sys.stdin.read()
                violation = ts.validate(ts.parse_tuples(text))
            except OSError as err:
                raise UsageError(f"cannot read {path}: {err.strerror}") from None
            except ValueError as err:
                violation = ts.Violation(None, str(err))
            print(f"{path}: {'ok' if violation is None else violation}", file=out)
            bad += violation is not None
        return EXIT_REFUTED if bad else EXIT_OK
    codes = [_load(p) for p in inputs]
    if op == "members":
        for path, s in zip(inputs, codes):
            print(f"{path}: {' '.join(map(str, s.members()))}", file=out)
    elif op == "subtree":
        try:
            prefix = [int(x) for x in args.prefix.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"bad prefix {args.prefix!r}") from None
        for s in codes:
            out.write(ts.dumps(ts.subtree(s, prefix)))
    elif op == "pair":
        out.write(ts.dumps(axioms.pair_set(*codes)))
    elif op == "union":
        for s in codes:
            u = axioms.tagged_union_set(s) if args.tagged else axioms.union_set(s)
            out.write(ts.dumps(u))
    elif op == "decode":
        for path, s in zip(inputs, codes):
            print(f"{path}: {ts.format_hf(ts.hf_decode(s))}", file=out)
    return EXIT_OK


def cmd_check(args, out) -> int:
    pca = default_pca()
    budget = _budget(args)
    env = {}
    for binding in args.env:
        name, sep, path = binding.partition("=")
        if not sep or not name:
            raise UsageError(f"bad binding {binding!r}; expected NAME=FILE")
        env[name.lstrip("$")] = _load(path)
    try:
        phi = F.parse(args.formula)
    except F.FormulaSyntaxError as err:
        raise UsageError(f"bad formula: {err}") from None
    missing = sorted(F.params(phi) - set(env))
    if missing:
        raise UsageError(f"unbound parameters: {', '.join('$' + m for m in missing)}")
    try:
        e = _term_value(args.realizer, pca, budget.fuel)
    except OutOfFuel:
        print(f"# {budget.header()}", file=out)
        print("Unknown;fuel;-", file=out)
        return EXIT_UNKNOWN
    except PcaError as err:
        raise UsageError(f"realizer does not evaluate: {err}") from None
    res = Checker(pca, budget).check(e, phi, env)
    print(f"# {budget.header()}", file=out)
    print(res.record(), file=out)
    if args.verbose:
        for line in res.trace:
            print(f"  {line}", file=out)
    return _verdict_code([res.verdict])


def cmd_axiom(args, out) -> int:
    pca = default_pca()
    budget = _budget(args)
    options = {}
    if args.phi is not None:
        if args.name not in ("separation", "strong-collection", "set-induction"):
            raise UsageError(f"--phi does not apply to {args.name}")
        options["phi"] = args.phi
    if args.name == "infinity":
        options["truncation"] = args.truncation
    try:
        pkg = axioms.package(args.name, pca=pca, rank=args.suite_rank,
                             width=args.suite_width, **options)
    except (F.FormulaSyntaxError, axioms.PackageError) as err:
        raise UsageError(str(err)) from None
    print(f"# axiom {args.name} realizer={_short(pkg.realizer)}", file=out)
    print(f"# {budget.header()} suite_rank={args.suite_rank} suite_width={args.suite_width}",
          file=out)
    try:
        report = pkg.verify(budget)
    except axioms.ChooserError as err:
        print(f"abort: {err}", file=out)
        return EXIT_REFUTED
    for i, (inst, res) in enumerate(report.results):
        names = " ".join(f"{k}={ts.format_hf(ts.hf_decode(v))}" for k, v in inst.items())
        print(f"{i}\t{res.record()}\t{names}", file=out)
        if args.verbose:
            for line in res.trace:
                print(f"  {line}", file=out)
    return _verdict_code([res.verdict for _, res in report.results])


def cmd_enumerate(args, out) -> int:
    for h in ts.hf_universe(args.rank, args.width):
        code = ts.hf_encode(h)
        print(f"{ts.format_hf(h)}\t{' '.join(ts.format_tuple(t) for t in code.nodes())}",
              file=out)
    return EXIT_OK


COMMANDS = {"pca-eval": cmd_pca_eval, "set": cmd_set, "check": cmd_check,
            "axiom": cmd_axiom, "enumerate-hf": cmd_enumerate}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as err:
        print(f"czfreal: error: {err}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
