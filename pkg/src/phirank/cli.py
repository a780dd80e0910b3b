"""Command-line front end: automata, syntactic monoids and phi-type analyses.

Exit codes: 0 success, 1 analysis failure (e.g. an unseparated pair),
2 usage or parse error, 3 automaton/monoid resource limit, 4 resource limit
while probing phi-types.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import algebra, automata, phitypes
from .core import Alphabet, format_word, is_star_free_syntax, parse_regex, parse_word, print_regex
from .corpus import corpus
from .errors import PhirankError, ResourceLimitError, UnseparatedPairError
from .oracles import BUILTIN, get_oracle

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_AUTOMATA_LIMIT, EXIT_PHI_LIMIT = 0, 1, 2, 3, 4

# commands whose resource limits are reported as phi-type probing limits
_PHI_COMMANDS = {"analyze", "theta-classes", "certificate", "two-type-check"}

MAX_TREE_DEPTH = 5
MAX_TREE_BRANCHING = 5


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    alphabet: Optional[str]
    regex: Optional[str]
    dfa_path: Optional[str]
    oracle: Optional[str]
    max_len: int = 6
    output_format: str = "json"
    state_limit: int = automata.DEFAULT_STATE_LIMIT
    monoid_limit: int = algebra.DEFAULT_MONOID_LIMIT

    def __post_init__(self):
        sources = [s for s in (self.regex, self.dfa_path, self.oracle) if s is not None]
        if len(sources) != 1:
            raise UsageError("give exactly one of a regex, --dfa or --oracle")
        if self.max_len < 0:
            raise UsageError("--max-len must be non-negative")

    def get_alphabet(self) -> Alphabet:
        if self.alphabet is None:
            raise UsageError("--alphabet is required with a regex")
        try:
            return Alphabet(self.alphabet)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def load_dfa(self) -> automata.Dfa:
        if self.oracle is not None:
            raise UsageError("this command needs a regex or --dfa, not an oracle")
        if self.dfa_path is not None:
            with open(self.dfa_path) as fh:
                d = automata.Dfa.from_json(json.load(fh))
            if self.alphabet is not None and Alphabet(self.alphabet) != d.alphabet:
                raise UsageError(f"--alphabet {self.alphabet} does not match the Dfa's alphabet {d.alphabet}")
            return d
        alphabet = self.get_alphabet()
        return automata.compile(parse_regex(self.regex, alphabet), alphabet, self.state_limit)

    def load_handle(self) -> phitypes.LanguageHandle:
        if self.oracle is None:
            return phitypes.LanguageHandle.from_dfa(self.load_dfa())
        try:
            oracle = get_oracle(self.oracle)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        if self.alphabet is not None and Alphabet(self.alphabet) != oracle.alphabet:
            raise UsageError(f"oracle {oracle.name} is defined over {oracle.alphabet}, not {self.alphabet}")
        return phitypes.LanguageHandle.from_oracle(oracle)


def _config(args, oracle_default=None) -> CliConfig:
    regex = getattr(args, "regex", None)
    expr = getattr(args, "expr", None)
    if regex is not None and expr is not None:
        raise UsageError("give the regex either positionally or with --regex, not both")
    if regex is None:
        regex = expr
    oracle = getattr(args, "oracle", None)
    dfa = getattr(args, "dfa", None)
    if regex is None and dfa is None and oracle is None:
        oracle = oracle_default
    return CliConfig(
        alphabet=args.alphabet,
        regex=regex,
        dfa_path=dfa,
        oracle=oracle,
        max_len=getattr(args, "max_len", 6),
        output_format=args.format,
        state_limit=args.state_limit,
        monoid_limit=args.monoid_limit,
    )


def _emit(obj, fmt, out):
    if fmt == "text":
        for key in sorted(obj):
            out.write(f"{key}: {json.dumps(obj[key], sort_keys=True)}\n")
    elif fmt == "dot":
        raise UsageError("DOT output is only available for automata")
    else:
        out.write(json.dumps(obj, sort_keys=True) + "\n")


def _emit_dfa(d: automata.Dfa, fmt, out):
    if fmt == "dot":
        out.write(d.to_dot())
    elif fmt == "text":
        out.write(f"alphabet: {d.alphabet}\nstates: {d.state_count}\nstart: {d.start}\n")
        out.write(f"accept: {' '.join(map(str, sorted(d.accept))) or '-'}\n")
        for q, row in enumerate(d.delta):
            moves = " ".join(f"{s}->{t}" for s, t in zip(d.alphabet, row))
            out.write(f"  {q}: {moves}\n")
    else:
        out.write(automata.dumps(d) + "\n")


# -- commands -----------------------------------------------------------------


def cmd_compile(args, out):
    cfg = _config(args)
    _emit_dfa(cfg.load_dfa(), cfg.output_format, out)


def cmd_minimize(args, out):
    cfg = _config(args)
    _emit_dfa(automata.minimize(cfg.load_dfa()), cfg.output_format, out)


def _as_dfa(source, args):
    if source.startswith("@"):
        ns = argparse.Namespace(**{**vars(args), "regex": None, "expr": None, "dfa": source[1:]})
    else:
        ns = argparse.Namespace(**{**vars(args), "regex": source, "expr": None, "dfa": None})
    return _config(ns).load_dfa()


def cmd_equivalent(args, out):
    sources = list(args.exprs) + ["@" + p for p in (args.dfa or [])]
    if len(sources) != 2:
        raise UsageError("equivalent needs exactly two inputs (regexes and/or --dfa paths)")
    d1, d2 = (_as_dfa(s, args) for s in sources)
    w = automata.counterexample(d1, d2)
    _emit({"equivalent": w is None, "counterexample": None if w is None else format_word(w)}, args.format, out)


def cmd_run(args, out):
    cfg = _config(args)
    handle = cfg.load_handle()
    results = []
    for text in args.words:
        w = parse_word(text, handle.alphabet)
        results.append({"word": format_word(w), "accepted": w in handle})
    _emit({"results": results}, cfg.output_format, out)


def cmd_analyze(args, out):
    cfg = _config(args)
    handle = cfg.load_handle()
    report = phitypes.rank_report(handle, cfg.max_len, monoid_limit=cfg.monoid_limit)
    obj = report.to_json()
    if report.witness is not None:
        obj["certificate"]["verified"] = report.witness.verify(handle)
    _emit(obj, cfg.output_format, out)


def cmd_starfree(args, out):
    cfg = _config(args)
    d = cfg.load_dfa()
    m = algebra.transition_monoid(d, cfg.monoid_limit)
    x = algebra.aperiodicity_witness(m.monoid)
    obj = {"star_free": x is None, "monoid_size": m.size}
    if cfg.regex is not None:
        obj["star_free_syntax"] = is_star_free_syntax(parse_regex(cfg.regex, d.alphabet))
    if x is not None:
        obj["witness"] = format_word(m.representative_words[x])
        obj["witness_element"] = x
    _emit(obj, cfg.output_format, out)


def cmd_monoid(args, out):
    cfg = _config(args)
    m = algebra.transition_monoid(cfg.load_dfa(), cfg.monoid_limit)
    obj = m.to_json()
    obj["aperiodic"] = algebra.is_aperiodic(m.monoid)
    _emit(obj, cfg.output_format, out)


def cmd_theta_classes(args, out):
    cfg = _config(args)
    _emit(phitypes.theta_classes(cfg.load_handle(), cfg.max_len).to_json(), cfg.output_format, out)


def cmd_certificate(args, out):
    cfg = _config(args)
    handle = cfg.load_handle()
    members = [parse_word(w, handle.alphabet) for w in args.members]
    cert = phitypes.separation_certificate(handle, members, cfg.max_len)
    obj = cert.to_json()
    obj["verified"] = cert.verify(handle)
    _emit(obj, cfg.output_format, out)


def cmd_witness_tree(args, out):
    if not 1 <= args.depth <= MAX_TREE_DEPTH or not 2 <= args.branch <= MAX_TREE_BRANCHING:
        raise UsageError(
            f"--depth must be in 1..{MAX_TREE_DEPTH} and --branch in 2..{MAX_TREE_BRANCHING}"
        )
    tree = phitypes.witness_tree(args.depth, args.branch)
    obj = tree.to_json()
    obj["verified"] = not phitypes.verify_witness_tree(tree)
    _emit(obj, args.format, out)


def cmd_two_type_check(args, out):
    if args.max_len < 4:
        raise UsageError("two-type-check needs --max-len >= 4")
    cfg = _config(args, oracle_default="triple")
    res = phitypes.two_type_bound(cfg.max_len, cfg.load_handle())
    obj = {
        "ok": res.ok,
        "violation": None if res.violation is None else format_word(res.violation),
        "max_types": res.max_types,
        "parameters_checked": res.parameters_checked,
        "max_len": cfg.max_len,
    }
    _emit(obj, cfg.output_format, out)


def cmd_corpus(args, out):
    for alphabet, e in corpus(args.seed, args.count, args.depth, star=not args.star_free):
        out.write(f"{alphabet}\t{print_regex(e)}\n")


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", help="alphabet symbols, e.g. 01")
    common.add_argument("--format", choices=["json", "dot", "text"], default="json")
    common.add_argument("--state-limit", type=int, default=automata.DEFAULT_STATE_LIMIT)
    common.add_argument("--monoid-limit", type=int, default=algebra.DEFAULT_MONOID_LIMIT)

    def source(p, oracle=True, positional=True):
        if positional:
            p.add_argument("expr", nargs="?", help="extended regular expression")
        p.add_argument("--regex", help="extended regular expression")
        p.add_argument("--dfa", help="path to a Dfa JSON file")
        if oracle:
            p.add_argument("--oracle", choices=sorted(BUILTIN))

    parser = argparse.ArgumentParser(prog="phirank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", parents=[common], help="compile a regex to its minimal Dfa")
    source(p, oracle=False)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("minimize", parents=[common], help="minimize a Dfa")
    source(p, oracle=False)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("equivalent", parents=[common], help="test two languages for equality")
    p.add_argument("exprs", nargs="*", help="regexes")
    p.add_argument("--dfa", action="append", help="path to a Dfa JSON file (repeatable)")
    p.set_defaults(func=cmd_equivalent)

    p = sub.add_parser("run", parents=[common], help="membership of words (_ is the empty word)")
    source(p, positional=False)
    p.add_argument("words", nargs="+")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("analyze", parents=[common], help="rank-zero decision and multiplicities")
    source(p)
    p.add_argument("--max-len", type=int, default=6)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("starfree", parents=[common], help="star-freeness via aperiodicity")
    source(p, oracle=False)
    p.set_defaults(func=cmd_starfree)

    p = sub.add_parser("monoid", parents=[common], help="syntactic monoid")
    source(p, oracle=False)
    p.set_defaults(func=cmd_monoid)

    p = sub.add_parser("theta-classes", parents=[common], help="right-congruence classes")
    source(p)
    p.add_argument("--max-len", type=int, default=6)
    p.set_defaults(func=cmd_theta_classes)

    p = sub.add_parser("certificate", parents=[common], help="separate words by suffixes")
    source(p, positional=False)
    p.add_argument("members", nargs="+")
    p.add_argument("--max-len", type=int, default=6, help="longest suffix to try")
    p.set_defaults(func=cmd_certificate)

    p = sub.add_parser("witness-tree", parents=[common], help="verified psi_sigma tree for dcfl_seq")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--branch", "--branching", dest="branch", type=int, default=2)
    p.set_defaults(func=cmd_witness_tree)

    p = sub.add_parser("two-type-check", parents=[common], help="two-type bound for the triple language")
    p.add_argument("--oracle", choices=sorted(BUILTIN))
    p.add_argument("--max-len", type=int, default=6)
    p.set_defaults(func=cmd_two_type_check)

    p = sub.add_parser("corpus", parents=[common], help="print a seeded random regex corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--star-free", action="store_true", help="no Star nodes")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except (UsageError, ValueError, OSError) as exc:
        err.write(f"phirank: error: {exc}\n")
        return EXIT_USAGE
    except ResourceLimitError as exc:
        err.write(f"phirank: resource limit: {exc}\n")
        return EXIT_PHI_LIMIT if args.command in _PHI_COMMANDS else EXIT_AUTOMATA_LIMIT
    except UnseparatedPairError as exc:
        err.write(f"phirank: {exc}\n")
        return EXIT_FAIL
    except PhirankError as exc:
        err.write(f"phirank: {exc}\n")
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
