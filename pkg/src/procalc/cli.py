"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 state cap reached,
4 verdict contradicts ``--expect``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .corpus import DEFAULT_ALPHABET, generate_corpus
from .encoding import EncodingError, TripledAlphabet, encode
from .equivalence import Relation, check
from .framework import (
    TRANSLATIONS,
    Report,
    check_compositional,
    check_congruence_sampled,
    check_correct_up_to,
    check_respects,
    check_valid,
    diagnostics,
    hierarchy_harness,
)
from .languages import LANGUAGES, get_language
from .lts import DEFAULT_MAX_STATES, AutFormatError, ProcessGraph, explore, export_aut, export_dot, import_aut
from .separation import separation_fixture
from .syntax import ParseError
from . import csp

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CAP, EXIT_VERDICT = 0, 1, 2, 3, 4

DEFAULTS = {
    "max_states": DEFAULT_MAX_STATES,
    "seed": 0,
    "corpus_seed": 42,
    "corpus_size": 30,
    "depth": 4,
    "relation": Relation.TRACE,
    "format": "text",
    "jobs": 1,
    "samples": 3,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _relation(text: str) -> Relation:
    try:
        return Relation.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


_CONVERTERS = {
    "max_states": _positive,
    "seed": int,
    "corpus_seed": int,
    "corpus_size": _positive,
    "depth": _positive,
    "relation": _relation,
    "format": str,
    "jobs": _positive,
    "samples": _positive,
}


def read_config(path: str) -> dict:
    """``key=value`` lines; ``#`` starts a comment; dashes and underscores are interchangeable."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONVERTERS:
            raise UsageError(f"{path}:{lineno}: unknown setting {key!r}")
        try:
            out[key] = _CONVERTERS[key](value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
    return out


def _setting(args, config: dict, key: str):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return config.get(key, DEFAULTS[key])


def _read_source(args) -> tuple[str, str]:
    if args.term is not None:
        if args.file is not None:
            raise UsageError("give either a file or --term, not both")
        return "<term>", args.term
    if args.file is None or args.file == "-":
        return "<stdin>", sys.stdin.read()
    return args.file, Path(args.file).read_text(encoding="utf-8")


def _load_term(args, lang_name: str):
    lang = get_language(lang_name)
    where, text = _read_source(args)
    try:
        return lang, lang.parse_file(text)
    except ParseError as exc:
        raise _Located(where, exc) from None


class _Located(Exception):
    def __init__(self, where: str, err: Exception):
        super().__init__(f"{where}:{err}")


def _print_graph(g: ProcessGraph, fmt: str, out) -> None:
    if fmt == "aut":
        out.write(export_aut(g))
    elif fmt == "dot":
        out.write(export_dot(g))
    else:
        out.write(f"states {g.num_states}\ntransitions {len(g.transitions)}\ncomplete {str(g.complete).lower()}\n")


# -- subcommands --------------------------------------------------------------------


def cmd_parse(args, config, out) -> int:
    lang, term = _load_term(args, args.lang)
    out.write(lang.show(term) + "\n")
    return EXIT_OK


def cmd_lts(args, config, out) -> int:
    lang, term = _load_term(args, args.lang)
    if not term.closed:
        raise UsageError(f"term has free variables: {', '.join(sorted(term.free_vars))}")
    g = explore(term, lang, _setting(args, config, "max_states"))
    fmt = args.format or config.get("format", "aut")
    if fmt == "text":
        fmt = "summary"
    _print_graph(g, fmt, out)
    if not g.complete:
        print("warning: state cap reached; graph is partial (complete=false)", file=sys.stderr)
        return EXIT_CAP
    return EXIT_OK


def cmd_encode(args, config, out) -> int:
    _, term = _load_term(args, "csp")
    names = args.alphabet.split(",") if args.alphabet else sorted(str(a) for a in csp.actions_of(term))
    try:
        alphabet = TripledAlphabet.of(n.strip() for n in names if n.strip())
        out.write(get_language("ccs").show(encode(term, alphabet)) + "\n")
    except (EncodingError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    return EXIT_OK


def _load_graph(path: str, lang_name: Optional[str], max_states: int) -> ProcessGraph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    if path.endswith(".aut") and lang_name is None:
        try:
            return import_aut(text)
        except AutFormatError as exc:
            raise _Located(path, exc) from None
    if lang_name is None:
        suffix = Path(path).suffix.lstrip(".")
        if suffix not in LANGUAGES:
            raise UsageError(f"cannot tell the language of {path}; pass --lang1/--lang2")
        lang_name = suffix
    lang = get_language(lang_name)
    try:
        term = lang.parse_file(text)
    except ParseError as exc:
        raise _Located(path, exc) from None
    if not term.closed:
        raise UsageError(f"{path}: term has free variables: {', '.join(sorted(term.free_vars))}")
    return explore(term, lang, max_states)


def cmd_equiv(args, config, out) -> int:
    rel = _setting(args, config, "relation")
    max_states = _setting(args, config, "max_states")
    g1 = _load_graph(args.file1, args.lang1 or args.lang, max_states)
    g2 = _load_graph(args.file2, args.lang2 or args.lang, max_states)
    if not (g1.complete and g2.complete):
        print("error: state cap reached before the graphs were complete", file=sys.stderr)
        return EXIT_CAP
    v = check(rel, g1, g2)
    out.write(f"{rel.value}: {'holds' if v.holds else 'fails'}\n")
    if not v.holds and v.evidence is not None:
        out.write(f"evidence: {v.describe_evidence()}\n")
    if args.expect is not None and (args.expect == "holds") != v.holds:
        return EXIT_VERDICT
    return EXIT_OK


def _make_translation(args):
    factory = TRANSLATIONS[args.translation]
    if args.translation == "identity":
        return factory(args.lang or "csp")
    alphabet = args.alphabet.split(",") if args.alphabet else DEFAULT_ALPHABET
    return factory(alphabet)


def _stream(out, fmt):
    if fmt != "text":
        return None

    def emit(r):
        out.write(r.line() + "\n")
        out.flush()

    return emit


def cmd_verify(args, config, out) -> int:
    t = _make_translation(args)
    rel = _setting(args, config, "relation")
    max_states = _setting(args, config, "max_states")
    jobs = _setting(args, config, "jobs")
    fmt = args.format or config.get("format", "text")
    if fmt not in ("text", "summary"):
        raise UsageError("verify supports --format text or summary")
    alphabet = args.alphabet.split(",") if args.alphabet else DEFAULT_ALPHABET
    corpus = generate_corpus(
        t.source,
        _setting(args, config, "corpus_seed"),
        _setting(args, config, "corpus_size"),
        _setting(args, config, "depth"),
        alphabet,
        guarded=not args.unguarded,
    )
    emit = _stream(out, fmt)
    streamed = False
    if args.check == "respects":
        if emit:
            out.write(f"== respects: {t.name} up to {rel.value}\n")
        report = check_respects(t, rel, corpus, max_states, jobs, emit)
        streamed = emit is not None
    elif args.check == "correct":
        if emit:
            out.write(f"== correct: {t.name} up to {rel.value}\n")
        report = check_correct_up_to(t, rel, corpus, _setting(args, config, "samples"),
                                     _setting(args, config, "seed"), max_states=max_states, jobs=jobs,
                                     on_result=emit)
        streamed = emit is not None
    elif args.check == "compositional":
        report = check_compositional(t, 200, _setting(args, config, "seed"))
    elif args.check == "valid":
        report = check_valid(t, rel, corpus, 200, _setting(args, config, "seed"), max_states, jobs)
    elif args.check == "hierarchy":
        coarser = args.coarser or Relation.TRACE
        try:
            report = hierarchy_harness(t, rel, coarser, corpus, max_states, jobs)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        report = diagnostics(t, rel, corpus, 100, _setting(args, config, "seed"), max_states)
    _finish_report(report, fmt, out, streamed, args.timings)
    counts = report.counts()
    if counts["capped"]:
        return EXIT_CAP
    if args.expect is not None and (args.expect == "pass") != report.passed:
        return EXIT_VERDICT
    return EXIT_OK


def _finish_report(report: Report, fmt: str, out, streamed: bool, timings: bool) -> None:
    if fmt == "summary":
        out.write(report.to_json(timings))
        return
    if not streamed:
        out.write(report.render(timings))
        return
    for n in report.notes:
        out.write(f"note: {n}\n")
    out.write(report.footer() + "\n")


def cmd_congruence(args, config, out) -> int:
    rel = _setting(args, config, "relation")
    fmt = args.format or config.get("format", "text")
    report = check_congruence_sampled(
        args.lang or "ccs", rel, args.count, _setting(args, config, "seed"),
        max_states=_setting(args, config, "max_states"), jobs=_setting(args, config, "jobs"),
    )
    _finish_report(report, fmt, out, False, args.timings)
    if args.expect is not None and (args.expect == "pass") != report.passed:
        return EXIT_VERDICT
    return EXIT_OK


def cmd_fixture_separation(args, config, out) -> int:
    report = separation_fixture(_setting(args, config, "max_states"))
    out.write(report.render())
    return EXIT_OK if report.passed else EXIT_VERDICT


def cmd_gen_corpus(args, config, out) -> int:
    lang = get_language(args.lang or "csp")
    alphabet = args.alphabet.split(",") if args.alphabet else DEFAULT_ALPHABET
    corpus = generate_corpus(
        lang,
        _setting(args, config, "corpus_seed"),
        _setting(args, config, "corpus_size"),
        _setting(args, config, "depth"),
        alphabet,
        guarded=not args.unguarded,
    )
    fmt = args.format or config.get("format", "text")
    if fmt == "summary":
        doc = {"seed": corpus.seed, "language": corpus.language, "params": corpus.params,
               "terms": [lang.show(t) for t in corpus]}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        for t in corpus:
            out.write(lang.show(t) + "\n")
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value settings file; flags win")
    common.add_argument("--max-states", type=_positive, help=f"exploration cap (default {DEFAULT_MAX_STATES})")
    common.add_argument("--seed", type=int, help="seed for sampling (default 0)")

    def term_source(p):
        p.add_argument("file", nargs="?", help="input file, '-' for stdin")
        p.add_argument("--term", help="term text instead of a file")

    langs = sorted(LANGUAGES)
    parser = _Parser(prog="procalc", description="CCS/CSP semantics, equivalence checking and translation checks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", parents=[common], help="print a term in canonical form")
    p.add_argument("--lang", choices=langs, required=True)
    term_source(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("lts", parents=[common], help="explore a closed term's process graph")
    p.add_argument("--lang", choices=langs, required=True)
    p.add_argument("--format", choices=("aut", "dot", "summary"))
    term_source(p)
    p.set_defaults(func=cmd_lts)

    p = sub.add_parser("encode", parents=[common], help="translate a CSP term into CCS")
    p.add_argument("--alphabet", help="comma-separated base names (default: names in the term)")
    term_source(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("equiv", parents=[common], help="compare two processes")
    p.add_argument("--relation", type=_relation)
    p.add_argument("--lang", choices=langs, help="language of both inputs")
    p.add_argument("--lang1", choices=langs)
    p.add_argument("--lang2", choices=langs)
    p.add_argument("--expect", choices=("holds", "fails"))
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("verify", parents=[common], help="check a translation on a seeded corpus")
    p.add_argument("--translation", choices=sorted(TRANSLATIONS), default="encode")
    p.add_argument("--check", choices=("respects", "correct", "compositional", "valid", "hierarchy", "diagnostics"),
                   default="respects")
    p.add_argument("--relation", type=_relation)
    p.add_argument("--coarser", type=_relation, help="coarser relation for --check hierarchy (default trace)")
    p.add_argument("--lang", choices=langs, help="language of the identity translation")
    p.add_argument("--alphabet", help="comma-separated base names (default a,b,c)")
    p.add_argument("--corpus-seed", type=int)
    p.add_argument("--corpus-size", type=_positive)
    p.add_argument("--depth", type=_positive)
    p.add_argument("--samples", type=_positive, help="valuations per term for --check correct")
    p.add_argument("--unguarded", action="store_true", help="allow unguarded recursion in the corpus")
    p.add_argument("--jobs", type=_positive, help="worker processes (default 1)")
    p.add_argument("--format", choices=("text", "summary"))
    p.add_argument("--timings", action="store_true", help="include wall-clock times (not deterministic)")
    p.add_argument("--expect", choices=("pass", "fail"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("congruence", parents=[common], help="sample contexts for congruence violations")
    p.add_argument("--lang", choices=langs)
    p.add_argument("--relation", type=_relation)
    p.add_argument("--count", type=_positive, default=500)
    p.add_argument("--jobs", type=_positive)
    p.add_argument("--format", choices=("text", "summary"))
    p.add_argument("--timings", action="store_true")
    p.add_argument("--expect", choices=("pass", "fail"))
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("fixture-separation", parents=[common], help="run the X [|{b,c}|] Y separation fixture")
    p.set_defaults(func=cmd_fixture_separation)

    p = sub.add_parser("gen-corpus", parents=[common], help="print a seeded random corpus")
    p.add_argument("--lang", choices=langs)
    p.add_argument("--alphabet")
    p.add_argument("--corpus-seed", type=int)
    p.add_argument("--corpus-size", type=_positive)
    p.add_argument("--depth", type=_positive)
    p.add_argument("--unguarded", action="store_true")
    p.add_argument("--format", choices=("text", "summary"))
    p.set_defaults(func=cmd_gen_corpus)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    try:
        config = read_config(args.config) if args.config else {}
        return args.func(args, config, out)
    except UsageError as exc:
        print(f"procalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _Located as exc:
        print(f"procalc: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"procalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
