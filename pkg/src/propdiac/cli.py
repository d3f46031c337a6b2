"""Command-line interface: ``propdiac <subcommand> [options]``.

Input files are UTF-8 TSV with optional '#' comment lines.  Reports go to
--out when given and to stdout otherwise; evaluate and bench write their
results file to --out and always print the summary to stdout.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager, nullcontext

from . import __version__
from .analysis import bin_analysis, format_bin_report
from .bench import (
    ConfigurationError,
    HttpChatClient,
    PromptConfig,
    RecordingClient,
    ReplayClient,
    load_examples,
    read_results,
    run_benchmark,
    write_results,
)
from .dataset import attach_frequencies, load_entries, summarize
from .evaluate import DEFAULT_SUBSTITUTION_PAIRS, score, summarize_records
from .lemma import check_integrity
from .normalize import normalize
from .script import ScriptError, from_hsb, parse_arabic, render, to_hsb
from .similarity import EmptyGloss, freeman_similarity
from .validation import format_report, validate

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rows(path: str | None) -> list[list[str]]:
    src = nullcontext(sys.stdin) if path in (None, "-") else open(path, encoding="utf-8")
    with src as f:
        return [
            line.rstrip("\r\n").split("\t")
            for line in f
            if line.strip() and not line.startswith("#")
        ]


@contextmanager
def _output(path: str | None):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _words(rows: list[list[str]], header: str) -> list[list[str]]:
    """Drop a leading header row whose first cell is ``header``."""
    if rows and rows[0][0].strip().lower() == header:
        return rows[1:]
    return rows


def cmd_validate(args) -> int:
    findings = 0
    with _output(args.out) as out:
        for row in _words(_rows(args.inp), "lemma"):
            text = row[0].strip()
            skeleton = row[1].strip() if len(row) > 1 and row[1].strip() else None
            try:
                violations = validate(parse_arabic(text), args.profile, skeleton)
            except ScriptError as exc:
                out.write(f"{text}\tparse\t{exc.position}\t{exc}\n")
                findings += 1
                continue
            findings += len(violations)
            for line in format_report(violations).splitlines():
                out.write(f"{text}\t{line}\n")
    return EXIT_FINDINGS if args.gate and findings else EXIT_OK


def cmd_normalize(args) -> int:
    with _output(args.out) as out:
        for row in _words(_rows(args.inp), "word"):
            fixed, trace = normalize(parse_arabic(row[0].strip()))
            out.write(f"{render(fixed)}\t{trace}\n")
    return EXIT_OK


def cmd_hsb(args) -> int:
    items = args.words or [r[0].strip() for r in _rows(args.inp)]
    convert = (lambda w: to_hsb(parse_arabic(w))) if args.direction == "to" else (lambda w: render(from_hsb(w)))
    with _output(args.out) as out:
        for w in items:
            out.write(convert(w) + "\n")
    return EXIT_OK


def cmd_check_lemma(args) -> int:
    bad = 0
    with _output(args.out) as out:
        for row in _words(_rows(args.inp), "input"):
            if len(row) < 2:
                raise UsageError("check-lemma expects input<TAB>lemma rows")
            report = check_integrity(row[0].strip(), parse_arabic(row[1].strip()))
            bad += not report.ok
            detail = "+".join(report.labels) if report.ok else f"mismatch@{report.diff}"
            out.write(f"{row[0].strip()}\t{row[1].strip()}\t{'ok' if report.ok else 'fail'}\t{detail}\n")
    return EXIT_FINDINGS if args.gate and bad else EXIT_OK


def _load(args):
    columns = dict(kv.split("=", 1) for kv in args.column or [])
    entries = load_entries(args.inp, columns)
    if args.freq:
        entries = attach_frequencies(entries, args.freq)
    return entries


def cmd_stats(args) -> int:
    stats = summarize(_load(args))
    with _output(args.out) as out:
        for k, v in stats.as_rows():
            out.write(f"{k}\t{v}\n")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    """Score a predictions TSV (id, prediction, gold_lemma[, arabic_input, gloss, frequency])."""
    rows = _rows(args.inp)
    header, body = rows[0], rows[1:]
    for col in ("prediction", "gold_lemma"):
        if col not in header:
            raise UsageError(f"evaluate input needs a {col!r} column")
    col = {name: i for i, name in enumerate(header)}
    records = []
    for k, row in enumerate(body):
        get = lambda c: row[col[c]].strip() if c in col and col[c] < len(row) else ""
        freeman = None
        if get("arabic_input") and get("gloss"):
            try:
                freeman = freeman_similarity(get("arabic_input"), get("gloss"))
            except EmptyGloss:
                pass
        freq = get("frequency")
        pred = parse_arabic(get("prediction"))
        fixed, trace = normalize(pred)
        records.append(
            score(
                get("id") or str(k + 1),
                fixed,
                get("gold_lemma"),
                freeman=freeman,
                frequency=int(freq) if freq else 0,
                raw=get("prediction"),
                trace=trace,
                pairs=DEFAULT_SUBSTITUTION_PAIRS,
            )
        )
    if args.out:
        write_results(records, args.out)
    print(json.dumps(summarize_records(records), ensure_ascii=False, indent=2, sort_keys=True))
    return EXIT_OK


def _parse_bins(text: str):
    if text == "quartiles":
        return text
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--bins must be 'quartiles' or comma-separated edges, got {text!r}") from None


def cmd_analyze(args) -> int:
    analysis = bin_analysis(read_results(args.inp), args.key, _parse_bins(args.bins))
    with _output(args.out) as out:
        out.write(format_bin_report(analysis))
    return EXIT_OK


def _bench_config(args) -> PromptConfig:
    if args.config:
        if args.shots or args.format:
            raise UsageError("--config cannot be combined with --shots/--format")
        shots, _, fmt = args.config.partition("_")
    else:
        shots = args.shots or "few"
        fmt = {"arabic+gloss": "gloss", "arabic-only": "arabic"}[args.format or "arabic+gloss"]
    kw = {"batch_size": args.batch_size}
    if args.examples:
        kw["examples"] = tuple(load_examples(args.examples))
    return PromptConfig.named(f"{shots}_{fmt}", **kw)


def cmd_bench(args) -> int:
    config = _bench_config(args)
    entries = _load(args)
    if args.replay:
        client = ReplayClient(args.replay)
    else:
        if not (args.endpoint and args.model):
            raise UsageError("bench needs --replay, or --endpoint and --model for a live run")
        client = HttpChatClient(args.endpoint, args.model)
        if args.record:
            client = RecordingClient(client, args.record)
    result = run_benchmark(entries, client, config, workers=args.workers)
    if args.out:
        write_results(result.records, args.out)
    print(json.dumps(result.summary, ensure_ascii=False, indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="propdiac", description="Diacritized Arabic proper-noun lemma toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help, inp=True):
        sp = sub.add_parser(name, help=help, description=help)
        if inp:
            sp.add_argument("--in", dest="inp", metavar="PATH", help="input file ('-' for stdin)")
        sp.add_argument("--out", metavar="PATH", help="output file (default stdout)")
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "report rule violations, one per line")
    sp.add_argument("--profile", choices=["lemma", "surface"], default="lemma")
    sp.add_argument("--gate", action="store_true", help="exit 1 when any violation is found")

    add("normalize", cmd_normalize, "repair malformed words; prints word<TAB>repair trace")

    sp = add("hsb", cmd_hsb, "convert between Arabic script and romanization")
    sp.add_argument("direction", choices=["to", "from"])
    sp.add_argument("words", nargs="*")

    sp = add("check-lemma", cmd_check_lemma, "check lemma letters against the undiacritized input")
    sp.add_argument("--gate", action="store_true", help="exit 1 when any pair fails")

    def dataset_flags(sp):
        sp.add_argument("--freq", metavar="PATH", help="word<TAB>count frequency table")
        sp.add_argument("--column", action="append", metavar="NAME=HEADER", help="map a column to a header name")

    dataset_flags(add("stats", cmd_stats, "corpus statistics for a dataset TSV"))
    add("evaluate", cmd_evaluate, "score a predictions TSV against gold lemmas")

    sp = add("analyze", cmd_analyze, "binned accuracy over a results file")
    sp.add_argument("--key", choices=["freeman", "frequency"], default="freeman")
    sp.add_argument("--bins", default="quartiles", help="'quartiles' or comma-separated edges")

    sp = add("bench", cmd_bench, "prompt a model over a dataset and score it")
    dataset_flags(sp)
    sp.add_argument("--config", help="short name such as few_gloss or zero_arabic")
    sp.add_argument("--shots", choices=["zero", "one", "few"])
    sp.add_argument("--format", choices=["arabic+gloss", "arabic-only"])
    sp.add_argument("--examples", metavar="PATH", help="few-shot pool TSV")
    sp.add_argument("--batch-size", type=int, default=1)
    sp.add_argument("--workers", type=int, default=4)
    sp.add_argument("--replay", metavar="PATH", help="answer from a recorded run")
    sp.add_argument("--record", metavar="PATH", help="append live responses to a replay file")
    sp.add_argument("--endpoint")
    sp.add_argument("--model")
    return p


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ConfigurationError) as exc:
        parser.print_usage(sys.stderr)
        print(f"propdiac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:  # bad data files, including DatasetError/ScriptError
        print(f"propdiac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
