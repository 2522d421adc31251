"""Command-line front end: ``nonblock check | generate | bench``.

Exit codes of ``check``: 0 nonblocking (or prefix-closed), 1 blocking (or not
prefix-closed), 2 usage or input error, 3 search limit exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import generators
from .automata import load_aut, parallel_compose, save_aut, to_dot
from .errors import InstanceTooLarge, LimitExceeded, NonblockError
from .formats import loads_dimacs, loads_graph
from .reductions import (
    cnf3_to_unary,
    dfaint_empty_small,
    dfaint_to_modular,
    graph_reachable,
    graph_to_dfa,
    nfa_universal_small,
    sat3_bruteforce,
    universality_to_nonblocking,
)
from .unary import decide_one_shared_event
from .verifier import (
    SearchLimits,
    check_dfa_nonblocking,
    check_modular_nonblocking,
    check_nfa_nonblocking,
    check_prefix_closed,
    limit_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
MANIFEST_SCHEMA = "nonblock-manifest/1"
BENCH_FIELDS = ["instance", "family", "size", "explored", "millis", "verdict", "oracle"]
CHECK_KINDS = ("dfa", "nfa", "modular", "onesharedevent", "prefixclosed")


def _expand_inputs(paths):
    """Input files, with manifest JSON files replaced by their components."""
    out = []
    for p in map(Path, paths):
        if p.suffix == ".json":
            manifest = json.loads(p.read_text(encoding="utf-8"))
            out.extend(p.parent / name for name in manifest["components"])
        else:
            out.append(p)
    return out


def _format_word(word):
    if word is None:
        return "-"
    return " ".join(word) if word else "<empty>"


def _emit(report: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(report, sort_keys=True))
        return
    for key, value in report.items():
        if key == "schema":
            continue
        if key == "witness":
            value = _format_word(value)
        elif isinstance(value, dict):
            value = json.dumps(value, sort_keys=True)
        elif value is None:
            value = "-"
        print(f"{key}: {value}")


def cmd_check(args) -> int:
    kind = args.kind
    paths = _expand_inputs(args.inputs)
    single = kind in ("dfa", "nfa", "prefixclosed")
    if single and len(paths) != 1:
        raise NonblockError(f"'check {kind}' takes exactly one automaton, got {len(paths)}")
    if not paths:
        raise NonblockError(f"'check {kind}' needs at least one automaton")
    deterministic = kind in ("dfa", "modular", "onesharedevent")
    automata = [load_aut(p, deterministic=deterministic) for p in paths]
    limits = SearchLimits(args.max_states, args.max_seconds)
    timing = not args.no_timing

    system = None
    if args.dot or args.format == "dot":
        system = automata[0] if single else parallel_compose(automata)
    if args.dot:
        Path(args.dot).write_text(to_dot(system), encoding="utf-8")

    try:
        if kind == "dfa":
            result = check_dfa_nonblocking(automata[0], limits)
        elif kind == "nfa":
            result = check_nfa_nonblocking(automata[0], limits)
        elif kind == "prefixclosed":
            result = check_prefix_closed(automata[0], limits)
        elif kind == "modular":
            result = check_modular_nonblocking(automata, limits)
        else:
            decision = decide_one_shared_event(automata, limits, shared_event=args.shared_event)
            result = decision.verdict
    except LimitExceeded as exc:
        if args.format == "dot":
            print(to_dot(system), end="")
        else:
            _emit(limit_json(exc, timing), args.format)
        return EXIT_LIMIT

    report = result.to_json(timing)
    if kind == "onesharedevent":
        report["certificate"] = None if decision.certificate is None else decision.certificate.to_json()
        report["witness_length"] = decision.witness_length
    if args.format == "dot":
        print(to_dot(system), end="")
    else:
        _emit(report, args.format)
    ok = result.prefix_closed if kind == "prefixclosed" else result.nonblocking
    return EXIT_OK if ok else EXIT_FAIL


def _expected(oracle, truth_means_nonblocking=True):
    try:
        value = oracle()
    except InstanceTooLarge:
        return "unknown"
    return "nonblocking" if value == truth_means_nonblocking else "blocking"


def cmd_generate(args) -> int:
    *inputs, outdir = args.paths
    if not inputs:
        raise NonblockError("generate needs an input and an output directory")
    outdir = Path(outdir)
    kind = args.kind
    if kind == "graph":
        g = loads_graph(Path(inputs[0]).read_text(encoding="utf-8"), source=inputs[0])
        comps, check = [graph_to_dfa(g)], "dfa"
        expected = _expected(lambda: graph_reachable(g), truth_means_nonblocking=False)
    elif kind == "universality":
        b = load_aut(inputs[0])
        comps, check = [universality_to_nonblocking(b)], "nfa"
        expected = _expected(lambda: nfa_universal_small(b))
    elif kind == "dfaint":
        bs = [load_aut(p, deterministic=True) for p in inputs]
        comps, check = dfaint_to_modular(bs), "modular"
        expected = _expected(lambda: dfaint_empty_small(bs))
    else:
        f = loads_dimacs(Path(inputs[0]).read_text(encoding="utf-8"), source=inputs[0])
        comps, check = cnf3_to_unary(f), "onesharedevent"
        expected = _expected(lambda: sat3_bruteforce(f))

    outdir.mkdir(parents=True, exist_ok=True)
    names = [f"component_{i:02d}.aut" for i in range(len(comps))]
    for name, a in zip(names, comps):
        save_aut(a, outdir / name)
    manifest = {
        "schema": MANIFEST_SCHEMA,
        "kind": kind,
        "sources": [str(p) for p in inputs],
        "check": check,
        "components": names,
        "expected": expected,
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                          encoding="utf-8")
    print(json.dumps(manifest, sort_keys=True))
    return EXIT_OK


def parse_range(text: str) -> range:
    """``"a:b"`` (inclusive) or a single integer."""
    lo, sep, hi = text.partition(":")
    try:
        return range(int(lo), int(hi if sep else lo) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size range {text!r}, expected A:B") from None


def _bench_instance(family, rng, size, states, limits):
    """Generate one instance and return (oracle label, verdict)."""
    if family == "random-modular":
        comps = generators.random_modular(rng, size, states, exact=True)
        return "", check_modular_nonblocking(comps, limits)
    if family == "dfaint":
        bs = generators.random_dfaint(rng, size, states)
        oracle = _expected(lambda: dfaint_empty_small(bs))
        return oracle, check_modular_nonblocking(dfaint_to_modular(bs), limits)
    f = generators.random_cnf3(rng, size, rng.randint(1, 2 * size))
    oracle = _expected(lambda: sat3_bruteforce(f))
    return oracle, decide_one_shared_event(cnf3_to_unary(f), limits).verdict


def bench_rows(family, sizes, count, states, seed, limits):
    """Yield one result row per generated instance, in instance order."""
    rng = generators.stream(seed, f"bench/{family}")
    for size in sizes:
        for k in range(count):
            row = {"instance": f"{family}-{size}-{k}", "family": family, "size": size}
            try:
                row["oracle"], v = _bench_instance(family, rng, size, states, limits)
                row.update(explored=v.explored, millis=round(v.elapsed * 1000, 3),
                           verdict="nonblocking" if v.nonblocking else "blocking")
            except LimitExceeded as exc:
                row.update(oracle="", explored=exc.explored, millis=round(exc.elapsed * 1000, 3),
                           verdict="limit")
            yield row


def cmd_bench(args) -> int:
    if args.family == "cnf" and args.sizes.start < 3:
        raise NonblockError("cnf instances need at least 3 variables")
    limits = SearchLimits(args.max_states, args.max_seconds)
    states = args.states if args.states is not None else (4 if args.family == "dfaint" else 10)
    rows = list(bench_rows(args.family, args.sizes, args.count, states, args.seed, limits))
    if args.no_timing:
        for r in rows:
            r["millis"] = ""

    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()

    figure = args.figure or (Path(args.out).with_suffix(".png") if args.out and not args.no_figure else None)
    if figure:
        from .plotting import plot_bench

        plot_bench([r for r in rows if r["millis"] != ""], figure,
                   title=f"{args.family}, seed {args.seed}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonblock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_limits(p):
        p.add_argument("--max-states", type=int, default=1_000_000)
        p.add_argument("--max-seconds", type=float, default=60.0)
        p.add_argument("--no-timing", action="store_true",
                       help="omit wall-clock times so reports are byte-reproducible")

    check = sub.add_parser("check", help="decide nonblockingness or prefix-closedness")
    check.add_argument("kind", choices=CHECK_KINDS)
    check.add_argument("inputs", nargs="+", help=".aut files or a generator manifest.json")
    check.add_argument("--format", choices=("text", "json", "dot"), default="text")
    check.add_argument("--dot", metavar="PATH", help="also write the checked system as DOT")
    check.add_argument("--shared-event", help="shared event for a single-component onesharedevent check")
    add_limits(check)
    check.set_defaults(func=cmd_check)

    gen = sub.add_parser("generate", help="emit reduction instances as .aut files")
    gen.add_argument("kind", choices=("graph", "universality", "dfaint", "cnf"))
    gen.add_argument("paths", nargs="+", metavar="INPUT... OUTDIR")
    gen.set_defaults(func=cmd_generate)

    bench = sub.add_parser("bench", help="time a family of random instances, CSV output")
    bench.add_argument("family", choices=("random-modular", "cnf", "dfaint"))
    bench.add_argument("--sizes", type=parse_range, default=parse_range("2:4"))
    bench.add_argument("--count", type=int, default=3, help="instances per size")
    bench.add_argument("--states", type=int, help="states per component")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", help="CSV path (default stdout); a PNG figure is written next to it")
    bench.add_argument("--figure", help="explicit figure path")
    bench.add_argument("--no-figure", action="store_true")
    add_limits(bench)
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "max_states", 1) <= 0 or getattr(args, "max_seconds", 1) <= 0:
            raise NonblockError("limits must be positive")
        return args.func(args)
    except (NonblockError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"nonblock: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
