"""Command line entry point.

Exit codes: 0 success, 1 input or usage error, 2 partial failure (some
records could not be parsed or standardized; they are in the quarantine
file). Every command is deterministic given its inputs, flags and seed.

Options can also come from a ``key=value`` file passed with ``--config``;
flags given on the command line win. Keys are option names without the
leading dashes (``n-pairs`` and ``n_pairs`` both work).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from importlib import resources

from molcurate import __version__
from molcurate.descriptors import TableChecksumError, table_checksums

EXIT_OK, EXIT_INPUT, EXIT_PARTIAL = 0, 1, 2

# options that must be present after the config file has been applied
REQUIRED = {
    "ingest": ("inp", "out"),
    "run": ("inp", "out"),
    "merge": ("inp", "out"),
    "subset": ("inp", "out", "m", "seed"),
    "ncircles": ("inp",),
    "stats": ("inp", "seed"),
    "filters": ("inp",),
    "summary": ("inp",),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse would exit with 2, which here means partial failure
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _version_text() -> str:
    lines = [f"molcurate {__version__}"]
    sums = dict(table_checksums())
    for pkg, rel in (("molcurate.filters", "rules.tsv"), ("molcurate", "analytics_data/element_groups.tsv")):
        data = (resources.files(pkg) / rel).read_bytes()
        sums[rel.rsplit("/", 1)[-1]] = hashlib.sha256(data).hexdigest()
    lines += [f"{name}  sha256:{digest}" for name, digest in sorted(sums.items())]
    return "\n".join(lines)


class _Version(argparse.Action):
    def __init__(self, option_strings, dest=argparse.SUPPRESS, **kw):
        super().__init__(option_strings, dest, nargs=0, help="print version and table checksums")

    def __call__(self, parser, namespace, values, option_string=None):
        print(_version_text())
        parser.exit(EXIT_OK)


def _fp_options(p):
    p.add_argument("--radius", type=int, default=2, help="ECFP radius (default 2)")
    p.add_argument("--width", type=int, default=2048, help="fingerprint bits (default 2048)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="molcurate", description="Curate and analyse multi-source molecule datasets.")
    parser.add_argument("--version", action=_Version)
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="key=value file with defaults for this command")
        return p

    p = command("ingest", "parse a record file, drop parse failures and duplicates")
    p.add_argument("--in", dest="inp")
    p.add_argument("--out")
    p.add_argument("--quarantine")
    p.add_argument("--ledger")

    p = command("run", "full per-source pipeline: parse, standardize, filter")
    p.add_argument("--in", dest="inp")
    p.add_argument("--out")
    p.add_argument("--quarantine")
    p.add_argument("--ledger")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--block-size", type=int, default=1000)

    p = command("merge", "merge kept-record files in the given order")
    p.add_argument("--in", dest="inp", nargs="+")
    p.add_argument("--out")
    p.add_argument("--gains", help="JSON gain table")

    p = command("subset", "diverse subset of exactly M records")
    p.add_argument("--in", dest="inp")
    p.add_argument("--out")
    p.add_argument("--m", type=int)
    p.add_argument("--t", type=float, default=0.9)
    p.add_argument("--seed", type=int)
    p.add_argument("--report", help="JSON with centers and sampling counts")
    _fp_options(p)

    p = command("ncircles", "greedy #Circles of a record file")
    p.add_argument("--in", dest="inp")
    p.add_argument("--t", type=float, default=0.75)
    p.add_argument("--report")
    _fp_options(p)

    p = command("stats", "compare within-set distance distributions of two files")
    p.add_argument("--in", dest="inp", nargs=2, metavar=("A", "B"))
    p.add_argument("--n-pairs", type=int, default=100000)
    p.add_argument("--seed", type=int)
    p.add_argument("--report")
    _fp_options(p)

    p = command("filters", "pass rates of drug-likeness filters")
    p.add_argument("--in", dest="inp")
    p.add_argument("--names", nargs="+", help="filters to apply (default: all)")
    p.add_argument("--report")

    p = command("summary", "scaffolds, salts, element groups and descriptor statistics")
    p.add_argument("--in", dest="inp")
    p.add_argument("--report")
    return parser


def read_config(path) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _apply_config(parser, sub, argv, ns):
    """Re-parse with config values as defaults so explicit flags win."""
    cfg = read_config(ns.config)
    if "in" in cfg:
        cfg["inp"] = cfg.pop("in")
    known = {a.dest: a for a in sub._actions}
    unknown = sorted(set(cfg) - set(known))
    if unknown:
        raise UsageError(f"{ns.config}: unknown option(s) {', '.join(unknown)}")
    for key, value in cfg.items():
        if known[key].nargs in ("+", 2):
            cfg[key] = value.split()
            typ = known[key].type
            if typ:
                cfg[key] = [typ(v) for v in cfg[key]]
    sub.set_defaults(**cfg)
    return parser.parse_args(argv)


def _emit(obj, path):
    text = json.dumps(obj, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _records(path):
    from molcurate.pipeline import read_records

    return read_records(path)


def _fingerprints(path, args):
    from molcurate.diversity import fingerprints_of

    records = _records(path)
    return records, fingerprints_of(records, args.radius, args.width)


# ---------------------------------------------------------------- commands


def cmd_ingest(args) -> int:
    from molcurate.pipeline import _Quarantine, ingest, write_json, write_records

    records, ledger = ingest(args.inp)
    write_records(records, args.out)
    q = _Quarantine(args.quarantine)
    for r in ledger.removed_records:
        q.add(r)
    q.close()
    if args.ledger:
        d = ledger.as_dict()
        d["final"] = len(records)  # only the first stage has run
        write_json(d, args.ledger)
    return EXIT_PARTIAL if ledger.failures else EXIT_OK


def cmd_run(args) -> int:
    from molcurate.pipeline import run_file, write_json

    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    ledger = run_file(args.inp, args.out, args.quarantine, threads=args.threads,
                      block_size=args.block_size)
    if args.ledger:
        write_json(ledger.as_dict(), args.ledger)
    return EXIT_PARTIAL if ledger.failures else EXIT_OK


def cmd_merge(args) -> int:
    from molcurate.pipeline import merge_sources

    gains = merge_sources(args.inp, args.out)
    if args.gains:
        _emit(gains, args.gains)
    return EXIT_OK


def cmd_subset(args) -> int:
    from molcurate.diversity import diverse_subset_indices
    from molcurate.pipeline import write_records

    records, fps = _fingerprints(args.inp, args)
    if args.m > len(records):
        raise UsageError(f"--m {args.m} exceeds the {len(records)} records in {args.inp}")
    rep = diverse_subset_indices(fps, args.m, args.t, args.seed)
    write_records([records[i] for i in rep.indices], args.out)
    if args.report:
        _emit({"m": args.m, "t": args.t, "seed": args.seed, "n": len(records),
               "centers": len(rep.centers), "per_cluster": rep.per_cluster,
               "top_up": rep.top_up}, args.report)
    return EXIT_OK


def cmd_ncircles(args) -> int:
    from molcurate.diversity import ncircles

    _, fps = _fingerprints(args.inp, args)
    _emit(ncircles(fps, args.t).as_dict(), args.report)
    return EXIT_OK


def cmd_stats(args) -> int:
    from molcurate.diversity import pair_distance_stats

    _, fa = _fingerprints(args.inp[0], args)
    _, fb = _fingerprints(args.inp[1], args)
    if len(fa) < 2 or len(fb) < 2:
        raise UsageError("each input needs at least two records")
    _emit(pair_distance_stats(fa, fb, args.n_pairs, args.seed), args.report)
    return EXIT_OK


def cmd_filters(args) -> int:
    from molcurate.descriptors import compute_descriptors
    from molcurate.filters import filter_names, filter_profile, get_filter
    from molcurate.molgraph import parse_smiles

    names = args.names or filter_names()
    for n in names:
        get_filter(n)  # fail before reading the data
    data = (compute_descriptors(parse_smiles(r.smiles)) for r in _records(args.inp))
    _emit(filter_profile(data, names), args.report)
    return EXIT_OK


def cmd_summary(args) -> int:
    from molcurate.analytics import dataset_summary

    _emit(dataset_summary(_records(args.inp)).as_dict(), args.report)
    return EXIT_OK


COMMANDS = {
    "ingest": cmd_ingest,
    "run": cmd_run,
    "merge": cmd_merge,
    "subset": cmd_subset,
    "ncircles": cmd_ncircles,
    "stats": cmd_stats,
    "filters": cmd_filters,
    "summary": cmd_summary,
}


def main(argv=None) -> int:
    from molcurate.filters import UnknownFilterError
    from molcurate.molgraph import SmilesError
    from molcurate.pipeline import MergeError, PipelineInputError

    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("molcurate: error: a command is required", file=sys.stderr)
        return EXIT_INPUT
    sub = parser._subparsers._group_actions[0].choices[args.command]
    try:
        if args.config:
            args = _apply_config(parser, sub, argv, args)
        missing = [d for d in REQUIRED[args.command] if getattr(args, d) is None]
        if missing:
            flags = ", ".join("--" + ("in" if d == "inp" else d.replace("_", "-")) for d in missing)
            sub.print_usage(sys.stderr)
            raise UsageError(f"missing required option(s): {flags}")
        return COMMANDS[args.command](args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    except UnknownFilterError as e:
        print(f"molcurate {args.command}: {e.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    except (UsageError, PipelineInputError, MergeError, SmilesError, TableChecksumError,
            ValueError, OSError) as e:
        print(f"molcurate {args.command}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
