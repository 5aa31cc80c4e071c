"""Command-line front end.

Subcommands: validate, hseg, vseg, hybrid, merge, stats, gen-fixture.
Exit codes: 0 success, 1 usage or file-system problem, 2 parse or
validation failure, 3 filter or evaluation error, 4 merge conflict.
Failures print a single line `owlseg: <kind>: <message>` on stderr.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import fixtures, rdfxml, segment
from .assembly import MergeError, merge, stats
from .filters import EvalError, FilterSyntaxError, parse_filter
from .model import NamespaceMap, Ontology
from .rdfxml import ParseError, ParseOptions
from .segment import SegmentSpec, UnknownEntityError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_FILTER = 3
EXIT_MERGE = 4


class _CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        self.code = code
        self.kind = kind
        self.message = " ".join(str(message).split())
        super().__init__(self.message)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(EXIT_USAGE, "usage", message)


def _use_color() -> bool:
    mode = os.environ.get("OWLSEG_COLOR", "auto")
    if mode == "always":
        return True
    if mode == "never":
        return False
    return sys.stdout.isatty()


def _green(text: str) -> str:
    return f"\x1b[32m{text}\x1b[0m" if _use_color() else text


def _load(path: str, lenient: bool) -> Ontology:
    with open(path, "rb") as fh:
        data = fh.read()
    mode = "lenient" if lenient else "strict"
    onto, warnings = rdfxml.parse(data, ParseOptions(mode))
    for w in warnings:
        print(f"owlseg: warning: {w}", file=sys.stderr)
    return onto


def _write(path: str, onto: Ontology, inputs: list[str]) -> None:
    for inp in inputs:
        if os.path.abspath(inp) == os.path.abspath(path):
            raise _CliError(EXIT_USAGE, "usage",
                            f"output {path} would overwrite input {inp}")
    with open(path, "wb") as fh:
        fh.write(rdfxml.serialize(onto))


def _names(text: str, ns: NamespaceMap) -> frozenset[str]:
    out = set()
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            out.add(ns.resolve(token))
        except KeyError as exc:
            raise _CliError(EXIT_USAGE, "usage",
                            f"cannot resolve {token!r}: {exc.args[0]}") from exc
    return frozenset(out)


def _purge_line(report: segment.PurgeReport) -> str:
    return (f"purged {len(report.removed_object_assertions)} object "
            f"assertions, {len(report.removed_data_assertions)} data "
            f"assertions, {len(report.removed_individuals)} individuals")


# ----------------------------------------------------------------------
# subcommands


def _cmd_validate(args) -> int:
    onto = _load(args.input, args.lenient)
    violations = onto.validate()
    if violations:
        for v in violations:
            print(v)
        raise _CliError(EXIT_PARSE, "validation",
                        f"{len(violations)} violation(s) in {args.input}")
    print(f"{_green('valid')}: {len(onto.classes)} classes, "
          f"{len(onto.object_properties)} object properties, "
          f"{len(onto.datatype_properties)} datatype properties, "
          f"{len(onto.individuals)} individuals")
    return EXIT_OK


def _cmd_hseg(args) -> int:
    src = _load(args.input, args.lenient)
    f = parse_filter(args.filter, src.namespaces)
    seg, report = segment.segment_horizontal(src, f)
    _write(args.output, seg, [args.input])
    print(f"kept {len(seg.individuals)} of {len(src.individuals)} "
          f"individuals; {_purge_line(report)}")
    return EXIT_OK


def _cmd_vseg(args) -> int:
    src = _load(args.input, args.lenient)
    ns = src.namespaces
    keep_classes = (_names(args.keep_classes, ns)
                    if args.keep_classes is not None else None)
    keep_dp = (_names(args.keep_dprops, ns)
               if args.keep_dprops is not None else None)
    keep_op = (_names(args.keep_oprops, ns)
               if args.keep_oprops is not None else None)
    if keep_classes is not None and (keep_dp is not None or keep_op is not None):
        spec = SegmentSpec(keep_classes=keep_classes,
                           keep_object_properties=keep_op,
                           keep_datatype_properties=keep_dp,
                           bridge_policy=args.bridge)
        seg, report = segment.segment_hybrid(src, spec)
    elif keep_classes is not None:
        seg, report = segment.segment_vertical_classes(src, keep_classes,
                                                       args.bridge)
    elif keep_dp is not None or keep_op is not None:
        seg, report = segment.segment_vertical_properties(
            src,
            keep_dp if keep_dp is not None else set(src.datatype_properties),
            keep_op if keep_op is not None else set(src.object_properties))
    else:
        raise _CliError(EXIT_USAGE, "usage",
                        "vseg needs --keep-classes, --keep-dprops or --keep-oprops")
    _write(args.output, seg, [args.input])
    print(f"kept {len(seg.classes)} classes, "
          f"{len(seg.object_properties) + len(seg.datatype_properties)} "
          f"properties, {len(seg.individuals)} individuals; "
          f"{_purge_line(report)}")
    return EXIT_OK


def _cmd_hybrid(args) -> int:
    src = _load(args.input, args.lenient)
    ns = src.namespaces
    if not args.keep_classes or (args.keep_dprops is None
                                 and args.keep_oprops is None):
        raise _CliError(EXIT_USAGE, "usage",
                        "hybrid needs --keep-classes and at least one of "
                        "--keep-dprops / --keep-oprops")
    spec = SegmentSpec(
        keep_classes=_names(args.keep_classes, ns),
        keep_datatype_properties=(_names(args.keep_dprops, ns)
                                  if args.keep_dprops is not None else None),
        keep_object_properties=(_names(args.keep_oprops, ns)
                                if args.keep_oprops is not None else None),
        filter=(parse_filter(args.filter, ns) if args.filter else None),
        bridge_policy=args.bridge)
    if spec.filter is not None:
        seg, report = segment.full_hybrid(src, spec)
    else:
        seg, report = segment.segment_hybrid(src, spec)
    _write(args.output, seg, [args.input])
    print(f"kept {len(seg.classes)} classes, "
          f"{len(seg.object_properties) + len(seg.datatype_properties)} "
          f"properties, {len(seg.individuals)} individuals; "
          f"{_purge_line(report)}")
    return EXIT_OK


def _cmd_merge(args) -> int:
    segments = [_load(path, args.lenient) for path in args.inputs]
    try:
        whole = merge(segments)
    except ValueError as exc:
        raise _CliError(EXIT_MERGE, "merge", str(exc)) from exc
    _write(args.output, whole, args.inputs)
    print(stats(whole).to_line())
    return EXIT_OK


def _cmd_stats(args) -> int:
    onto = _load(args.input, args.lenient)
    ref = _load(args.ref, args.lenient) if args.ref else None
    report = stats(onto, ref)
    print(report.to_kv() if args.kv else report.to_line())
    return EXIT_OK


def _cmd_gen_fixture(args) -> int:
    try:
        params = fixtures.PopulationParams(
            n_individuals=args.n, n_cities=args.cities,
            n_countries=args.countries, seed=args.seed)
    except ValueError as exc:
        raise _CliError(EXIT_USAGE, "usage", str(exc)) from exc
    schema = fixtures.build_citizen_schema()
    onto, allocation = fixtures.generate_with_allocation(schema, params)
    with open(args.output, "wb") as fh:
        fh.write(rdfxml.serialize(onto))
    sidecar = args.output + ".alloc"
    with open(sidecar, "w", encoding="utf-8") as fh:
        fh.write(allocation.to_text())
    print(f"wrote {args.output} and {sidecar}; {stats(onto).to_line()}")
    return EXIT_OK


# ----------------------------------------------------------------------
# wiring


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="owlseg",
                             description="Extract sub-ontologies from OWL "
                                         "RDF/XML files.")
    sub = parser.add_subparsers(dest="command", required=True)

    def reader(p):
        p.add_argument("input", help="RDF/XML ontology file")
        p.add_argument("--lenient", action="store_true",
                       help="drop unsupported constructs instead of failing")

    p = sub.add_parser("validate", help="parse and validate an ontology")
    reader(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("hseg", help="horizontal segment: filter individuals")
    reader(p)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--filter", required=True,
                   help="condition, e.g. \"livesIn = :City0 and "
                        "dateOfBirth >= '1997-01-01'\"")
    p.set_defaults(func=_cmd_hseg)

    p = sub.add_parser("vseg", help="vertical segment: project classes "
                                    "and/or properties")
    reader(p)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--keep-classes", metavar="A,B,…")
    p.add_argument("--keep-dprops", metavar="A,B,…")
    p.add_argument("--keep-oprops", metavar="A,B,…")
    p.add_argument("--bridge", choices=("stub", "drop"), default="stub",
                   help="how to treat links leaving the class keep-set")
    p.set_defaults(func=_cmd_vseg)

    p = sub.add_parser("hybrid", help="class and property projection, "
                                      "optionally plus a filter")
    reader(p)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--keep-classes", metavar="A,B,…")
    p.add_argument("--keep-dprops", metavar="A,B,…")
    p.add_argument("--keep-oprops", metavar="A,B,…")
    p.add_argument("--filter")
    p.add_argument("--bridge", choices=("stub", "drop"), default="stub")
    p.set_defaults(func=_cmd_hybrid)

    p = sub.add_parser("merge", help="reassemble segments into one ontology")
    p.add_argument("inputs", nargs="+", help="segment files")
    p.add_argument("--lenient", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_merge)

    p = sub.add_parser("stats", help="size report, optionally vs a reference")
    reader(p)
    p.add_argument("--ref", help="reference ontology for the reduction ratio")
    p.add_argument("--kv", action="store_true",
                   help="key=value lines instead of one summary line")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("gen-fixture", help="write a seeded citizen population")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--n", type=int, required=True, help="number of persons")
    p.add_argument("--cities", type=int, default=4)
    p.add_argument("--countries", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gen_fixture)

    return parser


def _report(exc: _CliError) -> int:
    print(f"owlseg: {exc.kind}: {exc.message}", file=sys.stderr)
    return exc.code


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _CliError as exc:
        return _report(exc)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _CliError as exc:
        return _report(exc)
    except ParseError as exc:
        return _report(_CliError(EXIT_PARSE, "parse", str(exc)))
    except FilterSyntaxError as exc:
        return _report(_CliError(EXIT_FILTER, "filter", str(exc)))
    except EvalError as exc:
        return _report(_CliError(EXIT_FILTER, "filter", str(exc)))
    except UnknownEntityError as exc:
        return _report(_CliError(EXIT_FILTER, "filter", str(exc)))
    except MergeError as exc:
        return _report(_CliError(EXIT_MERGE, "merge", str(exc)))
    except OSError as exc:
        return _report(_CliError(EXIT_USAGE, "usage", str(exc)))


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
