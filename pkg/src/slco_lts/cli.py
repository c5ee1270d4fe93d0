"""Command-line front end.

Subcommands: validate, explore, dot, aut, reduce, compare.  Exit codes:
0 success (or equivalent), 1 diagnostics / not equivalent, 2 usage error,
3 resource limit hit.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .csformat import emit_cs
from .export import DotOptions, emit_aut, emit_dot
from .lts import Lts, LtsError, cs_to_lts, emit_lts_text, parse_lts_text
from .model import Diagnostic, Model
from .parser import parse_model
from .reduction import HideSpec, Relation, equivalent, hide_labels, reduce_lts
from .semantics import ExploreLimits, LimitExceededError, ExplorationError, explore
from .validate import validate_model

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2) with its own text
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="slco-lts", description="Explore SLCO models into LTSs; reduce, compare, export.")
    p.add_argument("--version", action="version", version=f"slco-lts {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="parse and check a model")
    v.add_argument("model")

    e = sub.add_parser("explore", help="generate the state space and write the LTS")
    e.add_argument("model")
    e.add_argument("-o", "--output", default=None, help="LTS output path (default: stdout)")
    e.add_argument("--cs", default=None, help="also dump configurations and steps to this path")
    e.add_argument("--buffer-capacity", type=int, default=1)
    e.add_argument("--max-configs", type=int, default=None)

    d = sub.add_parser("dot", help="render an LTS as a DOT digraph")
    d.add_argument("lts")
    d.add_argument("-o", "--output", default=None)

    a = sub.add_parser("aut", help="convert an LTS to the Aldebaran (AUT) format")
    a.add_argument("lts")
    a.add_argument("-o", "--output", default=None)

    r = sub.add_parser("reduce", help="hide labels and minimize an LTS")
    r.add_argument("lts")
    r.add_argument("--relation", choices=("strong", "branching"), required=True)
    r.add_argument("--keep", action="append", default=[], metavar="LABEL")
    r.add_argument("--hide", action="append", default=[], metavar="LABEL")
    r.add_argument("-o", "--output", default=None)

    c = sub.add_parser("compare", help="check two LTSs for behavioral equivalence")
    c.add_argument("lts_a")
    c.add_argument("lts_b")
    c.add_argument("--relation", choices=("strong", "branching"), required=True)
    c.add_argument("--keep", action="append", default=[], metavar="LABEL")
    c.add_argument("--hide", action="append", default=[], metavar="LABEL")
    return p


def _fail(stderr, category: str, message: str, code: int) -> int:
    print(f"error: {category}: {message}", file=stderr)
    return code


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str, stdout) -> None:
    if path is None:
        stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load_model(path: str, stderr) -> Model | None:
    result = parse_model(_read(path))
    if isinstance(result, list):
        for d in result:
            print(d.render(path), file=stderr)
        return None
    diags = validate_model(result)
    for d in diags:
        print(d.render(path), file=stderr)
    if any(d.severity == "error" for d in diags):
        return None
    return result


def _load_lts(path: str, stderr) -> Lts | None:
    result = parse_lts_text(_read(path))
    if isinstance(result, list):
        for d in result:
            print(d.render(path), file=stderr)
        return None
    return result


def _hide_spec(keep: list[str], hide: list[str]) -> HideSpec | None:
    if keep and hide:
        raise UsageError("--keep and --hide are mutually exclusive")
    if keep:
        return HideSpec("keep", frozenset(keep))
    if hide:
        return HideSpec("hide", frozenset(hide))
    return None


def run(argv: list[str], stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    if argv and argv[0] == "--version":
        print(f"slco-lts {__version__}", file=stdout)
        return EXIT_OK
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail(stderr, "usage", str(exc), EXIT_USAGE)
    except SystemExit as exc:  # --help and friends print and exit
        return int(exc.code or 0)

    try:
        if args.command == "validate":
            model = _load_model(args.model, stderr)
            return EXIT_OK if model is not None else _fail(stderr, "validate", "model has errors", EXIT_DIAGNOSTICS)

        if args.command == "explore":
            if args.buffer_capacity < 1:
                return _fail(stderr, "usage", "--buffer-capacity must be at least 1", EXIT_USAGE)
            model = _load_model(args.model, stderr)
            if model is None:
                return _fail(stderr, "validate", "model has errors", EXIT_DIAGNOSTICS)
            limits = ExploreLimits(max_configurations=args.max_configs, buffer_capacity=args.buffer_capacity)
            try:
                graph = explore(model, limits)
            except LimitExceededError as exc:
                return _fail(stderr, "limit", str(exc), EXIT_LIMIT)
            if args.cs is not None:
                _write(args.cs, emit_cs(graph), stdout)
            _write(args.output, emit_lts_text(cs_to_lts(graph)), stdout)
            return EXIT_OK

        if args.command == "dot":
            lts = _load_lts(args.lts, stderr)
            if lts is None:
                return _fail(stderr, "parse", "malformed LTS input", EXIT_DIAGNOSTICS)
            _write(args.output, emit_dot(lts, DotOptions()), stdout)
            return EXIT_OK

        if args.command == "aut":
            lts = _load_lts(args.lts, stderr)
            if lts is None:
                return _fail(stderr, "parse", "malformed LTS input", EXIT_DIAGNOSTICS)
            text, diags = emit_aut(lts)
            for d in diags:
                print(d.render(args.lts), file=stderr)
            _write(args.output, text, stdout)
            return EXIT_OK

        if args.command == "reduce":
            spec = _hide_spec(args.keep, args.hide)
            lts = _load_lts(args.lts, stderr)
            if lts is None:
                return _fail(stderr, "parse", "malformed LTS input", EXIT_DIAGNOSTICS)
            if spec is not None:
                lts = hide_labels(lts, spec)
            _write(args.output, emit_lts_text(reduce_lts(lts, args.relation)), stdout)
            return EXIT_OK

        if args.command == "compare":
            spec = _hide_spec(args.keep, args.hide)
            lts_a = _load_lts(args.lts_a, stderr)
            lts_b = _load_lts(args.lts_b, stderr)
            if lts_a is None or lts_b is None:
                return _fail(stderr, "parse", "malformed LTS input", EXIT_DIAGNOSTICS)
            if spec is not None:
                lts_a = hide_labels(lts_a, spec)
                lts_b = hide_labels(lts_b, spec)
            # Reducing first is only an optimization; the answer is defined by
            # the equivalence itself.
            relation: Relation = args.relation
            same = equivalent(reduce_lts(lts_a, relation), reduce_lts(lts_b, relation), relation)
            print("equivalent" if same else "not equivalent", file=stdout)
            return EXIT_OK if same else EXIT_DIAGNOSTICS
    except UsageError as exc:
        return _fail(stderr, "usage", str(exc), EXIT_USAGE)
    except FileNotFoundError as exc:
        return _fail(stderr, "io", f"{exc.filename}: file not found", EXIT_DIAGNOSTICS)
    except LtsError as exc:
        return _fail(stderr, "format", str(exc), EXIT_DIAGNOSTICS)
    except ExplorationError as exc:
        return _fail(stderr, "explore", str(exc), EXIT_DIAGNOSTICS)
    raise AssertionError(f"unhandled command {args.command!r}")


def entry() -> None:
    raise SystemExit(run(sys.argv[1:]))


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
