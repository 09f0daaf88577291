"""Command-line entry point: ``bgcsense <command> [options]``.

Exit codes: 0 success, 2 usage, 3 input format, 4 solver failure, 5 I/O.
Data goes to files or stdout; logs go to stderr.  Every written artifact
embeds a manifest (command plus fully resolved parameters) from which
``bgcsense replay`` regenerates it byte for byte.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .benchmark import ENSEMBLES, BenchmarkPlan, CsvSink, delta_grid, result_json, run_plan, summary_csv
from .construct import ConstructionConfig, bgc_construct, estimate_regular_degree, peg_construct
from .graph import girth, is_maximal
from .matrix import ZeroColumnError, coherence, realize_binary, realize_ternary, sample_gaussian
from .mmio import (MatrixMarketError, graph_from_content, read_graph, read_matrix, read_mm,
                   write_graph, write_matrix)
from .recovery import OPTIMAL, basis_pursuit, brute_force_l1, generate_signal

log = logging.getLogger("bgcsense")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4, 5
CATEGORIES = {EXIT_USAGE: "usage", EXIT_INPUT: "input-format", EXIT_SOLVER: "solver-failure",
              EXIT_IO: "io"}

SEED_ENV = "BGCSENSE_SEED"
THREADS_ENV = "BGCSENSE_THREADS"

# argparse destinations that never enter a manifest
_VOLATILE = {"out", "json", "verbose", "func", "workers", "command"}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error[usage]: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"{SEED_ENV}={raw!r} is not an integer", EXIT_USAGE) from None


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise CliError(f"{THREADS_ENV}={raw!r} is not an integer", EXIT_USAGE) from None


def manifest_for(args: argparse.Namespace) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in _VOLATILE}
    return {"tool": "bgcsense", "version": __version__, "command": args.command, "params": params}


# signal files --------------------------------------------------------------

def format_signal(x: np.ndarray) -> str:
    """Nonzeros of ``x`` as whitespace-separated ``index:value`` pairs (0-based)."""
    return " ".join(f"{i}:{format(float(x[i]), '.17g')}" for i in np.flatnonzero(x)) + "\n"


def parse_signal(text: str, n: int, path=None) -> np.ndarray:
    x = np.zeros(n)
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.lstrip().startswith("#"):
            continue
        for tok in line.split():
            idx, sep, val = tok.partition(":")
            try:
                i, v = int(idx), float(val)
            except ValueError:
                i = v = None
            if not sep or i is None:
                raise CliError(f"{path}:line {lineno}: bad token {tok!r}, expected index:value",
                               EXIT_INPUT)
            if not 0 <= i < n:
                raise CliError(f"{path}:line {lineno}: index {i} outside [0, {n})", EXIT_INPUT)
            x[i] = v
    return x


# commands ------------------------------------------------------------------

def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_construct(args) -> int:
    report = bgc_construct(ConstructionConfig(args.rows, args.cols, args.seed, args.balance_checks))
    write_graph(args.out, report.graph, manifest_for(args))
    print(f"edges {report.graph.num_edges}")
    print(f"average_column_degree {float(report.average_var_degree):.4f}")
    print(f"min_column_degree {report.min_var_degree}")
    print(f"passes {report.iterations_used}")
    return EXIT_OK


def cmd_peg(args) -> int:
    report = peg_construct(ConstructionConfig(args.rows, args.cols, args.seed), args.degree,
                           args.retries)
    write_graph(args.out, report.graph, manifest_for(args))
    print(f"succeeded {str(report.succeeded).lower()}")
    print(f"attempts {report.attempts}")
    if not report.succeeded:
        raise CliError(f"girth-4 after {report.attempts} attempts (last attempt written)",
                       EXIT_SOLVER)
    return EXIT_OK


def cmd_estimate(args) -> int:
    d_real, d_int = estimate_regular_degree(args.rows, args.cols)
    print(f"d_real {d_real:.2f}")
    print(f"d_int {d_int}")
    return EXIT_OK


def cmd_matrix(args) -> int:
    if args.type == "gaussian":
        if args.rows is None or args.cols is None:
            raise CliError("--type gaussian needs --rows and --cols", EXIT_USAGE)
        mat = sample_gaussian(args.rows, args.cols, args.seed)
    else:
        if args.graph is None:
            raise CliError(f"--type {args.type} needs --graph", EXIT_USAGE)
        graph, _ = read_graph(args.graph)
        mat = realize_binary(graph) if args.type == "binary" else realize_ternary(graph, args.seed)
    write_matrix(args.out, mat, manifest_for(args))
    return EXIT_OK


def _histogram(degrees) -> str:
    vals, counts = np.unique(degrees, return_counts=True)
    return " ".join(f"{v}:{c}" for v, c in zip(vals.tolist(), counts.tolist()))


def cmd_analyze(args) -> int:
    mat, _ = read_matrix(args.matrix)
    rep = coherence(mat)
    support = mat.entries != 0
    print(f"kind {mat.kind}")
    print(f"shape {mat.rows} {mat.cols}")
    print(f"mu {rep.mu:.6f}")
    print(f"k_bound {rep.k_bound}")
    print(f"argmax_pair {rep.argmax_pair[0]} {rep.argmax_pair[1]}" if rep.argmax_pair else "argmax_pair none")
    print(f"column_degrees {_histogram(support.sum(axis=0))}")
    print(f"row_degrees {_histogram(support.sum(axis=1))}")
    return EXIT_OK


def _recover(args, solver) -> int:
    mat, _ = read_matrix(args.matrix)
    x = parse_signal(Path(args.signal).read_text(), mat.cols, args.signal)
    out = solver(mat, mat.entries @ x).score(x)
    _write_text(args.out, format_signal(np.where(np.abs(out.estimate) > 1e-12, out.estimate, 0)))
    print(f"status {out.status}")
    print(f"relative_error {out.relative_error:.3e}")
    print(f"residual {out.residual:.3e}")
    print(f"l1_objective {out.objective:.12g}")
    if out.status != OPTIMAL:
        raise CliError(f"solver status {out.status}", EXIT_SOLVER)
    return EXIT_OK


def cmd_recover(args) -> int:
    return _recover(args, basis_pursuit)


def cmd_oracle(args) -> int:
    return _recover(args, brute_force_l1)


def cmd_signal(args) -> int:
    sig = generate_signal(args.n, args.k, args.signing, args.seed)
    _write_text(args.out, format_signal(sig.dense()))
    return EXIT_OK


def cmd_verify(args) -> int:
    content = read_mm(args.path)
    graph = graph_from_content(content)
    rep = girth(graph)
    print(f"shape {graph.num_checks} {graph.num_vars}")
    print(f"edges {graph.num_edges}")
    print(f"has_four_cycle {str(rep.has_four_cycle).lower()}")
    if rep.four_cycle_witness:
        print(f"four_cycle_witness {rep.four_cycle_witness[0]} {rep.four_cycle_witness[1]}")
    print(f"girth {rep.describe()}")
    print(f"column_degrees {_histogram(graph.var_degrees())}")
    print(f"row_degrees {_histogram(graph.check_degrees())}")
    if args.skip_maximality:
        print("maximal skipped")
    else:
        print(f"maximal {str(is_maximal(graph)).lower()}")
    return EXIT_OK


def _parse_deltas(text: str) -> tuple[float, ...]:
    try:
        if ":" in text:
            start, stop, steps = text.split(":")
            return delta_grid(float(start), float(stop), int(steps))
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise CliError(f"bad --delta {text!r}; use start:stop:steps or a comma list",
                       EXIT_USAGE) from None


def _summary_path(out: str) -> Path:
    p = Path(out)
    return p.with_name(p.stem + "_summary" + (p.suffix or ".csv"))


def cmd_bench(args) -> int:
    try:
        plan = BenchmarkPlan(
            n=args.n, delta_grid=_parse_deltas(args.delta), trials_per_point=args.trials,
            ensembles=tuple(args.ensembles.split(",")), signing=args.signal,
            success_threshold=args.threshold, success_rate_bar=args.bar,
            master_seed=args.seed, normalize_columns=args.normalize_columns,
            hysteresis=args.hysteresis, k_max=args.k_max,
        )
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    manifest = manifest_for(args)
    workers = args.workers if args.workers is not None else _default_threads()
    if args.json:
        result = run_plan(plan, workers=workers)
        _write_text(args.out, result_json(result, manifest))
    else:
        with open(args.out, "w") as fh:
            result = run_plan(plan, sink=CsvSink(fh, manifest), workers=workers)
        _summary_path(args.out).write_text(summary_csv(result, manifest))
    for e in plan.ensembles:
        curve = " ".join(f"{d:g}:{k}" for d, k in result.curve(e))
        print(f"{e} {curve}")
    return EXIT_OK


def cmd_replay(args) -> int:
    source = Path(args.source)
    text = source.read_text()
    manifest = None
    if text.startswith("{"):
        manifest = json.loads(text).get("manifest")
    else:
        for line in text.splitlines():
            if line.startswith("% manifest: ") or line.startswith("# manifest: "):
                manifest = json.loads(line.split(": ", 1)[1])
                break
    if not manifest or manifest.get("tool") != "bgcsense":
        raise CliError(f"{source}: no bgcsense manifest found", EXIT_INPUT)
    command = manifest["command"]
    if command not in COMMANDS or command == "replay":
        raise CliError(f"{source}: manifest names unknown command {command!r}", EXIT_INPUT)
    ns = argparse.Namespace(**manifest["params"], command=command, out=args.out,
                            json=text.startswith("{"), verbose=args.verbose, workers=None)
    return COMMANDS[command](ns)


COMMANDS = {
    "construct": cmd_construct, "peg": cmd_peg, "estimate": cmd_estimate, "matrix": cmd_matrix,
    "analyze": cmd_analyze, "recover": cmd_recover, "oracle": cmd_oracle, "signal": cmd_signal,
    "verify": cmd_verify, "bench": cmd_bench, "replay": cmd_replay,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bgcsense", description="Girth-6 compressed sensing matrices.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    seed = _default_seed()

    s = sub.add_parser("construct", help="build a BGC graph")
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--cols", type=int, required=True)
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--balance-checks", action="store_true",
                   help="prefer minimum-degree checks among the candidates")
    s.add_argument("--out", required=True)

    s = sub.add_parser("peg", help="build a uniform-degree PEG graph")
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--cols", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--retries", type=int, default=1000)
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--out", required=True)

    s = sub.add_parser("estimate", help="regular-graph column degree estimate")
    s.add_argument("--rows", type=int, required=True)
    s.add_argument("--cols", type=int, required=True)

    s = sub.add_parser("matrix", help="realize a sensing matrix")
    s.add_argument("--type", choices=("binary", "ternary", "gaussian"), required=True)
    s.add_argument("--graph")
    s.add_argument("--rows", type=int)
    s.add_argument("--cols", type=int)
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--out", required=True)

    s = sub.add_parser("analyze", help="coherence and degree statistics of a matrix file")
    s.add_argument("--matrix", required=True)

    for name, what in (("recover", "basis pursuit"), ("oracle", "exhaustive l1 search")):
        s = sub.add_parser(name, help=f"decode y = A x with {what}")
        s.add_argument("--matrix", required=True)
        s.add_argument("--signal", required=True, help="file of index:value pairs")
        s.add_argument("--out", default="-")

    s = sub.add_parser("signal", help="write a random sparse signal")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--signing", choices=("signed", "unsigned"), default="signed")
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--out", default="-")

    s = sub.add_parser("verify", help="girth and maximality audit of a graph or matrix file")
    s.add_argument("path")
    s.add_argument("--skip-maximality", action="store_true")

    s = sub.add_parser("bench", help="phase-transition benchmark")
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--delta", default="0.1:1:9", help="start:stop:steps or comma list")
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--signal", choices=("signed", "unsigned"), default="signed")
    s.add_argument("--ensembles", default=",".join(ENSEMBLES))
    s.add_argument("--bar", type=float, default=0.99)
    s.add_argument("--threshold", type=float, default=1e-4)
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--normalize-columns", action="store_true")
    s.add_argument("--hysteresis", type=int, default=2)
    s.add_argument("--k-max", type=int, default=None)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--json", action="store_true")
    s.add_argument("--out", required=True)

    s = sub.add_parser("replay", help="regenerate an artifact from its embedded manifest")
    s.add_argument("source")
    s.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
    except CliError as exc:
        sys.stderr.write(f"error[{CATEGORIES[exc.code]}]: {exc}\n")
        return exc.code
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if not args.command:
        parser.print_usage(sys.stderr)
        sys.stderr.write("error[usage]: no command given\n")
        return EXIT_USAGE
    started = time.perf_counter()
    try:
        code = COMMANDS[args.command](args)
    except CliError as exc:
        sys.stderr.write(f"error[{CATEGORIES[exc.code]}]: {exc}\n")
        return exc.code
    except (MatrixMarketError, ZeroColumnError) as exc:
        sys.stderr.write(f"error[input-format]: {exc}\n")
        return EXIT_INPUT
    except ValueError as exc:
        sys.stderr.write(f"error[usage]: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"error[io]: {exc}\n")
        return EXIT_IO
    log.info("%s finished in %.3f s", args.command, time.perf_counter() - started)
    return code


if __name__ == "__main__":
    sys.exit(main())
