"""Command-line front end: detect, sweep, score, info.

``detect`` writes a ``vertex<TAB>community`` TSV (stdout by default) and a
one-line summary on stderr.  ``sweep`` streams a CSV of runs over the
parameter grids.  ``score`` recomputes modularity for a saved assignment.
``info`` prints vertex/edge counts and average degree per graph.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .graph import Graph, GraphParseError, load_graph, preprocess
from .quality import modularity
from .sweep import (
    CSV_HEADER,
    DEFAULT_MAX_LABELS,
    DEFAULT_MEMORY_SIZES,
    DEFAULT_TOLERANCES,
    SweepSpec,
    run_one,
    run_sweep,
)

ALGORITHMS = ("rak", "copra", "slpa")


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("LABELPROP_THREADS", "1")))
    except ValueError:
        return 1


def _add_graph_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="graph file (MatrixMarket or edge list)")
    p.add_argument("--graph-format", choices=("auto", "mtx", "edgelist"), default="auto")
    p.add_argument("--no-self-loops", action="store_true",
                   help="skip the one-self-loop-per-vertex preprocessing step")
    p.add_argument("--keep-weights", action="store_true",
                   help="keep file weights instead of forcing unit weights")


def _add_mode_options(p: argparse.ArgumentParser) -> None:
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strict", action="store_true",
                      help="break weight ties by first label in scan order")
    mode.add_argument("--non-strict", dest="strict", action="store_false",
                      help="break weight ties uniformly at random (default)")
    p.set_defaults(strict=False)


def _load(args) -> Graph:
    raw = load_graph(args.input, args.graph_format)
    return preprocess(
        raw,
        unit_weights=not args.keep_weights,
        self_loops=not args.no_self_loops,
    )


def _ints(text: str) -> tuple:
    return tuple(int(t) for t in text.split(",") if t.strip())


def _floats(text: str) -> tuple:
    return tuple(float(t) for t in text.split(",") if t.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="labelprop",
        description="Label-propagation community detection (RAK, COPRA, SLPA).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="run one detection and emit a community TSV")
    _add_graph_options(p_detect)
    p_detect.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    p_detect.add_argument("--tolerance", type=float, default=None,
                          help="convergence fraction (defaults: rak 0.05, copra 0.01, slpa 0.05)")
    p_detect.add_argument("--max-labels", type=int, default=8, help="copra: labels kept per vertex")
    p_detect.add_argument("--memory-size", type=int, default=20, help="slpa: memory capacity")
    p_detect.add_argument("--max-iterations", type=int, default=100)
    p_detect.add_argument("--threads", type=int, default=_default_threads(),
                          help="worker count; 1 = sequential (env LABELPROP_THREADS)")
    p_detect.add_argument("--seed", type=int, default=1)
    p_detect.add_argument("--output", default="-", help="TSV path, '-' for stdout")
    _add_mode_options(p_detect)

    p_sweep = sub.add_parser("sweep", help="cross parameter grids and stream a CSV of runs")
    p_sweep.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    p_sweep.add_argument("--input", nargs="*", default=[], help="graph files")
    p_sweep.add_argument("--graph-format", choices=("auto", "mtx", "edgelist"), default="auto")
    p_sweep.add_argument("--no-self-loops", action="store_true")
    p_sweep.add_argument("--keep-weights", action="store_true")
    p_sweep.add_argument("--tolerances", type=_floats,
                         default=DEFAULT_TOLERANCES, metavar="T1,T2,...")
    p_sweep.add_argument("--max-labels-grid", type=_ints,
                         default=DEFAULT_MAX_LABELS, metavar="L1,L2,...")
    p_sweep.add_argument("--memory-sizes", type=_ints,
                         default=DEFAULT_MEMORY_SIZES, metavar="M1,M2,...")
    p_sweep.add_argument("--modes", default="strict,non-strict", metavar="MODE1,MODE2")
    p_sweep.add_argument("--workers-grid", type=_ints, default=(1,), metavar="W1,W2,...")
    p_sweep.add_argument("--repetitions", type=int, default=1)
    p_sweep.add_argument("--seed", type=int, default=1)
    p_sweep.add_argument("--output", default="-", help="CSV path, '-' for stdout")

    p_score = sub.add_parser("score", help="modularity of a saved community TSV")
    _add_graph_options(p_score)
    p_score.add_argument("--assignment", required=True, help="vertex<TAB>community TSV")

    p_info = sub.add_parser("info", help="per-graph vertex/edge counts and average degree")
    p_info.add_argument("paths", nargs="+", help="graph files")
    p_info.add_argument("--graph-format", choices=("auto", "mtx", "edgelist"), default="auto")

    return parser


def cmd_detect(args) -> int:
    try:
        graph = _load(args)
    except (OSError, GraphParseError) as exc:
        print(f"labelprop: {exc}", file=sys.stderr)
        return 1
    result = run_one(
        args.algorithm,
        graph,
        mode="strict" if args.strict else "non-strict",
        tolerance=args.tolerance,
        max_labels=args.max_labels,
        memory_size=args.memory_size,
        workers=args.threads,
        seed=args.seed,
        max_iterations=args.max_iterations,
    )
    lines = "".join(f"{v}\t{c}\n" for v, c in enumerate(result.assignment))
    if args.output == "-":
        sys.stdout.write(lines)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(lines)
    print(
        f"vertices={graph.vertex_count} iterations={result.iterations} "
        f"elapsed_ms={result.elapsed * 1000.0:.3f} modularity={result.modularity:.12f}",
        file=sys.stderr,
    )
    return 0


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        algorithm=args.algorithm,
        graphs=tuple(args.input),
        tolerances=tuple(args.tolerances),
        max_labels=tuple(args.max_labels_grid),
        memory_sizes=tuple(args.memory_sizes),
        modes=tuple(m.strip() for m in args.modes.split(",") if m.strip()),
        workers=tuple(args.workers_grid),
        repetitions=args.repetitions,
        seed=args.seed,
    )
    out = sys.stdout if args.output == "-" else open(args.output, "w", encoding="utf-8", newline="\n")
    try:
        print(CSV_HEADER, file=out, flush=True)

        def graphs():
            for path in spec.graphs:
                try:
                    raw = load_graph(path, args.graph_format)
                except (OSError, GraphParseError) as exc:
                    print(f"labelprop: skipping {path}: {exc}", file=sys.stderr)
                    continue
                yield path, preprocess(
                    raw,
                    unit_weights=not args.keep_weights,
                    self_loops=not args.no_self_loops,
                )

        for record in run_sweep(spec, graphs()):
            print(record.csv_row(), file=out, flush=True)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_score(args) -> int:
    try:
        graph = _load(args)
    except (OSError, GraphParseError) as exc:
        print(f"labelprop: {exc}", file=sys.stderr)
        return 1
    n = graph.vertex_count
    communities = np.full(n, -1, dtype=np.int64)
    try:
        with open(args.assignment, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                toks = line.split()
                if len(toks) != 2:
                    print(f"labelprop: line {lineno}: expected 'vertex<TAB>community'", file=sys.stderr)
                    return 1
                v, c = int(toks[0]), int(toks[1])
                if not 0 <= v < n:
                    print(f"labelprop: vertex {v} out of range [0, {n})", file=sys.stderr)
                    return 1
                if communities[v] != -1:
                    print(f"labelprop: duplicate assignment for vertex {v}", file=sys.stderr)
                    return 1
                communities[v] = c
    except OSError as exc:
        print(f"labelprop: {exc}", file=sys.stderr)
        return 1
    except ValueError:
        print("labelprop: non-integer token in assignment file", file=sys.stderr)
        return 1
    missing = np.flatnonzero(communities == -1)
    if missing.size:
        print(f"labelprop: missing assignment for vertex {int(missing[0])}", file=sys.stderr)
        return 1
    # external community ids may be sparse; compact them for scoring
    _, compact = np.unique(communities, return_inverse=True)
    q = modularity(graph, compact.astype(np.int64))
    print(f"{q:.6f}")
    print(f"modularity={q:.12f}", file=sys.stderr)
    return 0


def cmd_info(args) -> int:
    status = 0
    print("graph\tvertices\tedges\tavg_degree")
    for p in args.paths:
        try:
            raw = load_graph(p, args.graph_format)
        except (OSError, GraphParseError) as exc:
            print(f"labelprop: {p}: {exc}", file=sys.stderr)
            status = 1
            continue
        g = preprocess(raw, unit_weights=True, self_loops=False)
        davg = g.edge_count / g.vertex_count if g.vertex_count else 0.0
        print(f"{p}\t{g.vertex_count}\t{g.edge_count}\t{davg:.2f}")
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "detect":
        return cmd_detect(args)
    if args.command == "sweep":
        return cmd_sweep(args)
    if args.command == "score":
        return cmd_score(args)
    return cmd_info(args)


if __name__ == "__main__":
    sys.exit(main())
