"""``commkit`` command-line interface.

Exit codes: 0 success, 2 bad arguments or input, 3 the requested method is
undefined on the input (for example a divergent Katz series), 1 any other
failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import benchgen, experiments, hierclust, proximity
from ._validation import default_seed
from .embedding import TrainConfig, canonical_method, dump_embedding, embed
from .exceptions import ArgumentError, CommkitError, MethodUndefinedError, ValidationError
from .graph import read_edge_list, write_edge_list
from .metrics import adjusted_rand, modularity
from .partition import read_partition, write_partition
from .pipelines import PipelineSpec

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_UNDEFINED = 0, 1, 2, 3

# training flag -> TrainConfig field
_TRAIN_FLAGS = {
    "epochs": int, "lr": float, "walks_per_vertex": int, "walk_length": int, "window": int,
    "negatives": int, "p": float, "q": float, "lambda_reg": float, "hidden": int,
    "noise_prob": float, "ppmi_alpha": float, "ppmi_length": int, "activation": str,
    "grarep_order": int, "hope_measure": str, "hope_beta": float, "hope_alpha": float,
}


def _add_measure_flags(p):
    p.add_argument("--beta", type=float, help="Katz decay")
    p.add_argument("--alpha", type=float, help="RPR return / PPMI continuation probability")
    p.add_argument("--ksteps", type=int, help="K-step walk length")
    p.add_argument("--length", type=int, help="PPMI surfing length")
    p.add_argument("--iters", type=int, help="Blondel-Gajardo iterations")


def _add_train_flags(p):
    g = p.add_argument_group("training")
    g.add_argument("--dim", type=int, default=6)
    for name, typ in _TRAIN_FLAGS.items():
        g.add_argument("--" + name.replace("_", "-"), dest=name, type=typ)


def _measure_params(args) -> dict:
    raw = {"beta": args.beta, "alpha": args.alpha, "k_steps": args.ksteps,
           "length": args.length, "iters": args.iters}
    return {k: v for k, v in raw.items() if v is not None}


def _train_overrides(args) -> dict:
    return {("learning_rate" if k == "lr" else k): getattr(args, k) for k in _TRAIN_FLAGS}


def _train_config(args) -> TrainConfig:
    return TrainConfig(dim=args.dim, seed=args.seed).updated(**_train_overrides(args))


def cmd_detect(args) -> int:
    G = read_edge_list(args.graph)
    if args.framework == "repr":
        train = {k: v for k, v in _train_overrides(args).items() if v is not None}
        spec = PipelineSpec("representation", canonical_method(args.measure), args.clustering,
                            args.g, train, args.dim)
    else:
        spec = PipelineSpec(args.framework, proximity.canonical_measure(args.measure), args.clustering,
                            args.g, _measure_params(args), eig=args.eig)
    est = spec.estimator(args.k, args.seed).fit(G)
    part = est.partition_
    out = Path(args.out) if args.out else Path(args.graph).with_suffix(".partition")
    write_partition(part, out)
    if args.dendrogram:
        with open(args.dendrogram, "w") as fh:
            hierclust.dump_dendrogram(est.dendrogram_, fh)
    if args.truth:
        print(f"ari={adjusted_rand(read_partition(args.truth), part)!r}")
    try:
        print(f"modularity={modularity(G, part)!r}")
    except MethodUndefinedError:
        print("modularity=nan")
    return EXIT_OK


def cmd_benchmark(args) -> int:
    if args.methods == "all":
        specs = experiments.all_methods()
    else:
        specs = experiments.read_methods(Path(args.methods).read_text())
    graphs = experiments.grid_specs(args.grid)
    if args.limit is not None:
        graphs = graphs[: args.limit]

    def progress(done, total):
        if args.verbose:
            print(f"\r{done}/{total} graphs", end="", file=sys.stderr, flush=True)

    rows = experiments.run_sweep(graphs, specs, args.jobs, args.seed, not args.no_timing, progress)
    if args.verbose:
        print(file=sys.stderr)
    with open(args.out, "w", newline="") as fh:
        experiments.write_csv(rows, fh)
    failed = sum(r["status"] != "ok" for r in rows)
    print(f"wrote {len(rows)} rows ({failed} failed) to {args.out}")
    return EXIT_OK


def cmd_report(args) -> int:
    with open(args.csv, newline="") as fh:
        rows = experiments.read_csv(fh)
    print(experiments.format_report(experiments.summarize(rows)))
    return EXIT_OK


def cmd_generate_sbm(args) -> int:
    spec = benchgen.SbmSpec(args.clusters, args.size, args.p_in, args.p_out, args.seed)
    lg = benchgen.generate_sbm(spec)
    out = Path(args.out)
    write_edge_list(lg.graph, out)
    write_partition(lg.ground_truth, out.with_suffix(".truth"))
    print(f"wrote {out} ({lg.graph.n_vertices} vertices, {lg.graph.n_edges} edges) and {out.with_suffix('.truth')}")
    return EXIT_OK


def cmd_realworld(args) -> int:
    methods = experiments.REALWORLD_METHODS
    if args.skip_embeddings:
        methods = tuple(m for m in methods if not m[1].startswith("repr"))
    print(experiments.format_realworld(experiments.run_realworld(methods, args.seed)))
    return EXIT_OK


def cmd_embed(args) -> int:
    G = read_edge_list(args.graph)
    emb = embed(G, args.method, _train_config(args))
    if args.out:
        with open(args.out, "w") as fh:
            dump_embedding(emb, fh)
    else:
        dump_embedding(emb, sys.stdout)
    return EXIT_OK


def cmd_proximity(args) -> int:
    G = read_edge_list(args.graph)
    P = proximity.compute(G, args.measure, **_measure_params(args))
    if args.dissimilarity:
        P = proximity.as_dissimilarity(P)
    if args.out:
        with open(args.out, "w") as fh:
            proximity.dump_matrix(P.matrix, fh)
    else:
        proximity.dump_matrix(P.matrix, sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="commkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def seed_flag(p):
        p.add_argument("--seed", type=int, default=None,
                       help="random seed (default: $COMMKIT_SEED or 0)")

    p = sub.add_parser("detect", help="detect communities in one graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--framework", required=True, choices=("node", "spectral", "repr"))
    p.add_argument("--measure", required=True, help="proximity measure, or embedding method for repr")
    p.add_argument("--clustering", required=True, choices=hierclust.METHODS)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--g", type=float, default=0.3, help="Genie Gini threshold")
    p.add_argument("--eig", choices=("largest", "smallest"), default="largest")
    p.add_argument("--truth")
    p.add_argument("--out", help="partition output (default: GRAPH with .partition suffix)")
    p.add_argument("--dendrogram", help="also write the merge sequence here")
    _add_measure_flags(p)
    _add_train_flags(p)
    seed_flag(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("benchmark", help="sweep methods over the SBM grid")
    p.add_argument("--grid", choices=("full", "small"), default="small")
    p.add_argument("--methods", default="all", help="method list file, or 'all'")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--limit", type=int, help="only the first N graphs of the grid")
    p.add_argument("--no-timing", action="store_true", help="leave time_s empty (byte-reproducible output)")
    p.add_argument("--verbose", action="store_true")
    seed_flag(p)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("report", help="aggregate a benchmark CSV per method")
    p.add_argument("csv")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("generate-sbm", help="sample one stochastic block model graph")
    p.add_argument("--clusters", type=int, required=True)
    p.add_argument("--size", type=int, required=True, help="vertices per cluster")
    p.add_argument("--p-in", type=float, required=True)
    p.add_argument("--p-out", type=float, required=True)
    p.add_argument("--out", required=True)
    seed_flag(p)
    p.set_defaults(func=cmd_generate_sbm)

    p = sub.add_parser("realworld", help="Karate and Dolphins comparison table")
    p.add_argument("--skip-embeddings", action="store_true")
    seed_flag(p)
    p.set_defaults(func=cmd_realworld)

    p = sub.add_parser("embed", help="dump a node embedding")
    p.add_argument("--graph", required=True)
    p.add_argument("--method", required=True)
    p.add_argument("--out")
    _add_train_flags(p)
    seed_flag(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("proximity", help="dump a proximity matrix")
    p.add_argument("--graph", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--dissimilarity", action="store_true", help="convert similarities to dissimilarities")
    p.add_argument("--out")
    _add_measure_flags(p)
    seed_flag(p)
    p.set_defaults(func=cmd_proximity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "seed", None) is None and "seed" in args:
            args.seed = default_seed()
        return args.func(args)
    except MethodUndefinedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except (ArgumentError, ValidationError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CommkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except BrokenPipeError:
        # downstream reader closed early (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
