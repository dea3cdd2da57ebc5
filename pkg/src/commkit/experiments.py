"""Benchmark sweeps, method lists, result records and aggregation."""

from __future__ import annotations

import csv
import io
import itertools
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import benchgen, proximity
from .baselines import BASELINES
from .embedding import METHODS as EMBEDDING_METHODS
from .embedding import TrainConfig
from .exceptions import ArgumentError, CommkitError
from .graph import Graph
from .metrics import adjusted_rand, modularity
from .pipelines import PipelineSpec

CSV_HEADER = ("graph_id", "framework", "method", "params", "clustering", "g", "k",
              "ari", "modularity", "time_s", "seed", "status")

LINKAGES = ("single", "complete", "average", "ward")
GINI_THRESHOLDS = (0.1, 0.3, 0.5)
MEASURE_GRID = {
    "wasserman_faust": [{}],
    "adamic_adar": [{}],
    "overlap": [{}],
    "k_step": [{"k_steps": k} for k in (1, 3, 5)],
    "katz": [{"beta": b} for b in (0.1, 0.3, 0.5)],
    "rooted_pagerank": [{"alpha": a} for a in (0.0, 0.1, 0.3)],
    "ppmi": [{"alpha": a} for a in (0.7, 0.9, 1.0)],
    "blondel_gajardo": [{"iters": t} for t in (1, 10, 100)],
}
EMBEDDING_DIMS = (6, 12)

# CLI/method-file spelling -> canonical parameter name
_PARAM_KEYS = {"ksteps": "k_steps", "k_steps": "k_steps", "beta": "beta", "alpha": "alpha",
               "length": "length", "iters": "iters"}
_TRAIN_KEYS = {f.name for f in fields(TrainConfig)} - {"dim", "seed"}


_BASELINE_ALIASES = {"lpa": "label_propagation", "greedy": "greedy_modularity"}


@dataclass(frozen=True)
class BaselineSpec:
    """A reference algorithm that chooses its own number of communities."""

    method: str

    def __post_init__(self):
        if self.method not in BASELINES:
            raise ArgumentError(f"unknown baseline {self.method!r}; choose from {sorted(BASELINES)}")

    framework = "baseline"

    def label(self) -> str:
        return f"baseline {self.method}"


def _coerce(value: str):
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value


def parse_method(line: str):
    """Parse ``framework method [clustering] [key=value ...]``.

    Examples: ``node ppmi genie g=0.1 alpha=1``, ``spectral katz ward beta=0.3``,
    ``repr dngr ward dim=6 epochs=50``, ``baseline louvain``.
    """
    tokens = line.split()
    if len(tokens) < 2:
        raise ArgumentError(f"method line needs at least a framework and a method: {line!r}")
    framework, method = tokens[0].lower(), tokens[1]
    if framework == "baseline":
        if len(tokens) > 2:
            raise ArgumentError(f"baselines take no options: {line!r}")
        method = method.lower()
        return BaselineSpec(_BASELINE_ALIASES.get(method, method))
    if framework == "repr":
        framework = "representation"
    rest = tokens[2:]
    clustering = "average"
    if rest and "=" not in rest[0]:
        clustering = rest.pop(0).lower()
    options = {}
    for tok in rest:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ArgumentError(f"expected key=value, got {tok!r} in {line!r}")
        options[key.lower().replace("-", "_")] = _coerce(value)
    g = float(options.pop("g", 0.3))
    dim = options.pop("dim", None)
    eig = options.pop("eig", "largest")
    params = {}
    for key, value in options.items():
        if framework == "representation" and key in _TRAIN_KEYS:
            params[key] = value
        elif framework != "representation" and key in _PARAM_KEYS:
            params[_PARAM_KEYS[key]] = value
        else:
            raise ArgumentError(f"option {key!r} does not apply to the {framework} framework")
    if framework != "representation":
        method = proximity.canonical_measure(method)
    return PipelineSpec(framework, method, clustering, g, params, dim, eig)


def read_methods(text: str) -> list:
    specs = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            specs.append(parse_method(line))
    if not specs:
        raise ArgumentError("method list is empty")
    return specs


def _clusterings():
    for linkage in LINKAGES:
        yield linkage, 0.3
    for g in GINI_THRESHOLDS:
        yield "genie", g


def all_methods() -> list:
    """Every framework/measure/parameter/linkage combination plus the baselines."""
    specs = []
    for framework in ("node", "spectral"):
        for measure, grid in MEASURE_GRID.items():
            for params, (cl, g) in itertools.product(grid, _clusterings()):
                specs.append(PipelineSpec(framework, measure, cl, g, dict(params)))
    for method, dim in itertools.product(EMBEDDING_METHODS, EMBEDDING_DIMS):
        for cl, g in _clusterings():
            specs.append(PipelineSpec("representation", method, cl, g, {}, dim))
    specs.extend(BaselineSpec(b) for b in sorted(BASELINES))
    return specs


def run_seed(base_seed: int, graph_seed: int, label: str) -> int:
    """Per-run seed derived from the run's identity, never from scheduling."""
    ss = np.random.SeedSequence([int(base_seed) & 0xFFFFFFFF, int(graph_seed), zlib.crc32(label.encode())])
    return int(ss.generate_state(1, np.uint32)[0])


def _params_field(spec) -> str:
    if isinstance(spec, BaselineSpec):
        return ""
    items = dict(spec.params)
    if spec.dim is not None:
        items["dim"] = spec.dim
    if spec.framework == "spectral" and spec.eig != "largest":
        items["eig"] = spec.eig
    return ";".join(f"{k}={v}" for k, v in sorted(items.items()))


def _fmt(x) -> str:
    return "" if x is None else f"{x:.17g}"


def run_one(graph_id: str, G: Graph, truth, spec, seed: int, timing: bool = True) -> dict:
    """Run one (graph, method) pair and return a CSV record; failures become tagged rows."""
    is_base = isinstance(spec, BaselineSpec)
    row = {
        "graph_id": graph_id,
        "framework": spec.framework,
        "method": spec.method,
        "params": _params_field(spec),
        "clustering": "" if is_base else spec.clustering,
        "g": "" if is_base or spec.clustering != "genie" else f"{spec.gini_threshold:g}",
        "k": "",
        "ari": "",
        "modularity": "",
        "time_s": "",
        "seed": str(seed),
        "status": "ok",
    }
    t0 = time.perf_counter()
    try:
        if is_base:
            part = BASELINES[spec.method](G, seed)
        else:
            part = spec.estimator(truth.k, seed).fit(G).partition_
    except CommkitError as exc:
        row["status"] = f"error:{type(exc).__name__}"
        return row
    elapsed = time.perf_counter() - t0
    row["k"] = str(part.k)
    row["ari"] = _fmt(adjusted_rand(truth, part))
    try:
        row["modularity"] = _fmt(modularity(G, part))
    except CommkitError:
        pass
    if timing:
        row["time_s"] = _fmt(elapsed)
    return row


def _run_graph(task) -> list[dict]:
    sbm, specs, base_seed, timing = task
    lg = benchgen.generate_sbm(sbm)
    return [
        run_one(sbm.graph_id, lg.graph, lg.ground_truth, spec,
                run_seed(base_seed, sbm.seed, spec.label()), timing)
        for spec in specs
    ]


def grid_specs(grid: str) -> list:
    if grid == "full":
        return list(benchgen.benchmark_grid())
    if grid == "small":
        return list(benchgen.small_grid())
    raise ArgumentError(f"grid must be 'full' or 'small', got {grid!r}")


def run_sweep(graphs, specs, jobs: int = 1, base_seed: int = 0, timing: bool = True, progress=None) -> list[dict]:
    """Run every method on every SBM spec; rows come back sorted.

    Each worker process handles whole graphs. Row content depends only on
    the graph spec, the method and ``base_seed``.
    """
    tasks = [(g, specs, base_seed, timing) for g in graphs]
    rows = []
    if jobs <= 1:
        results = map(_run_graph, tasks)
        for i, chunk in enumerate(results):
            rows.extend(chunk)
            if progress:
                progress(i + 1, len(tasks))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, chunk in enumerate(pool.map(_run_graph, tasks, chunksize=1)):
                rows.extend(chunk)
                if progress:
                    progress(i + 1, len(tasks))
    return sort_rows(rows)


def sort_rows(rows):
    return sorted(rows, key=lambda r: tuple(r[c] for c in CSV_HEADER))


def write_csv(rows, fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def read_csv(fh) -> list[dict]:
    reader = csv.DictReader(fh)
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ArgumentError(f"unexpected CSV header {reader.fieldnames}")
    return list(reader)


@dataclass(frozen=True)
class Summary:
    key: tuple
    runs: int
    failures: int
    ari_mean: float
    ari_sd: float
    time_mean: float

    @property
    def label(self) -> str:
        framework, method, params, clustering, g = self.key
        bits = [framework, method, clustering, f"g={g}" if g else "", params]
        return " ".join(b for b in bits if b)


def _mean_sd(values):
    if not values:
        return math.nan, math.nan
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std(ddof=1)) if arr.size > 1 else 0.0


def summarize(rows) -> list[Summary]:
    """Mean and sample standard deviation of ARI and time per method."""
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        key = (r["framework"], r["method"], r["params"], r["clustering"], r["g"])
        groups.setdefault(key, []).append(r)
    out = []
    for key in sorted(groups):
        ok = [r for r in groups[key] if r["status"] == "ok"]
        ari_mean, ari_sd = _mean_sd([float(r["ari"]) for r in ok])
        times = [float(r["time_s"]) for r in ok if r["time_s"]]
        out.append(Summary(key, len(groups[key]), len(groups[key]) - len(ok), ari_mean, ari_sd,
                           float(np.mean(times)) if times else math.nan))
    return out


def format_report(summaries) -> str:
    width = max([len(s.label) for s in summaries] + [6])
    lines = [f"{'Method':<{width}}  {'Rand score':>15}  {'Time [s]':>9}  {'runs':>5}  {'failed':>6}"]
    for s in sorted(summaries, key=lambda s: (-np.nan_to_num(s.ari_mean, nan=-np.inf), s.label)):
        rand = f"{s.ari_mean:.2f} ± {s.ari_sd:.2f}" if not math.isnan(s.ari_mean) else "n/a"
        t = f"{s.time_mean:.3f}" if not math.isnan(s.time_mean) else "n/a"
        lines.append(f"{s.label:<{width}}  {rand:>15}  {t:>9}  {s.runs:>5}  {s.failures:>6}")
    return "\n".join(lines)


# ---------------------------------------------------------------- real-world

REALWORLD_METHODS = (
    ("Node Genie PPMI", "node ppmi genie g=0.1 alpha=1 length=20"),
    ("Node Genie W-F", "node wasserman_faust genie g=0.1"),
    ("Node Average PPMI", "node ppmi average alpha=1 length=20"),
    ("Node Average RPR", "node rooted_pagerank average alpha=0.3"),
    ("Spectral Genie K-step", "spectral k_step genie g=0.1 ksteps=5"),
    ("Spectral Ward Katz", "spectral katz ward beta=0.3"),
    ("Euclidean Genie DNGR", "repr dngr genie g=0.1 dim=6"),
    ("Euclidean Ward DNGR", "repr dngr ward dim=6"),
    ("Euclidean Ward Node2Vec", "repr node2vec ward dim=6"),
    ("Louvain", "baseline louvain"),
    ("Greedy modularity", "baseline greedy_modularity"),
    ("Label propagation", "baseline label_propagation"),
)
DOLPHINS_K = range(2, 9)


@dataclass(frozen=True)
class RealWorldResult:
    name: str
    karate_ari: float | None
    karate_time: float
    dolphins_modularity: float | None
    dolphins_k: int | None
    dolphins_time: float
    error: str = ""


def _karate(spec, seed):
    lg = benchgen.load_builtin("karate")
    t0 = time.perf_counter()
    if isinstance(spec, BaselineSpec):
        part = BASELINES[spec.method](lg.graph, seed)
    else:
        part = spec.estimator(lg.ground_truth.k, seed).fit(lg.graph).partition_
    return adjusted_rand(lg.ground_truth, part), time.perf_counter() - t0


def best_k_modularity(G: Graph, spec, seed: int = 0, ks=DOLPHINS_K):
    """Highest-modularity cut over ``ks`` from a single fitted dendrogram.

    Returns ``(modularity, K)``; ties keep the smaller ``K``.
    """
    if isinstance(spec, BaselineSpec):
        part = BASELINES[spec.method](G, seed)
        return modularity(G, part), part.k
    best = None
    if spec.framework == "spectral":
        # the eigenvector count depends on K, so each K is a separate fit
        for k in ks:
            q = modularity(G, spec.estimator(k, seed).fit(G).partition_)
            if best is None or q > best[0]:
                best = (q, k)
        return best
    est = spec.estimator(min(ks), seed).fit(G)
    for k in ks:
        q = modularity(G, est.cut(k))
        if best is None or q > best[0]:
            best = (q, k)
    return best


def run_realworld(methods=REALWORLD_METHODS, seed: int = 0) -> list[RealWorldResult]:
    dolphins = benchgen.load_builtin("dolphins")
    out = []
    for name, line in methods:
        spec = parse_method(line)
        try:
            ari, tk = _karate(spec, seed)
            t0 = time.perf_counter()
            q, k = best_k_modularity(dolphins, spec, seed)
            td = time.perf_counter() - t0
        except CommkitError as exc:
            out.append(RealWorldResult(name, None, 0.0, None, None, 0.0, f"{type(exc).__name__}: {exc}"))
            continue
        out.append(RealWorldResult(name, ari, tk, q, k, td))
    return out


def format_realworld(results) -> str:
    width = max(len(r.name) for r in results)
    buf = io.StringIO()
    buf.write(f"{'Method':<{width}}  {'Rand_Karate':>11}  {'T_Karate[s]':>11}  "
              f"{'Mod_Dolphins':>12}  {'K':>2}  {'T_Dolphins[s]':>13}\n")
    for r in results:
        if r.error:
            buf.write(f"{r.name:<{width}}  failed: {r.error}\n")
            continue
        buf.write(f"{r.name:<{width}}  {r.karate_ari:>11.2f}  {r.karate_time:>11.2f}  "
                  f"{r.dolphins_modularity:>12.2f}  {r.dolphins_k:>2}  {r.dolphins_time:>13.2f}\n")
    return buf.getvalue().rstrip("\n")
