"""Command-line front end.

Subcommands:

* ``query``    estimate one forest-matrix entry from fresh samples
* ``replay``   apply an update stream, tracking the maintained forest list
* ``bench``    timing table for static/dynamic queries, updates, dense solve
* ``validate`` self-checks: oracle cross-check, forest validity, uniformity

All CSV output starts with ``#`` comment lines echoing the full run
configuration.  With a fixed ``--seed`` and ``--threads 1`` the CSV content
is byte-for-byte reproducible; wall-clock timings are kept out of it
(``replay`` writes them to a separate file on request).
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import statistics
import sys
import time
from typing import Callable, Iterator, Sequence

import numpy as np

from . import oracle
from .dynamic import PruneConfig, delete_update, insert_update, parse_update_stream, prune
from .estimators import EstimatorParams, required_samples, sfq_query, sfqplus_query
from .forest import Forest, ForestList
from .graph import Digraph, load_edge_list, random_digraph
from .sampling import ForestRng, sample_forest_list


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="forestq",
        description="Forest-matrix entry estimation via sampled spanning converging forests.",
    )
    p.add_argument("--graph", metavar="PATH", help="edge-list file (u v per line)")
    p.add_argument("--mode", choices=("directed", "undirected"), default="directed",
                   help="undirected inserts both directions per line")
    p.add_argument("--seed", type=int, default=0, help="master random seed")
    p.add_argument("--epsilon", type=float, default=0.03, help="accuracy target")
    p.add_argument("--delta", type=float, default=0.01, help="failure probability")
    p.add_argument("--prune-factor", type=float, default=5.0,
                   help="forest list cap as a multiple of its seed size")
    p.add_argument("--threads", type=int, default=1, help="sampling worker streams")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="estimate one entry (i, j)")
    q.add_argument("i", type=int)
    q.add_argument("j", type=int)
    q.add_argument("--method", choices=("sfq", "sfqplus"), default="sfqplus")
    q.add_argument("--samples", type=int, help="override the derived sample count")

    r = sub.add_parser("replay", help="apply an update stream")
    r.add_argument("--stream", required=True, metavar="PATH",
                   help="update file, one 'I u v' or 'D u v' per line")
    r.add_argument("--out", metavar="PATH", help="results CSV (default stdout)")
    r.add_argument("--query", action="append", default=[], metavar="I,J[,METHOD]",
                   help="entry re-estimated after every event; repeatable")
    r.add_argument("--samples", type=int, help="seed list size override")
    r.add_argument("--timings-out", metavar="PATH",
                   help="per-event wall times CSV (not reproducible by nature)")

    b = sub.add_parser("bench", help="timing table on the loaded graph")
    b.add_argument("--samples", type=int, help="forest list size override")
    b.add_argument("--query-reps", type=int, default=100)
    b.add_argument("--update-rounds", type=int, default=50,
                   help="insert+delete rounds applied between the static and dynamic phases")
    b.add_argument("--out", metavar="PATH", help="CSV (default stdout)")

    v = sub.add_parser("validate", help="run the invariant battery")
    v.add_argument("--random", type=int, metavar="N", default=0,
                   help="cross-check N random digraphs (n <= 5) as well")
    v.add_argument("--samples", type=int, default=20000,
                   help="sample count for the uniformity check")
    v.add_argument("--inject-cycle", action="store_true",
                   help="corrupt one sampled forest first (checker self-test; must fail)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler: Callable[[argparse.Namespace], int] = {
        "query": cmd_query,
        "replay": cmd_replay,
        "bench": cmd_bench,
        "validate": cmd_validate,
    }[args.command]
    try:
        return handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


# ---- shared plumbing ----

def _load(args: argparse.Namespace) -> Digraph:
    if not args.graph:
        raise ValueError(f"{args.command} requires --graph")
    res = load_edge_list(args.graph, args.mode)
    if res.duplicates_dropped or res.self_loops_dropped:
        print(
            f"note: dropped {res.duplicates_dropped} duplicate edges, "
            f"{res.self_loops_dropped} self-loops",
            file=sys.stderr,
        )
    return res.graph


def _params(args: argparse.Namespace) -> EstimatorParams:
    return EstimatorParams(args.epsilon, args.delta)


def _config_lines(args: argparse.Namespace, g: Digraph | None = None) -> list[str]:
    lines = [
        f"# forestq {args.command}",
        f"# graph={args.graph} mode={args.mode} seed={args.seed} epsilon={args.epsilon}"
        f" delta={args.delta} prune_factor={args.prune_factor} threads={args.threads}",
    ]
    if g is not None:
        lines.append(f"# n={g.n} m={g.m}")
    return lines


@contextlib.contextmanager
def _open_out(path: str | None) -> Iterator:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


# ---- query ----

def cmd_query(args: argparse.Namespace) -> int:
    g = _load(args)
    i, j = args.i, args.j
    for x in (i, j):
        if not 0 <= x < g.n:
            raise ValueError(f"node {x} out of range [0, {g.n})")
    count = args.samples
    if count is None:
        count = required_samples(_params(args), g.out_degree(j), diagonal=(i == j))
    rng = ForestRng(args.seed)
    t0 = time.perf_counter()
    forests = sample_forest_list(g, count, rng, workers=args.threads)
    t1 = time.perf_counter()
    if args.method == "sfq":
        est = sfq_query(forests, i, j)
    else:
        est = sfqplus_query(g, forests, i, j)
    t2 = time.perf_counter()
    print(
        f"entry=({i},{j}) method={est.estimator} value={est.value!r} "
        f"samples={count} sample_seconds={t1 - t0:.4f} query_seconds={t2 - t1:.4f}"
    )
    return 0


# ---- replay ----

def _parse_query_specs(specs: list[str], n: int) -> list[tuple[int, int, str]]:
    out = []
    for spec in specs:
        parts = spec.split(",")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad --query {spec!r}, expected I,J[,METHOD]")
        i, j = int(parts[0]), int(parts[1])
        method = parts[2] if len(parts) == 3 else "sfqplus"
        if method not in ("sfq", "sfqplus"):
            raise ValueError(f"bad --query method {method!r}")
        for x in (i, j):
            if not 0 <= x < n:
                raise ValueError(f"--query node {x} out of range [0, {n})")
        out.append((i, j, method))
    return out


def cmd_replay(args: argparse.Namespace) -> int:
    g = _load(args)
    events = parse_update_stream(args.stream)
    queries = _parse_query_specs(args.query, g.n)
    count = args.samples
    if count is None:
        count = required_samples(_params(args), diagonal=True)
    if count < 1:
        raise ValueError("--samples must be >= 1")
    cfg = PruneConfig(count, args.prune_factor)
    rng = ForestRng(args.seed)
    forests = sample_forest_list(g, count, rng, workers=args.threads)

    def run_queries() -> list[float]:
        vals = []
        for i, j, method in queries:
            if method == "sfq":
                vals.append(sfq_query(forests, i, j).value)
            else:
                vals.append(sfqplus_query(g, forests, i, j).value)
        return vals

    timing_rows: list[list] = []
    with _open_out(args.out) as fh:
        for line in _config_lines(args, g):
            fh.write(line + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        header = ["seq", "kind", "u", "v", "total_weight", "distinct"]
        header += [f"q_{i}_{j}_{m}" for i, j, m in queries]
        writer.writerow(header)
        writer.writerow([-1, "init", "", "", forests.total_weight, len(forests)]
                        + [repr(v) for v in run_queries()])
        for ev in events:
            t0 = time.perf_counter()
            if ev.kind == "insert":
                insert_update(g, forests, ev.edge)
            else:
                delete_update(g, forests, ev.edge)
            t1 = time.perf_counter()
            if forests.total_weight > cfg.threshold:
                prune(forests, cfg, rng)
            t2 = time.perf_counter()
            values = run_queries()
            t3 = time.perf_counter()
            writer.writerow(
                [ev.sequence, ev.kind, ev.edge[0], ev.edge[1],
                 forests.total_weight, len(forests)]
                + [repr(v) for v in values]
            )
            timing_rows.append(
                [ev.sequence, ev.kind, f"{t1 - t0:.6f}", f"{t2 - t1:.6f}", f"{t3 - t2:.6f}"]
            )
    if args.timings_out:
        with open(args.timings_out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["seq", "kind", "update_seconds", "prune_seconds", "query_seconds"])
            writer.writerows(timing_rows)
    return 0


# ---- bench ----

def _median_query_seconds(
    g: Digraph, forests: ForestList, pairs: list[tuple[int, int]], method: str
) -> float:
    times = []
    for i, j in pairs:
        t0 = time.perf_counter()
        if method == "sfq":
            sfq_query(forests, i, j)
        else:
            sfqplus_query(g, forests, i, j)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def cmd_bench(args: argparse.Namespace) -> int:
    g = _load(args)
    if g.n < 2:
        raise ValueError("bench needs at least 2 nodes")
    count = args.samples
    if count is None:
        count = required_samples(_params(args), diagonal=True)
    cfg = PruneConfig(count, args.prune_factor)
    rng = ForestRng(args.seed)
    pick = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed + 1)))

    t0 = time.perf_counter()
    forests = sample_forest_list(g, count, rng, workers=args.threads)
    build_seconds = time.perf_counter() - t0

    def random_pairs(k: int) -> list[tuple[int, int]]:
        out = []
        for _ in range(k):
            i = int(pick.integers(g.n))
            j = i if pick.random() < 0.5 else int(pick.integers(g.n))
            out.append((i, j))
        return out

    static_pairs = random_pairs(args.query_reps)
    sfq_static = _median_query_seconds(g, forests, static_pairs, "sfq")
    sfqplus_static = _median_query_seconds(g, forests, static_pairs, "sfqplus")

    update_times = []
    for _ in range(args.update_rounds):
        edge = _random_absent_edge(g, pick)
        if edge is not None:
            t0 = time.perf_counter()
            insert_update(g, forests, edge)
            if forests.total_weight > cfg.threshold:
                prune(forests, cfg, rng)
            update_times.append(time.perf_counter() - t0)
        edge = _random_present_edge(g, pick)
        if edge is not None:
            t0 = time.perf_counter()
            delete_update(g, forests, edge)
            if forests.total_weight > cfg.threshold:
                prune(forests, cfg, rng)
            update_times.append(time.perf_counter() - t0)
    update_median = statistics.median(update_times) if update_times else float("nan")

    dynamic_pairs = random_pairs(args.query_reps)
    sfq_dynamic = _median_query_seconds(g, forests, dynamic_pairs, "sfq")
    sfqplus_dynamic = _median_query_seconds(g, forests, dynamic_pairs, "sfqplus")

    solver_seconds = ""
    if g.n <= oracle.DENSE_NODE_LIMIT:
        t0 = time.perf_counter()
        oracle.exact_forest_matrix(g)
        solver_seconds = f"{time.perf_counter() - t0:.6f}"

    with _open_out(args.out) as fh:
        for line in _config_lines(args, g):
            fh.write(line + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["n", "m", "samples", "build_seconds", "sfq_static", "sfqplus_static",
             "update_median", "sfq_dynamic", "sfqplus_dynamic", "solver_seconds"]
        )
        writer.writerow(
            [g.n, g.m, count, f"{build_seconds:.6f}", f"{sfq_static:.6f}",
             f"{sfqplus_static:.6f}", f"{update_median:.6f}", f"{sfq_dynamic:.6f}",
             f"{sfqplus_dynamic:.6f}", solver_seconds]
        )
    return 0


def _random_absent_edge(g: Digraph, pick: np.random.Generator) -> tuple[int, int] | None:
    if g.m >= g.n * (g.n - 1):
        return None
    while True:
        u = int(pick.integers(g.n))
        v = int(pick.integers(g.n))
        if u != v and not g.has_edge(u, v):
            return (u, v)


def _random_present_edge(g: Digraph, pick: np.random.Generator) -> tuple[int, int] | None:
    if g.m == 0:
        return None
    edges = list(g.edges())
    return edges[int(pick.integers(len(edges)))]


# ---- validate ----

def cmd_validate(args: argparse.Namespace) -> int:
    if not args.graph and not args.random:
        raise ValueError("validate needs --graph and/or --random N")
    checks: list[tuple[str, bool, str]] = []

    if args.random:
        gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed)))
        worst = ""
        ok = True
        for k in range(args.random):
            n = int(gen.integers(1, 6))
            m = int(gen.integers(0, n * (n - 1) + 1)) if n > 1 else 0
            report = oracle.cross_check(random_digraph(n, m, gen))
            if not report.ok:
                ok = False
                worst = report.summary()
                break
        checks.append(
            ("random-digraph cross-check", ok,
             worst or f"{args.random} graphs, oracles agree within 1e-10")
        )

    if args.graph:
        res = load_edge_list(args.graph, args.mode)
        g = res.graph
        print(f"# loaded n={g.n} m={g.m} duplicates_dropped={res.duplicates_dropped} "
              f"self_loops_dropped={res.self_loops_dropped}")
        checks.extend(_graph_battery(g, args))

    failed = False
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok:
            failed = True
    return 1 if failed else 0


def _graph_battery(g: Digraph, args: argparse.Namespace) -> list[tuple[str, bool, str]]:
    checks: list[tuple[str, bool, str]] = []

    try:
        report = oracle.cross_check(g)
        checks.append(("oracle cross-check", report.ok, report.summary()))
        forest_count = report.forest_count
    except ValueError as exc:
        checks.append(("oracle cross-check", True, f"skipped: {exc}"))
        forest_count = 0

    rng = ForestRng(args.seed)
    probe = sample_forest_list(g, min(200, max(args.samples, 1)), rng)
    if args.inject_cycle and g.n >= 2:
        bad = probe.forests[0]
        bad.successor[0] = 1
        bad.successor[1] = 0
        bad.dirty = True
    errors: list[str] = []
    for f in probe:
        errors.extend(f.invariant_errors(g))
        if errors:
            break
    checks.append(
        ("sampled forests valid", not errors,
         "; ".join(errors) if errors else f"{len(probe)} forests checked")
    )

    if 2 <= forest_count and args.samples >= 20 * forest_count:
        from scipy import stats

        fs = oracle.enumerate_forests(g)
        rng2 = ForestRng(args.seed + 1)
        batch = sample_forest_list(g, args.samples, rng2)
        counts = dict.fromkeys(fs.forests, 0)
        unknown = 0
        for f in batch:
            key = f.as_tuple()
            if key in counts:
                counts[key] += 1
            else:
                unknown += 1
        if unknown:
            checks.append(("sampler uniformity", False, f"{unknown} samples are not forests of the graph"))
        else:
            pvalue = stats.chisquare(list(counts.values())).pvalue
            checks.append(
                ("sampler uniformity", pvalue >= 0.001,
                 f"chi-square p={pvalue:.4f} over {forest_count} forests, {args.samples} samples")
            )
    else:
        checks.append(("sampler uniformity", True, "skipped: graph not enumerable at this sample budget"))

    if 1 <= g.n <= 4:
        ok, detail = _exact_update_uniformity(g)
        checks.append(("single-edge updates preserve uniformity", ok, detail))
    else:
        checks.append(("single-edge updates preserve uniformity", True, "skipped: n > 4"))

    return checks


def _exact_update_uniformity(g: Digraph) -> tuple[bool, str]:
    base = oracle.enumerate_forests(g)
    tested = 0
    for u in range(g.n):
        for v in range(g.n):
            if u == v:
                continue
            g2 = g.copy()
            forests = ForestList(
                Forest(np.array(f, dtype=np.int32)) for f in base.forests
            )
            if g2.has_edge(u, v):
                delete_update(g2, forests, (u, v))
            else:
                insert_update(g2, forests, (u, v))
            target = oracle.enumerate_forests(g2)
            agg = forests.weight_by_forest()
            weights = {agg.get(f, 0) for f in target.forests}
            if len(agg) != target.size or len(weights) != 1 or 0 in weights:
                return False, f"non-uniform list after {'delete' if g.has_edge(u, v) else 'insert'} ({u}, {v})"
            tested += 1
    return True, f"{tested} single-edge updates, all exactly uniform"


if __name__ == "__main__":
    sys.exit(main())
