"""Command-line entry point: generate graphs, analyze them, scan gaps, run dynamics, sweep families."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__
from .accondition import NODE_COUNT, QUBIT_COUNT, classify
from .dynamics import DynamicsError, evolve, overlap_curves, write_evolution_csv
from .graphs import (Graph, GraphError, GrkParams, generate_bipartite_circulant,
                     generate_complete_bipartite, generate_cycle, generate_d4_ladder,
                     generate_grk, grk_layout, serialize_edge_list)
from .locgraph import build_gloc, conductance
from .maxcut import DEFAULT_ENUM_CAP, CostModel, SpectrumError, spectrum_stats
from .spectrum import AnnealHamiltonian, EigenSolverError, gap_scan, scaling_fit
from .validation import check_graph

OUTPUT_ENV = "ANTICROSS_OUTPUT_DIR"


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    graph: str
    fixed_node: int | None = None
    grid: int | None = None
    refine: bool | None = None
    t_max: list[float] | None = None
    dt: float | None = None
    seed: int = 0
    enum_cap: int = DEFAULT_ENUM_CAP
    extra: dict = field(default_factory=dict)
    version: str = __version__

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


# ---------------------------------------------------------------- graph sources

def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def graph_from_spec(spec: str) -> tuple[Graph, int, str]:
    """Resolve ``spec`` to ``(graph, default fixed node, label)``.

    ``spec`` is an edge-list path or a generator: ``edge``, ``cycle:N``,
    ``kab:A,B``, ``grk:R,L,K``, ``ladder:K``, ``circulant:N:J1,J2,...``.
    """
    if os.path.exists(spec):
        return check_graph(spec), 0, os.path.splitext(os.path.basename(spec))[0]
    kind, _, rest = spec.partition(":")
    try:
        if kind == "edge" and not rest:
            return Graph(2, ((0, 1),)), 0, "edge"
        if kind == "cycle":
            return generate_cycle(int(rest)), 0, f"cycle_{int(rest)}"
        if kind == "kab":
            a, b = _ints(rest)
            return generate_complete_bipartite(a, b), 0, f"k_{a}_{b}"
        if kind == "grk":
            p = GrkParams(*_ints(rest))
            return generate_grk(p), grk_layout(p)["ll_left"][0], f"grk_{p.r}_{p.l}_{p.k}"
        if kind == "ladder":
            return generate_d4_ladder(int(rest)), 0, f"ladder_{int(rest)}"
        if kind == "circulant":
            n, _, jumps = rest.partition(":")
            js = _ints(jumps)
            return (generate_bipartite_circulant(int(n), js), 0,
                    f"circulant_{int(n)}_" + "_".join(map(str, js)))
    except (TypeError, ValueError) as exc:
        raise CliError(f"bad graph spec {spec!r}: {exc}") from exc
    raise CliError(f"{spec!r} is neither an existing file nor a known generator spec")


def _model(args) -> tuple[CostModel, str, int]:
    graph, fixed, label = graph_from_spec(args.graph)
    if args.fixed_node is not None:
        fixed = args.fixed_node
    return CostModel(graph, fixed, args.enum_cap), label, fixed


def _out_dir(args) -> str:
    d = args.out_dir or os.environ.get(OUTPUT_ENV) or "."
    os.makedirs(d, exist_ok=True)
    return d


def _write_atomic(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _graph_info(model: CostModel) -> dict:
    g = model.graph
    return {"n_nodes": g.n_nodes, "n_edges": g.n_edges, "sha256": g.content_hash(),
            "fixed_node": model.fixed_node}


def _csv_text(write) -> str:
    buf = io.StringIO()
    write(buf)
    return buf.getvalue()


# ---------------------------------------------------------------- subcommands

def cmd_generate(args) -> int:
    kind = args.family
    if kind == "cycle":
        g = generate_cycle(args.n)
    elif kind == "kab":
        g = generate_complete_bipartite(args.a, args.b)
    elif kind == "grk":
        g = generate_grk(GrkParams(args.r, args.l, args.k))
    elif kind == "ladder":
        g = generate_d4_ladder(args.k)
    else:
        g = generate_bipartite_circulant(args.n, args.jumps)
    head, _, body = serialize_edge_list(g).partition("\n")
    config = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    config["version"] = __version__
    text = f"{head}\n# config: {json.dumps(config, sort_keys=True)}\n# sha256: {g.content_hash()}\n{body}"
    if args.out:
        _write_atomic(args.out, text)
        print(f"wrote {args.out} ({g.n_nodes} nodes, {g.n_edges} edges)")
    else:
        sys.stdout.write(text)
    return 0


def analyze_report(model: CostModel, config: RunConfig, n_convention=NODE_COUNT) -> dict:
    stats = spectrum_stats(model)
    loc = build_gloc(model)
    verdict = classify(model, loc, n_convention=n_convention)
    return {
        "config": config.to_dict(),
        "graph": _graph_info(model),
        "spectrum": stats.to_dict(),
        "locgraph": loc.summary(),
        "conductance": conductance(model, loc).to_dict(),
        "verdict": verdict.to_dict(),
    }


def cmd_analyze(args) -> int:
    model, label, fixed = _model(args)
    config = RunConfig("analyze", args.graph, fixed, seed=0, enum_cap=args.enum_cap,
                       extra={"n_convention": args.n_convention})
    report = analyze_report(model, config, args.n_convention)
    path = args.out or os.path.join(_out_dir(args), f"{label}_analyze.json")
    _write_atomic(path, _dump_json(report))
    v = report["verdict"]
    interval = v["s_lg_interval"]
    print(f"regime: {v['regime']} (degree test: {v['corollary_regime']})")
    if interval:
        print(f"s_lg in [{interval[0]:.6f}, {interval[1]:.6f}], s_lg = {v['s_lg']:.6f}")
    else:
        print("s_lg interval: n/a")
    if v["flags"]:
        print("flags: " + ", ".join(v["flags"]))
    print(f"report: {path}")
    return 0


def _progress(label):
    start = time.time()

    def report(i, total):
        el = time.time() - start
        eta = el / i * (total - i) if i else float("nan")
        print(f"  {label}: {i}/{total} points, {el:.1f}s elapsed, ~{eta:.0f}s left",
              file=sys.stderr)
    return report


def cmd_gapscan(args) -> int:
    if args.grid < 2:
        raise CliError(f"--grid must be at least 2, got {args.grid}")
    model, label, fixed = _model(args)
    config = RunConfig("gapscan", args.graph, fixed, grid=args.grid, refine=not args.no_refine,
                       seed=args.seed, enum_cap=args.enum_cap,
                       extra={"s_tol": args.s_tol, "rtol": args.rtol})
    scan = gap_scan(AnnealHamiltonian(model), args.grid, refine=not args.no_refine,
                    s_tol=args.s_tol, rtol=args.rtol, seed=args.seed,
                    progress=_progress(label) if args.progress else None)
    stem = args.out or os.path.join(_out_dir(args), f"{label}_gapscan")
    meta = {"config": config.to_dict(), "graph": _graph_info(model)}
    buf = io.StringIO()
    scan.write_csv(buf, meta)
    _write_atomic(stem + ".csv", buf.getvalue())
    _write_atomic(stem + ".json", _dump_json({**scan.minimum_dict(), **meta}))
    print(f"s_min = {scan.s_min:.6f}, gap_min = {scan.gap_min:.10g}")
    print(f"wrote {stem}.csv and {stem}.json")
    return 0


def cmd_evolve(args) -> int:
    model, label, fixed = _model(args)
    config = RunConfig("evolve", args.graph, fixed, t_max=list(args.t_max), dt=args.dt,
                       enum_cap=args.enum_cap)
    ham = AnnealHamiltonian(model)
    results = []
    for t in args.t_max:
        r = evolve(model, t, dt=args.dt, ham=ham)
        print(f"t_max = {t:g}: p_gs = {r.p_gs:.6f} (drift {r.norm_drift:.1e})")
        results.append(r)
    path = args.out or os.path.join(_out_dir(args), f"{label}_evolve.csv")
    meta = {"config": config.to_dict(), "graph": _graph_info(model)}
    buf = io.StringIO()
    write_evolution_csv(results, buf, meta)
    _write_atomic(path, buf.getvalue())
    print(f"wrote {path}")
    return 0


def cmd_overlaps(args) -> int:
    if args.grid < 2:
        raise CliError(f"--grid must be at least 2, got {args.grid}")
    model, label, fixed = _model(args)
    config = RunConfig("overlaps", args.graph, fixed, grid=args.grid, seed=args.seed,
                       enum_cap=args.enum_cap)
    grid = [i / (args.grid - 1) for i in range(args.grid)]
    oc = overlap_curves(model, grid, seed=args.seed)
    path = args.out or os.path.join(_out_dir(args), f"{label}_overlaps.csv")
    buf = io.StringIO()
    oc.write_csv(buf, {"config": config.to_dict(), "graph": _graph_info(model)})
    _write_atomic(path, buf.getvalue())
    print(f"max g1 = {oc.g1.max():.4f} at s = {oc.s_grid[oc.g1.argmax()]:.4f}")
    print(f"wrote {path}")
    return 0


def _sweep_one(job):
    r, l, k, grid, seed, s_tol = job
    p = GrkParams(r, l, k)
    model = CostModel(generate_grk(p), grk_layout(p)["ll_left"][0])
    t0 = time.time()
    scan = gap_scan(AnnealHamiltonian(model), grid, refine=True, s_tol=s_tol, seed=seed)
    return (r, l, k, p.n_nodes, model.graph.content_hash(), scan.s_min, scan.gap_min,
            time.time() - t0)


def cmd_sweep(args) -> int:
    if args.grid < 2:
        raise CliError(f"--grid must be at least 2, got {args.grid}")
    values = args.values
    if len(values) < 1:
        raise CliError("nothing to sweep")
    jobs = []
    for v in values:
        r, l, k = args.r, args.l, args.k
        if args.vary == "r":
            r = v
        elif args.vary == "k":
            k = v
        else:
            l = v
        jobs.append((r, l, k, args.grid, args.seed, args.s_tol))
    config = RunConfig("sweep", f"grk:vary={args.vary}", grid=args.grid, refine=True,
                       seed=args.seed,
                       extra={"r": args.r, "l": args.l, "k": args.k, "values": values,
                              "s_tol": args.s_tol})
    workers = args.workers or os.cpu_count() or 1
    start = time.time()
    rows = []

    def note(row):
        rows.append(row)
        done = len(rows)
        el = time.time() - start
        print(f"[{done}/{len(jobs)}] r={row[0]} l={row[1]} k={row[2]}: gap_min={row[6]:.6g} "
              f"at s={row[5]:.4f} ({row[7]:.1f}s; {el:.0f}s elapsed, "
              f"~{el / done * (len(jobs) - done):.0f}s left)", file=sys.stderr)

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            for row in pool.map(_sweep_one, jobs):
                note(row)
    else:
        for job in jobs:
            note(_sweep_one(job))

    stem = args.out or os.path.join(_out_dir(args), f"sweep_grk_{args.vary}")
    key = {"r": 0, "l": 1, "k": 2}[args.vary]

    def write(fh):
        fh.write("# config: " + json.dumps(config.to_dict(), sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["r", "l", "k", "n_nodes", "graph_sha256", "s_min", "gap_min"])
        for row in rows:
            w.writerow([*row[:5], f"{row[5]:.17g}", f"{row[6]:.17g}"])

    _write_atomic(stem + ".csv", _csv_text(write))
    summary = {"config": config.to_dict(),
               "graphs": {f"{row[0]},{row[1]},{row[2]}": row[4] for row in rows}}
    if len(rows) >= 3:
        fit = scaling_fit([(row[key], row[6]) for row in rows])
        summary["fit"] = fit.to_dict()
        print(f"fit: gap ~ {fit.prefactor:.4g} * exp(-{fit.rate:.4g} * {args.vary}), "
              f"R^2 = {fit.r_squared:.4f}")
    else:
        summary["fit"] = None
        print("fit skipped: need at least 3 instances")
    _write_atomic(stem + ".json", _dump_json(summary))
    print(f"wrote {stem}.csv and {stem}.json")
    return 0


# ---------------------------------------------------------------- parser

def _add_graph_args(p):
    p.add_argument("graph", help="edge-list file or generator spec "
                   "(edge, cycle:N, kab:A,B, grk:R,L,K, ladder:K, circulant:N:J1,J2,..)")
    p.add_argument("--fixed-node", type=int, default=None,
                   help="node pinned to side L (default 0; for grk, the first left node of K_ll)")
    p.add_argument("--enum-cap", type=int, default=DEFAULT_ENUM_CAP,
                   help="maximum number of free bits to enumerate")
    p.add_argument("--out-dir", default=None, help=f"output directory (default ${OUTPUT_ENV} or .)")
    p.add_argument("--out", default=None, help="explicit output path (or stem)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="anticross", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a generated graph as an edge list")
    fam = gen.add_subparsers(dest="family", required=True)
    p = fam.add_parser("cycle")
    p.add_argument("--n", type=int, required=True)
    p = fam.add_parser("kab")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p = fam.add_parser("grk")
    for name in ("r", "l", "k"):
        p.add_argument(f"--{name}", type=int, required=True)
    p = fam.add_parser("ladder")
    p.add_argument("--k", type=int, required=True)
    p = fam.add_parser("circulant")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--jumps", type=int, nargs="+", required=True)
    for p in fam.choices.values():
        p.add_argument("--out", "-o", default=None, help="output file (default stdout)")
    gen.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="spectrum stats, G_loc, regime and validity as JSON")
    _add_graph_args(p)
    p.add_argument("--n-convention", choices=[NODE_COUNT, QUBIT_COUNT], default=NODE_COUNT)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gapscan", help="gap curve (CSV) and refined minimum (JSON)")
    _add_graph_args(p)
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--no-refine", action="store_true")
    p.add_argument("--s-tol", type=float, default=1e-4)
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_gapscan)

    p = sub.add_parser("evolve", help="final ground-state probability per t_max (CSV)")
    _add_graph_args(p)
    p.add_argument("--t-max", type=float, nargs="+", required=True)
    p.add_argument("--dt", type=float, default=None)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("overlaps", help="g0/g1 overlap curves (CSV)")
    _add_graph_args(p)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_overlaps)

    p = sub.add_parser("sweep", help="minimum gaps across a G_rk family with an exponential fit")
    p.add_argument("--vary", choices=["r", "l", "k"], default="r")
    p.add_argument("--values", type=int, nargs="+", required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--l", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--grid", type=int, default=41)
    p.add_argument("--s-tol", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None, help="worker processes (default CPU count)")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, GraphError, SpectrumError, EigenSolverError, DynamicsError, ValueError,
            OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
