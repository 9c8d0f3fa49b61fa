"""Command-line pipeline: simulate, fit, evaluate, rank, bench."""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from .data import load_csv, write_csv
from .graphs import (
    PartialCorrEstimate,
    connectivity_scores,
    psi_from_precision,
    read_edge_list,
    top_k,
    write_edge_list,
)
from .metrics import confusion, fdr, mse_split, tpr
from .pipeline import FitConfig, fit_dataset
from .seeds import DOMAIN_SIMULATE, child_seed
from .simulate import Scenario, mvn_sample, parse_scenario, scenario_truth

_REP_PATTERN = re.compile(r"^rep(\d+)\.csv$")


def _rep_name(r: int) -> str:
    return f"rep{r:03d}"


def _method_tag(method: str, rule: str) -> str:
    return "iw" if method == "iw" else f"{method}_{rule}"


def _load_scenario(args: argparse.Namespace) -> Scenario:
    scenario = parse_scenario(args.scenario)
    if getattr(args, "seed", None) is not None:
        scenario = replace(scenario, seed=args.seed)
    if getattr(args, "replicates", None) is not None:
        scenario = replace(scenario, replicates=args.replicates)
    return scenario


def _generate_replicate(scenario: Scenario, r: int):
    rng = np.random.default_rng(child_seed(scenario.seed, DOMAIN_SIMULATE, r))
    truth = scenario_truth(scenario, rng)
    return truth, mvn_sample(scenario.n, truth, rng)


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for r in range(1, scenario.replicates + 1):
        truth, raw = _generate_replicate(scenario, r)
        stem = _rep_name(r)
        write_csv(str(out_dir / f"{stem}.csv"), raw.values, raw.column_names)
        write_csv(
            str(out_dir / f"{stem}_omega.csv"), truth.omega, raw.column_names
        )
        write_edge_list(
            str(out_dir / f"{stem}_edges.csv"), truth.graph, raw.column_names
        )
    print(f"wrote {scenario.replicates} replicates to {out_dir}")
    return 0


def _fit_config(args: argparse.Namespace) -> FitConfig:
    seed = args.seed
    if seed is None and args.scenario is not None:
        seed = parse_scenario(args.scenario).seed
    return FitConfig(
        method=args.method,
        rule=args.rule,
        seed=0 if seed is None else seed,
        workers=args.workers,
        n_iter=args.iters,
        burn_in=args.burnin,
        max_model_size=args.max_model_size,
    )


def _write_fit_outputs(
    out_dir: Path, stem: str, tag: str, result, column_names
) -> None:
    write_edge_list(
        str(out_dir / f"{stem}_{tag}_graph.csv"), result.graph, column_names
    )
    write_csv(str(out_dir / f"{stem}_{tag}_psi.csv"), result.psi.psi, column_names)
    if result.collection is not None:
        write_csv(
            str(out_dir / f"{stem}_{tag}_beta.csv"),
            result.collection.beta_all,
            column_names,
        )
        with open(
            out_dir / f"{stem}_{tag}_gamma.csv", "w", encoding="utf-8", newline=""
        ) as handle:
            writer = csv.writer(handle)
            writer.writerow(column_names)
            for row in result.collection.gamma_all:
                writer.writerow([int(v) for v in row])


def cmd_fit(args: argparse.Namespace) -> int:
    raw = load_csv(args.input)
    config = _fit_config(args)
    result = fit_dataset(raw, config)
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem
    tag = _method_tag(config.method, config.rule)
    _write_fit_outputs(out_dir, stem, tag, result, raw.column_names)
    print(
        f"fit {config.method} on {args.input}: "
        f"{result.graph.edge_count} edges, outputs in {out_dir}"
    )
    return 0


def _truth_replicates(truth_dir: Path) -> list[str]:
    numbered = []
    for entry in truth_dir.iterdir():
        match = _REP_PATTERN.match(entry.name)
        if match:
            numbered.append((int(match.group(1)), entry.name[: -len(".csv")]))
    if not numbered:
        raise ValueError(f"no replicate datasets (repNNN.csv) found in {truth_dir}")
    return [stem for _, stem in sorted(numbered)]


def cmd_evaluate(args: argparse.Namespace) -> int:
    truth_dir = Path(args.input)
    fit_dir = Path(args.fit_dir)
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tag = _method_tag(args.method, args.rule)
    stems = _truth_replicates(truth_dir)
    missing = [
        stem
        for stem in stems
        if not (fit_dir / f"{stem}_{tag}_graph.csv").exists()
        or not (fit_dir / f"{stem}_{tag}_psi.csv").exists()
    ]
    if missing:
        raise ValueError(
            f"missing fitted replicates for {tag} in {fit_dir}: {', '.join(missing)}"
        )
    rows = []
    for stem in stems:
        omega_data = load_csv(str(truth_dir / f"{stem}_omega.csv"))
        names = omega_data.column_names
        truth_graph = read_edge_list(str(truth_dir / f"{stem}_edges.csv"), names)
        psi_true = psi_from_precision(omega_data.values)
        est_graph = read_edge_list(str(fit_dir / f"{stem}_{tag}_graph.csv"), names)
        psi_data = load_csv(str(fit_dir / f"{stem}_{tag}_psi.csv"))
        if psi_data.column_names != names:
            raise ValueError(f"{stem}: psi columns do not match the truth columns")
        psi_hat = PartialCorrEstimate(psi=psi_data.values)
        counts = confusion(est_graph, truth_graph)
        mse_zero, mse_nonzero, mse_total = mse_split(psi_hat, psi_true)
        record = {
            "replicate": stem,
            "method": args.method,
            "rule": None if args.method == "iw" else args.rule,
            "tp": counts.tp,
            "fp": counts.fp,
            "tn": counts.tn,
            "fn": counts.fn,
            "fdr": fdr(counts),
            "tpr": tpr(counts),
            "mse_zero": mse_zero,
            "mse_nonzero": mse_nonzero,
            "mse_total": mse_total,
            "edges_estimated": est_graph.edge_count,
            "edges_true": truth_graph.edge_count,
        }
        with open(
            out_dir / f"{stem}_{tag}_metrics.json", "w", encoding="utf-8"
        ) as handle:
            json.dump(record, handle, indent=2, sort_keys=True)
            handle.write("\n")
        rows.append(record)

    summary_fields = ("fdr", "tpr", "mse_zero", "mse_nonzero", "mse_total")
    with open(
        out_dir / f"{tag}_summary.csv", "w", encoding="utf-8", newline=""
    ) as handle:
        writer = csv.writer(handle)
        writer.writerow(["method", "rule", "replicates", *summary_fields])
        writer.writerow(
            [
                args.method,
                "" if args.method == "iw" else args.rule,
                len(rows),
                *(
                    repr(float(np.mean([row[field] for row in rows])))
                    for field in summary_fields
                ),
            ]
        )
    print(f"evaluated {len(rows)} replicates, outputs in {out_dir}")
    return 0


def cmd_rank(args: argparse.Namespace) -> int:
    psi_data = load_csv(args.psi)
    names = psi_data.column_names
    graph = read_edge_list(args.graph, names)
    psi = PartialCorrEstimate(psi=psi_data.values)
    degrees, strengths = connectivity_scores(graph, psi)
    chosen = top_k((degrees, strengths), min(args.top_k, len(names)))
    with open(args.output, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["rank", "node", "degree", "strength"])
        for position, node in enumerate(chosen, start=1):
            writer.writerow(
                [position, names[node], int(degrees[node]), repr(float(strengths[node]))]
            )
    print(f"wrote top {len(chosen)} nodes to {args.output}")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    datasets = [
        _generate_replicate(scenario, r)[1]
        for r in range(1, scenario.replicates + 1)
    ]
    rows = []
    for method in methods:
        config = FitConfig(
            method=method,
            rule=args.rule,
            seed=scenario.seed,
            workers=args.workers,
            n_iter=args.iters,
            burn_in=args.burnin,
        )
        elapsed = []
        for raw in datasets:
            start = time.perf_counter()
            fit_dataset(raw, config)
            elapsed.append(time.perf_counter() - start)
        mean_seconds = float(np.mean(elapsed))
        rows.append((method, mean_seconds))
    bench_path = out_dir / "bench.csv"
    with open(bench_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["method", "design", "n", "p", "replicates", "mean_seconds", "mean_minutes"]
        )
        for method, mean_seconds in rows:
            writer.writerow(
                [
                    method,
                    scenario.label,
                    scenario.n,
                    scenario.p,
                    scenario.replicates,
                    f"{mean_seconds:.3f}",
                    f"{mean_seconds / 60.0:.4f}",
                ]
            )
    for method, mean_seconds in rows:
        print(f"{method}: {mean_seconds:.2f} s/dataset ({mean_seconds / 60.0:.3f} min)")
    print(f"wrote {bench_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsggm",
        description=(
            "Sparse Gaussian graphical models via parallel Bayesian "
            "node-wise regressions"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate datasets plus truth sidecars")
    sim.add_argument("--scenario", required=True, help="scenario file path")
    sim.add_argument("--output-dir", required=True)
    sim.add_argument("--seed", type=int, default=None, help="override scenario seed")
    sim.add_argument(
        "--replicates", type=int, default=None, help="override scenario replicates"
    )
    sim.set_defaults(func=cmd_simulate)

    fit = sub.add_parser("fit", help="fit one dataset")
    fit.add_argument("--input", required=True, help="dataset CSV")
    fit.add_argument("--output-dir", required=True)
    fit.add_argument("--method", choices=("subho", "basad", "iw"), default="subho")
    fit.add_argument("--rule", choices=("and", "or"), default="and")
    fit.add_argument("--seed", type=int, default=None)
    fit.add_argument("--workers", type=int, default=1)
    fit.add_argument("--iters", type=int, default=2000, help="post-burn-in draws")
    fit.add_argument("--burnin", type=int, default=500)
    fit.add_argument("--max-model-size", type=int, default=None)
    fit.add_argument(
        "--scenario",
        default=None,
        help="optional scenario file supplying the seed when --seed is absent",
    )
    fit.set_defaults(func=cmd_fit)

    ev = sub.add_parser("evaluate", help="score fitted replicates against truth")
    ev.add_argument("--input", required=True, help="directory written by simulate")
    ev.add_argument("--fit-dir", required=True, help="directory written by fit")
    ev.add_argument("--output-dir", required=True)
    ev.add_argument("--method", choices=("subho", "basad", "iw"), default="subho")
    ev.add_argument("--rule", choices=("and", "or"), default="and")
    ev.set_defaults(func=cmd_evaluate)

    rank = sub.add_parser("rank", help="rank nodes by connectivity")
    rank.add_argument("--graph", required=True, help="edge-list CSV")
    rank.add_argument("--psi", required=True, help="partial-correlation CSV")
    rank.add_argument("--output", required=True)
    rank.add_argument("--top-k", type=int, default=10)
    rank.set_defaults(func=cmd_rank)

    bench = sub.add_parser("bench", help="time fits over a scenario")
    bench.add_argument("--scenario", required=True)
    bench.add_argument("--output-dir", required=True)
    bench.add_argument("--methods", default="subho")
    bench.add_argument("--rule", choices=("and", "or"), default="and")
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--replicates", type=int, default=None)
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--iters", type=int, default=2000)
    bench.add_argument("--burnin", type=int, default=500)
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())
