"""Batch command-line front door.

Subcommands: build-panel, simulate, regress, cluster, plot-data. Every run is
deterministic given its flags and seed; data goes to files or stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import clustering, econometrics, figures, pipeline, simulate
from .model_core import ModelParams


def _out_path(arg: str) -> Path:
    path = Path(arg)
    if not path.is_absolute() and "GROWTHLAB_OUT" in os.environ:
        path = Path(os.environ["GROWTHLAB_OUT"]) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def cmd_build_panel(args) -> int:
    mapping = {}
    if args.mapping:
        with open(args.mapping, "r", encoding="utf-8") as fh:
            mapping = json.load(fh)
    sources = []
    for kind, path in (("pwt", args.pwt), ("education", args.education), ("indicators", args.indicators)):
        table = pipeline.load_source(path, kind, mapping.get(kind))
        sources.append(pipeline.apply_exclusions(table))
    panel = pipeline.merge_sources(sources)
    years = [int(y) for y in args.years.split(",")] if args.years else None
    panel = pipeline.filter_intervals(panel, years)
    if args.interpolate:
        panel = pipeline.interpolate_rd_share(panel)
    panel = pipeline.derive_variables(panel, ModelParams(g=args.g))
    out = _out_path(args.out)
    pipeline.write_panel(panel, str(out))
    print(f"{len(panel.countries)} countries retained")
    dropped = panel.provenance.get("dropped_countries", [])
    if dropped:
        print("dropped:", ", ".join(dropped))
    return 0


def cmd_simulate(args) -> int:
    if args.preset:
        if args.preset not in simulate.PRESETS:
            raise ValueError(f"unknown preset {args.preset!r}; available: {sorted(simulate.PRESETS)}")
        config = simulate.PRESETS[args.preset]
    else:
        config = simulate.load_scenario(args.config)
    trajectory = simulate.run_scenario(config)
    breakeven = simulate.find_breakeven(trajectory)
    content = simulate.export_trajectory(trajectory, args.format)
    out = _out_path(args.out)
    out.write_text(content, encoding="utf-8")
    if not args.no_figure:
        figures.trajectory_figure(trajectory, str(out.with_suffix(".svg")), breakeven)
    if breakeven is None:
        print("break-even: none")
    else:
        print(f"break-even at t={breakeven}")
    return 0


def cmd_regress(args) -> int:
    panel = pipeline.read_panel(args.panel)
    spec = econometrics.RegressionSpec(
        dependent=args.dep,
        regressors=tuple(args.regressors.split(",")),
        include_intercept=not args.no_intercept,
    )
    frame = panel.frame
    needed = [spec.dependent, *spec.regressors]
    missing = [c for c in needed if c not in frame.columns]
    if missing:
        raise KeyError(
            f"variables not in panel: {missing}; available: {sorted(frame.columns)}"
        )
    usable = frame.dropna(subset=needed)
    skipped = len(frame) - len(usable)
    if skipped:
        print(f"skipped {skipped} rows with missing values", file=sys.stderr)
    result = econometrics.fit_pooled_ols(usable, spec)
    table = econometrics.format_result_table(result)
    out = _out_path(args.out)
    out.write_text(table, encoding="utf-8")
    out.with_suffix(out.suffix + ".json").write_text(
        econometrics.result_to_json(result), encoding="utf-8"
    )
    d = result.diagnostics
    print(f"BIC={d.bic:.4f} AIC={d.aic:.4f}")
    return 0


def cmd_cluster(args) -> int:
    panel = pipeline.read_panel(args.panel)
    feature_names = args.features.split(",")
    frame = panel.frame
    if args.year is not None:
        frame = frame[frame["year"] == args.year]
    needed = feature_names + [args.outcome]
    missing = [c for c in needed if c not in frame.columns]
    if missing:
        raise KeyError(f"variables not in panel: {missing}; available: {sorted(frame.columns)}")
    frame = frame.dropna(subset=needed)
    matrix = clustering.FeatureMatrix(
        labels=tuple(frame["country"]),
        feature_names=tuple(feature_names),
        values=frame[feature_names].to_numpy(dtype=float),
    )
    model = clustering.kmeans_fit(
        clustering.standardize(matrix), args.k, seed=args.seed, restarts=args.restarts
    )
    anomalies = clustering.detect_anomalies(model, args.tau)
    outcomes = dict(zip(frame["country"], frame[args.outcome].astype(float)))
    report = clustering.cluster_report(model, outcomes)

    out = _out_path(args.out)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["country", "cluster", "distance", "flagged"])
        flagged_labels = {a.label for a in anomalies}
        for label, cl, dist in zip(matrix.labels, model.assignments, model.distances):
            writer.writerow([label, int(cl), f"{dist:.9g}", int(label in flagged_labels)])
    out.with_suffix(out.suffix + ".json").write_text(
        clustering.model_to_json(model), encoding="utf-8"
    )
    if not args.no_figure:
        figures.cluster_figure(model, outcomes, str(out.with_suffix(".svg")))
    print(f"k={model.k} SSE={model.sse:.6g}")
    print(clustering.report_to_text(report), end="")
    if anomalies:
        for a in anomalies:
            print(
                f"anomaly: {a.label} (cluster {a.cluster}, distance {a.distance:.4g} "
                f"vs rms {a.cluster_rms:.4g})"
            )
        print(f"consider k={model.k + 1}")
    return 0


def cmd_plot_data(args) -> int:
    panel = pipeline.read_panel(args.panel)
    frame = panel.frame
    for name in (args.x, args.y):
        if name not in frame.columns:
            raise KeyError(f"variable {name!r} not in panel; available: {sorted(frame.columns)}")
    frame = frame.dropna(subset=[args.x, args.y])
    xs, ys = frame[args.x].astype(float), frame[args.y].astype(float)
    if args.log:
        keep = (xs > 0) & (ys > 0)
        skipped = int((~keep).sum())
        if skipped:
            print(f"skipped {skipped} rows with nonpositive values under --log", file=sys.stderr)
        xs, ys = np.log(xs[keep]), np.log(ys[keep])
    out = _out_path(args.out)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        x_name = f"ln({args.x})" if args.log else args.x
        y_name = f"ln({args.y})" if args.log else args.y
        writer.writerow([x_name, y_name])
        for x, y in zip(xs, ys):
            writer.writerow([f"{x:.9g}", f"{y:.9g}"])
    if len(xs) == 0:
        print("warning: no rows to plot", file=sys.stderr)
    figures.scatter_figure(
        list(xs), list(ys), x_name, y_name, str(out.with_suffix(".svg"))
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="growthlab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-panel", help="merge source snapshots into the analysis panel")
    p.add_argument("--pwt", required=True, help="national-accounts snapshot CSV")
    p.add_argument("--education", required=True, help="education-attainment snapshot CSV")
    p.add_argument("--indicators", required=True, help="development-indicators snapshot CSV")
    p.add_argument("--mapping", help="JSON column-mapping config")
    p.add_argument("--years", help="comma-separated years to keep (default 1965..2005 step 5)")
    p.add_argument("--interpolate", action="store_true", help="fill short research-share gaps")
    p.add_argument("--g", type=float, default=0.03, help="technology trend rate in n+g+delta")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_panel)

    p = sub.add_parser("simulate", help="run a two-track growth scenario")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--config", help="scenario config JSON")
    group.add_argument("--preset", help="named preset (e.g. appendix7)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--no-figure", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("regress", help="pooled OLS with full diagnostics")
    p.add_argument("--panel", required=True)
    p.add_argument("--dep", required=True)
    p.add_argument("--regressors", required=True, help="comma-separated regressor names")
    p.add_argument("--no-intercept", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("cluster", help="k-means over technology indicators")
    p.add_argument("--panel", required=True)
    p.add_argument("--features", required=True, help="comma-separated feature names")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--tau", type=float, default=clustering.DEFAULT_TAU)
    p.add_argument("--outcome", required=True, help="outcome variable for the report")
    p.add_argument("--year", type=int, help="restrict to one cross-section")
    p.add_argument("--no-figure", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("plot-data", help="emit scatter data and a figure")
    p.add_argument("--panel", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--log", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot_data)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
