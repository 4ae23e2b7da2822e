"""Command-line entry point for the figure-family runs and sweeps."""

from __future__ import annotations

import argparse
import sys

from . import harness


def _add_common(sub):
    sub.add_argument("--config", help="INI config file (defaults to the family preset)")
    sub.add_argument("--out", default=None, help="output directory")
    sub.add_argument("--engines", default=None, help="comma list of engines to run")


def _build_config(args, family):
    overrides = {}
    if args.out:
        overrides["out_dir"] = args.out
    if args.engines:
        overrides["engines"] = tuple(e.strip() for e in args.engines.split(","))
    if args.config:
        return harness.config_from_file(args.config, overrides)
    if family == "fig-variances-imperfect":
        return harness.preset_configs_imperfect(**overrides)
    return harness.preset_config(family, **overrides)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qndspin",
        description="Measurement-conditioned spin squeezing runs (CSV/JSON output)",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for family in ("fig-variances", "fig-qfunction", "fig-means", "fig-variances-imperfect"):
        sub = subs.add_parser(family, help=f"reproduce the {family} family")
        _add_common(sub)
    sweep_p = subs.add_parser("sweep", help="summarize squeezing over configs")
    sweep_p.add_argument("--config", action="append", default=[],
                         help="INI config file (repeatable)")
    sweep_p.add_argument("--out", default="out", help="output directory")
    sweep_p.add_argument("--engines", default=None, help="comma list of engines")

    args = parser.parse_args(argv)

    if args.command == "sweep":
        overrides = {}
        if args.engines:
            overrides["engines"] = tuple(e.strip() for e in args.engines.split(","))
        configs = [harness.config_from_file(p, overrides) for p in args.config]
        if not configs and not args.config:
            configs = [harness.preset_config("fig-variances", **overrides)]
        summary = harness.sweep(configs)
        out_path = f"{args.out}/sweep.json"
        harness.write_sweep_json(summary, out_path)
        print(out_path)
        failures = sum(r["failures"] for r in summary["runs"])
        return 1 if failures else 0

    if args.command == "fig-variances-imperfect":
        cfg = _build_config(args, args.command)
        if isinstance(cfg, tuple):
            report = harness.run_fig_variances_imperfect(cfg)
        else:
            report = harness.run_fig_variances_imperfect((cfg,))
    else:
        cfg = _build_config(args, args.command)
        runner = {
            "fig-variances": harness.run_fig_variances,
            "fig-qfunction": harness.run_fig_qfunction,
            "fig-means": harness.run_fig_means,
        }[args.command]
        report = runner(cfg)

    for path in report.csv_paths:
        print(path)
    for failure in report.failures:
        print(f"engine failure: {failure}", file=sys.stderr)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
