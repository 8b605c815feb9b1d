"""Command-line experiment runner.

Subcommands: ``scgf`` (single theta evaluation), ``witness`` (single point),
``sweep`` (2-D grid with CSV/manifest/heatmap), ``validate`` (trajectory
oracle vs spectral cumulants), ``rate-function`` (1-D Legendre-Fenchel scan).

Exit codes: 0 success, 2 configuration error, 3 sweep solver-failure budget
exceeded, 4 validation failure.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    load_config,
    output_prefix,
    parse_model,
    parse_rate_function,
    parse_sweep,
    parse_tilt_fields,
    parse_trajectories,
)
from .errors import ConfigError, PhotonFCSError
from .heatmap import write_heatmap_svg
from .ldt import cumulants_fd, rate_function, scgf
from .liouville import CountingScheme
from .sweep import (
    build_model,
    run_manifest,
    run_sweep,
    spec_to_jsonable,
    write_manifest,
    write_sweep_csv,
)
from .validate import run_validate
from .witness import evaluate_witness

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER_BUDGET = 3
EXIT_VALIDATION = 4

FAILURE_BUDGET = 0.10

log = logging.getLogger("photonfcs.cli")


def _build_parser():
    parser = argparse.ArgumentParser(prog="photonfcs", description=__doc__)
    parser.add_argument("--version", action="version", version=f"photonfcs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("scgf", "evaluate theta(s) at one tilt point"),
        ("witness", "cumulants and witness at one parameter point"),
        ("sweep", "2-D parameter sweep with CSV/JSON/SVG outputs"),
        ("validate", "trajectory Monte Carlo vs spectral cumulants"),
        ("rate-function", "1-D scan of the rate function phi(x)"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="INI run configuration")
        p.add_argument("--out", default=None, help="output directory (default: no files)")
        p.add_argument("--seed", type=int, default=None, help="override trajectory seed")
        p.add_argument(
            "--variant",
            choices=("appendix", "direct", "both"),
            default=None,
            help="witness variant for sweep outputs",
        )
        p.add_argument("--threads", type=int, default=1, help="worker processes")
        p.add_argument("--svg", action="store_true", help="emit the heatmap image")
    return parser


def _out_dir(args):
    if args.out is None:
        return None
    path = Path(args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_scgf(args, cfg):
    kind, params = parse_model(cfg)
    model, scheme = build_model(kind, params)
    s = parse_tilt_fields(cfg, scheme.n_fields)
    t0 = time.perf_counter()
    theta = scgf(model, scheme, s)
    payload = {"model": kind, "parameters": params, "s": s, "theta": theta}
    print(json.dumps(payload, indent=2, sort_keys=True))
    out = _out_dir(args)
    if out is not None:
        prefix = output_prefix(cfg, "scgf")
        write_manifest(
            run_manifest("scgf", payload, time.perf_counter() - t0),
            out / f"{prefix}.json",
        )
    return EXIT_OK


def _cmd_witness(args, cfg):
    kind, params = parse_model(cfg)
    model, scheme = build_model(kind, params)
    t0 = time.perf_counter()
    table = cumulants_fd(model, scheme)
    report = evaluate_witness(table)
    payload = {"model": kind, "parameters": params, **report.to_dict()}
    print(json.dumps(payload, indent=2, sort_keys=True))
    out = _out_dir(args)
    if out is not None:
        prefix = output_prefix(cfg, "witness")
        write_manifest(
            run_manifest("witness", payload, time.perf_counter() - t0),
            out / f"{prefix}.json",
        )
    return EXIT_OK


def _cmd_sweep(args, cfg):
    kind, params = parse_model(cfg)
    spec = parse_sweep(cfg, kind, params, variant_override=args.variant)
    result = run_sweep(spec, threads=max(1, args.threads))
    frac = result.n_failures / len(result.rows)
    out = _out_dir(args)
    if out is not None:
        prefix = output_prefix(cfg, "sweep")
        write_sweep_csv(result, out / f"{prefix}.csv")
        manifest = run_manifest(
            "sweep",
            spec_to_jsonable(spec),
            result.wall_time_s,
            extra={"n_points": len(result.rows), "n_failures": result.n_failures},
        )
        write_manifest(manifest, out / f"{prefix}.json")
        if args.svg:
            variants = ("appendix", "direct") if spec.variant == "both" else (spec.variant,)
            for variant in variants:
                write_heatmap_svg(
                    out / f"{prefix}_{variant}.svg",
                    result.grid(f"m3_{variant}"),
                    result.axis1_values,
                    result.axis2_values,
                    spec.axis1.name,
                    spec.axis2.name,
                    f"m3_{variant}: {kind}",
                )
    print(
        f"sweep: {len(result.rows)} points, {result.n_failures} failures, "
        f"{result.wall_time_s:.2f} s"
    )
    if frac > FAILURE_BUDGET:
        log.error("failure fraction %.1f%% exceeds budget", 100 * frac)
        return EXIT_SOLVER_BUDGET
    return EXIT_OK


def _cmd_validate(args, cfg):
    kind, params = parse_model(cfg)
    model, scheme = build_model(kind, params)
    traj_cfg, dump = parse_trajectories(cfg, seed_override=args.seed)
    report, samples = run_validate(model, scheme, traj_cfg, threads=max(1, args.threads))
    payload = {"model": kind, "parameters": params, **report.to_dict()}
    print(json.dumps(payload, indent=2, sort_keys=True))
    out = _out_dir(args)
    if out is not None:
        prefix = output_prefix(cfg, "validate")
        write_manifest(
            run_manifest(
                "validate",
                {"model": kind, "parameters": params},
                report.wall_time_s,
                seed=traj_cfg.seed,
                extra={"report": report.to_dict()},
            ),
            out / f"{prefix}.json",
        )
        if dump:
            from .trajectories import dump_samples_csv

            dump_samples_csv(out / f"{prefix}_samples.csv", samples, traj_cfg.t_final, traj_cfg.seed)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def _cmd_rate_function(args, cfg):
    kind, params = parse_model(cfg)
    model, scheme = build_model(kind, params)
    rf = parse_rate_function(cfg)
    if rf["channel"] is not None:
        scheme = CountingScheme(subsets=((rf["channel"],),))
    elif scheme.n_fields != 1:
        raise ConfigError(
            "rate-function needs a single counting field; set 'channel' in [rate_function]"
        )
    t0 = time.perf_counter()
    xs = np.linspace(rf["x_min"], rf["x_max"], rf["n_points"])
    rows = [rate_function(model, scheme, float(x), bracket=rf["bracket"]) for x in xs]
    for r in rows:
        print(f"x={r.x!r} phi={r.phi!r} argmin_s={r.argmin_s!r}")
    out = _out_dir(args)
    if out is not None:
        prefix = output_prefix(cfg, "rate_function")
        lines = ["# photonfcs rate-function csv schema v1", "x,phi,argmin_s"]
        lines += [f"{r.x!r},{r.phi!r},{r.argmin_s!r}" for r in rows]
        (out / f"{prefix}.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        write_manifest(
            run_manifest("rate-function", {"model": kind, "parameters": params, **{
                k: (list(v) if isinstance(v, tuple) else v) for k, v in rf.items()
            }}, time.perf_counter() - t0),
            out / f"{prefix}.json",
        )
    return EXIT_OK


_COMMANDS = {
    "scgf": _cmd_scgf,
    "witness": _cmd_witness,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
    "rate-function": _cmd_rate_function,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return _COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except PhotonFCSError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
