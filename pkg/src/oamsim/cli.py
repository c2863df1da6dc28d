"""Command-line entry point.

Subcommands:

* ``run <config.json>`` — execute one scenario from a JSON config.
* ``sweep --charges -2..2`` — conservation sweep over all (m_p, m_s) pairs.
* ``figure <fig2|fig3a|fig3b|fig4a|fig4b>`` — reproduce a canonical detector scan.
* ``analyze <image.pgm>`` — read the topological charge off a graymap.

Exit codes: 0 success, 2 configuration error, 3 sampling error,
4 demodulation error, 1 anything else.
"""

import argparse
import json
import sys
from pathlib import Path

from .analysis import detect_fork, estimate_carrier
from .detector import read_pgm
from .errors import ConfigError, DemodulationError, OpticsError, SamplingError
from .fields import GridSpec
from .michelson import MichelsonConfig
from .scenario import (
    FIGURES,
    figure_config,
    load_config,
    report_to_dict,
    run_scenario,
    sweep_configs,
    variant,
)

EXIT_CONFIG = 2
EXIT_SAMPLING = 3
EXIT_DEMODULATION = 4


def _write_products(report, out_dir: Path, stem: str, quiet: bool) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    files = {}
    for name, data in report.bitmaps.items():
        path = out_dir / f"{stem}_{name}.pgm"
        path.write_bytes(data)
        files[name] = str(path)
    report_path = out_dir / f"{stem}_report.json"
    report_path.write_text(json.dumps(report_to_dict(report, files), indent=2))
    files["report"] = str(report_path)
    if not quiet:
        for name, path in files.items():
            print(f"wrote {name}: {path}")
    return files


def _apply_overrides(cfg, args):
    changes = {}
    if args.seed is not None:
        changes["noise_seed"] = args.seed
    if args.grid_n is not None:
        grid = cfg.resolved_grid()
        changes["grid"] = GridSpec(args.grid_n, args.grid_n, grid.extent_x, grid.extent_y)
    return variant(cfg, **changes) if changes else cfg


def _cmd_run(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    report = run_scenario(cfg)
    stem = Path(args.config).stem
    _write_products(report, Path(args.out_dir), stem, args.quiet)
    if not args.quiet:
        print(
            f"expected charge {report.expected_charge}, measured "
            f"{report.measured} ({'ok' if report.conserved else 'MISMATCH'})"
        )
    return 0 if report.conserved else 1


def _parse_charge_range(text: str):
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError as exc:
        raise ConfigError(f"bad charge range {text!r}; expected e.g. -2..2") from exc
    if lo > hi:
        raise ConfigError(f"empty charge range {text!r}")
    return range(lo, hi + 1)


def _cmd_sweep(args) -> int:
    charges = _parse_charge_range(args.charges)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    all_ok = True
    for cfg in sweep_configs(charges):
        cfg = _apply_overrides(cfg, args)
        report = run_scenario(cfg)
        rows.append(report_to_dict(report))
        ok = report.conserved
        all_ok &= ok
        if not args.quiet:
            m_p = cfg.pump.charge_m
            m_s = cfg.aux.charge_m
            print(
                f"m_p={m_p:+d} m_s={m_s:+d} expected={report.expected_charge:+d} "
                f"measured={report.measured} {'ok' if ok else 'MISMATCH'}"
            )
    (out_dir / "sweep_report.json").write_text(json.dumps(rows, indent=2))
    if not args.quiet:
        print(f"wrote {out_dir / 'sweep_report.json'}")
    return 0 if all_ok else 1


def _cmd_figure(args) -> int:
    cfg = _apply_overrides(figure_config(args.name), args)
    report = run_scenario(cfg)
    _write_products(report, Path(args.out_dir), args.name, args.quiet)
    return 0


def _cmd_analyze(args) -> int:
    try:
        values = read_pgm(Path(args.image).read_bytes())
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read graymap {args.image}: {exc}") from exc
    n_x, n_y = values.shape
    extent = args.extent
    grid = GridSpec(n_x, n_y, extent, extent * n_y / n_x)
    if args.tilt_x is not None:
        carrier = (args.tilt_x, args.tilt_y or 0.0)
    else:
        carrier = estimate_carrier(values, grid)
    cfg = MichelsonConfig(
        tilt_x=carrier[0], tilt_y=carrier[1], shear=(args.shear_x, args.shear_y)
    )
    fork = detect_fork(values, grid, cfg)
    result = {
        "image": args.image,
        "carrier": list(carrier),
        "charge": fork.charge,
        "singularity_location": list(fork.singularity_location),
        "axis_angle": fork.axis_angle,
        "confidence": fork.confidence,
    }
    print(json.dumps(result, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oamsim",
        description="Simulate stimulated down-conversion and measure "
        "topological-charge conservation from fork interferograms.",
    )
    parser.add_argument("--out-dir", default="out", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="shot-noise seed")
    parser.add_argument("--grid-n", type=int, default=None, help="grid samples per axis")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario from a JSON config")
    p_run.add_argument("config")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="charge-conservation sweep")
    p_sweep.add_argument("--charges", default="-2..2", help="inclusive range, e.g. -2..2")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fig = sub.add_parser("figure", help="reproduce a canonical detector scan")
    p_fig.add_argument("name", choices=FIGURES)
    p_fig.set_defaults(func=_cmd_figure)

    p_an = sub.add_parser("analyze", help="detect the fork charge in a graymap")
    p_an.add_argument("image")
    p_an.add_argument("--extent", type=float, default=1.0, help="physical width (m)")
    p_an.add_argument("--tilt-x", type=float, default=None, help="carrier fx (rad/m)")
    p_an.add_argument("--tilt-y", type=float, default=None, help="carrier fy (rad/m)")
    p_an.add_argument("--shear-x", type=float, default=0.0)
    p_an.add_argument("--shear-y", type=float, default=0.0)
    p_an.set_defaults(func=_cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SamplingError as exc:
        print(f"sampling error: {exc}", file=sys.stderr)
        return EXIT_SAMPLING
    except DemodulationError as exc:
        print(f"demodulation error: {exc}", file=sys.stderr)
        return EXIT_DEMODULATION
    except (OpticsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
