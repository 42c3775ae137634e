"""Command-line entry points.

Subcommands::

    run         single simulation: snapshots + energy CSV
    sweep       c0 calibration batch: sweep CSV + comparison report
    energy      energy study over the five boundary cases + extrema
    check-thm2  per-step energy-inequality check over a run
    presets     list available preset names

Exit status: 0 success, 1 configuration error, 2 blow-up or dry state,
3 energy-inequality violation.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .boundary import BOUNDARY_CASES
from .config import parse_config
from .diagnostics import extrema_table, transmission_coefficient_bound, write_energy_csv
from .errors import BlowUpError, ConfigurationError, DryStateError, SolverError, UsageError
from .experiments import REFERENCE_EXTREMA, SweepSpec, available_presets, run_sweep
from .solver import run

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BLOWUP = 2
EXIT_THM2 = 3


def _load_config(path):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    return parse_config(text)


def _out_dir(args, cfg) -> Path:
    out = args.out or cfg.out or "out"
    p = Path(out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    out = _out_dir(args, cfg)
    result = run(cfg, out_dir=out)
    print(f"completed {result.n_steps} steps (dt = {result.dt:g})")
    for p in result.snapshot_paths:
        print(f"wrote {p}")
    if result.records:
        print(f"wrote {out / 'energy.csv'} ({len(result.records)} records)")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    out = _out_dir(args, cfg)
    spec = SweepSpec.from_config(cfg)
    result = run_sweep(spec, jobs=args.jobs)
    result.to_csv(out / "sweep.csv")
    report = result.comparison_report()
    (out / "comparison.txt").write_text(report)
    print(report, end="")
    print(f"wrote {out / 'sweep.csv'} and {out / 'comparison.txt'}")
    if result.n_failed and not args.allow_partial:
        print(f"{result.n_failed} sweep cell(s) failed", file=sys.stderr)
        return EXIT_BLOWUP
    return EXIT_OK


def _cmd_energy(args) -> int:
    cfg = _load_config(args.config)
    out = _out_dir(args, cfg)
    lines = []
    for case in BOUNDARY_CASES:
        case_cfg = replace(cfg, case=case, energy_every=max(1, cfg.energy_every))
        result = run(case_cfg, out_dir=None)
        write_energy_csv(result.records, out / f"energy_case_{case}.csv")
        ext = extrema_table(result.records, include_initial=cfg.extrema_include_initial)
        lines.append(f"case ({case})")
        ref = REFERENCE_EXTREMA.get(case, {})
        for name, (mx, mn) in ext.items():
            ref_pair = ref.get(name)
            ref_txt = f"   reference max/min: {ref_pair[0]:.3g} / {ref_pair[1]:.3g}" if ref_pair else ""
            lines.append(f"  {name}: max = {mx:.6g}  min = {mn:.6g}{ref_txt}")
    text = "\n".join(lines) + "\n"
    (out / "extrema.txt").write_text(text)
    print(text, end="")
    print(f"wrote per-case energy CSVs and {out / 'extrema.txt'}")
    return EXIT_OK


def _cmd_check_thm2(args) -> int:
    cfg = _load_config(args.config)
    alpha = args.alpha if args.alpha is not None else cfg.alpha
    bound = transmission_coefficient_bound(alpha)
    cfg = replace(cfg, alpha=alpha, energy_every=max(1, cfg.energy_every))
    result = run(cfg, out_dir=None, collect_thm2=True)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_energy_csv(result.records, out / "energy.csv")

    c0_ok = cfg.c0 <= bound
    i2_scale = max(abs(r.I_h2) for r in result.records)
    tol = 1e-6 * i2_scale
    violations = []
    for sample in result.thm2_series:
        conditions = sample.eta_floor_ok and sample.phi_positive_ok and c0_ok
        if conditions and sample.I12_transmission > tol:
            violations.append(sample)
    checked = sum(
        1 for s in result.thm2_series if s.eta_floor_ok and s.phi_positive_ok and c0_ok
    )
    print(
        f"alpha = {alpha:g}, c0 = {cfg.c0:g} <= bound {bound:.6g}: {c0_ok}; "
        f"tolerance = {tol:.3e}"
    )
    print(f"checked {checked} recorded steps; {len(violations)} violation(s)")
    if violations:
        worst = max(violations, key=lambda s: s.I12_transmission)
        print(f"worst: k = {worst.k}, I1+I2 over transmission = {worst.I12_transmission:.6e}", file=sys.stderr)
        return EXIT_THM2
    return EXIT_OK


def _cmd_presets(_args) -> int:
    for line in available_presets():
        print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swetbc",
        description="Shallow-water solver with transmission (open) boundaries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single simulation with snapshots and energy CSV")
    p_run.add_argument("--config", required=True, help="path to a key=value config file")
    p_run.add_argument("--out", default=None, help="output directory (default from config, else ./out)")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="c0 calibration sweep")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel worker processes (default 1)")
    p_sweep.add_argument("--allow-partial", action="store_true", help="exit 0 even if some cells failed")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_energy = sub.add_parser("energy", help="energy study over all five boundary cases")
    p_energy.add_argument("--config", required=True)
    p_energy.add_argument("--out", default=None)
    p_energy.set_defaults(func=_cmd_energy)

    p_thm = sub.add_parser("check-thm2", help="energy-inequality check at every recorded step")
    p_thm.add_argument("--config", required=True)
    p_thm.add_argument("--alpha", type=float, default=None, help="condition parameter in (0, 1)")
    p_thm.add_argument("--out", default=None)
    p_thm.set_defaults(func=_cmd_check_thm2)

    p_presets = sub.add_parser("presets", help="list available presets")
    p_presets.set_defaults(func=_cmd_presets)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, UsageError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BlowUpError, DryStateError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except SolverError as exc:  # any other package error
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
