"""Command-line front end: ``spinboson {verify,evolve,spectrum}``.

Exit codes: 0 success, 1 verification failure, 2 config/validation error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import plotting, report
from .config import ConfigError, RunConfig, load_config, parse_config, shipped_configs
from .model import ValidationError, assemble_total, spectral_obstruction_check
from .propagator import ClosedFormError, dressed_spectrum, require_zero_beta, total_eigensystem
from .verify import run_suite

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("spinboson")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinboson",
        description="Exact spin-boson dynamics on truncated Fock spaces.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file (default: bundled 'default' config)")
    common.add_argument("--example", help="use a bundled example config by name")
    common.add_argument("--out", help="output directory (overrides [run] out)")
    common.add_argument("--method", choices=["closed_form", "oracle", "both"])
    common.add_argument("--seed", type=int, help="seed for the random parameter sets")
    common.add_argument("--tolerance", type=float, help="base tolerance (default 1e-10)")
    common.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override a config value; may be repeated",
    )
    common.add_argument("--no-plot", action="store_true", help="skip figure output")
    common.add_argument("-v", "--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    verify.add_argument("--sets", type=int, default=50, help="number of random parameter sets")
    evolve = sub.add_parser("evolve", parents=[common], help="reduced qubit dynamics time series")
    evolve.add_argument(
        "--no-convergence", action="store_true", help="skip the doubled-cutoff convergence rerun"
    )
    sub.add_parser("spectrum", parents=[common], help="dressed and full spectra")
    sub.add_parser("examples", help="list the bundled example configs")
    return parser


def _overrides(args) -> dict[str, str]:
    overrides = {}
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects SECTION.KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    for flag, key in (("method", "run.method"), ("seed", "run.seed"), ("tolerance", "run.tolerance"), ("out", "run.out")):
        value = getattr(args, flag)
        if value is not None:
            overrides[key] = str(value)
    return overrides


def load_run_config(args) -> RunConfig:
    overrides = _overrides(args)
    if args.config and args.example:
        raise ConfigError("use either --config or --example, not both")
    if args.config:
        return load_config(args.config, overrides)
    name = args.example or "default"
    examples = shipped_configs()
    if name not in examples:
        raise ConfigError(f"unknown example {name!r}; choose from {sorted(examples)}")
    return parse_config(examples[name], overrides)


def _methods(cfg: RunConfig) -> list[str]:
    methods = ["closed_form", "oracle"] if cfg.method == "both" else [cfg.method]
    if "closed_form" in methods:
        require_zero_beta(cfg.params)
    return methods


def cmd_verify(cfg: RunConfig, args) -> int:
    _methods(cfg)
    checks = run_suite(cfg, n_sets=args.sets)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.group:<10} {c.name:<32} {c.measured:.3e} {c.comparison} {c.threshold:.1e}  {c.detail}")
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    report.write_json(
        out / "verify.json",
        {
            "config": cfg.to_dict(),
            "checks": [c.as_dict() for c in checks],
            "passed": not failed,
        },
    )
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_evolve(cfg: RunConfig, args) -> int:
    methods = _methods(cfg)
    results = [report.evolve(cfg, m) for m in methods]
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    discrepancy = report.write_evolution_csv(out / "evolution.csv", results)
    convergence = None
    if not args.no_convergence:
        convergence = report.convergence_report(cfg, results[0].method, base=results[0])
    summary = report.evolution_summary(cfg, results, discrepancy, convergence)
    report.write_json(out / "summary.json", summary)
    if not args.no_plot:
        plotting.plot_evolution(results, out / "evolution.png")
    print(f"wrote {len(results[0].times)} time points per method to {out / 'evolution.csv'}")
    if discrepancy is not None:
        print(f"max closed_form/oracle discrepancy: {discrepancy.max():.3e}")
    if convergence is not None:
        print(f"truncation convergence: max change {convergence['max_change']:.3e} on doubling cutoffs")
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, args) -> int:
    params = cfg.params
    H = assemble_total(params)
    hnorm = float(np.linalg.norm(H))
    full = total_eigensystem(params).values
    h_plus, h_minus, matched = spectral_obstruction_check(params)
    spectra = {"full": full, "h_plus": h_plus, "h_minus": h_minus}
    summary = {
        "config": cfg.to_dict(),
        "hamiltonian_norm": hnorm,
        "h_plus_h_minus_matched": matched,
        "h_plus_h_minus_max_difference": float(np.abs(h_plus - h_minus).max()),
    }
    try:
        ds = dressed_spectrum(params)
    except ClosedFormError as exc:
        summary["dressed_error"] = str(exc)
        log.warning("dressed spectra not computed: %s", exc)
    else:
        union = ds.union()
        spectra.update(dressed_plus=ds.eigenvalues_plus, dressed_minus=ds.eigenvalues_minus, dressed_union=union)
        discrepancy = float(np.abs(union - full).max())
        summary["max_discrepancy"] = discrepancy
        summary["max_discrepancy_relative"] = discrepancy / hnorm
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "spectrum.csv", "w") as fh:
        fh.write("set,index,eigenvalue\n")
        for name, values in spectra.items():
            for i, v in enumerate(values):
                fh.write(f"{name},{i},{report.fmt(v)}\n")
    report.write_json(out / "spectrum.json", summary)
    if not args.no_plot:
        plotting.plot_spectrum(spectra, out / "spectrum.png")
    if "max_discrepancy" in summary:
        print(f"dressed vs full spectrum: max discrepancy {summary['max_discrepancy']:.3e}")
    else:
        print(f"dressed spectra refused: {summary['dressed_error']}")
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "evolve": cmd_evolve, "spectrum": cmd_spectrum}


def _error(kind: str, exc: Exception) -> None:
    print(json.dumps({"error": kind, "message": str(exc)}, ensure_ascii=False), file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "examples":
        for name, text in shipped_configs().items():
            first = text.splitlines()[0].lstrip("; ").strip()
            print(f"{name:<12} {first}")
        return EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = load_run_config(args)
        return COMMANDS[args.command](cfg, args)
    except ClosedFormError as exc:
        _error("closed_form_unavailable", exc)
        return EXIT_CONFIG
    except (ConfigError, ValidationError) as exc:
        _error("invalid_config", exc)
        return EXIT_CONFIG
    except OSError as exc:
        _error("io", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
