"""CSV/JSON serialization and the truncation-convergence report.

Numbers are written in scientific notation with 17 significant digits so that
doubles round-trip exactly and identical configs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any

import numpy as np

from . import fock
from .config import RunConfig
from .dynamics import OBSERVABLES, EvolutionResult, parity_drift, reduced_dynamics, uniform_grid
from .model import assemble_block, assemble_total, parity_constant_of_motion, riccati_residual

CSV_COLUMNS = [
    "t",
    "rho00_re", "rho00_im",
    "rho01_re", "rho01_im",
    "rho10_re", "rho10_im",
    "rho11_re", "rho11_im",
    *OBSERVABLES,
    "method",
]
CONVERGENCE_LIMIT = 1e-6


def fmt(x: float) -> str:
    return format(float(x), ".16e")


def evolution_rows(result: EvolutionResult, discrepancy: np.ndarray | None = None) -> list[list[str]]:
    rows = []
    for k, t in enumerate(result.times):
        rho = result.rho[k]
        row = [fmt(t)]
        for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)):
            row += [fmt(rho[i, j].real), fmt(rho[i, j].imag)]
        row += [fmt(result.observables[name][k]) for name in OBSERVABLES]
        row.append(result.method)
        if discrepancy is not None:
            row.append(fmt(discrepancy[k]))
        rows.append(row)
    return rows


def write_evolution_csv(path: Path, results: list[EvolutionResult]) -> np.ndarray | None:
    """Write one block of rows per method.

    With two results an extra ``discrepancy`` column holds, per time point,
    the largest entrywise difference between the two reduced states.
    Returns that discrepancy series, or ``None`` for a single method.
    """
    discrepancy = None
    header = list(CSV_COLUMNS)
    if len(results) == 2:
        discrepancy = np.abs(results[0].rho - results[1].rho).max(axis=(1, 2))
        header.append("discrepancy")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for result in results:
            writer.writerows(evolution_rows(result, discrepancy))
    return discrepancy


def read_evolution_csv(path: Path) -> dict[str, list]:
    """Columns of an evolution CSV; numeric columns as float arrays."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    columns = {}
    for key in rows[0]:
        values = [row[key] for row in rows]
        columns[key] = values if key == "method" else np.array(values, dtype=float)
    return columns


def write_json(path: Path, payload: dict[str, Any]) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def observable_table(result: EvolutionResult) -> dict[str, np.ndarray]:
    """Every numeric CSV column except ``t``."""
    table = {}
    for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)):
        table[f"rho{i}{j}_re"] = result.rho[:, i, j].real
        table[f"rho{i}{j}_im"] = result.rho[:, i, j].imag
    table.update(result.observables)
    return table


def evolve(cfg: RunConfig, method: str) -> EvolutionResult:
    return reduced_dynamics(
        cfg.params, cfg.initial_state(), cfg.bath_state(), uniform_grid(cfg.t_max, cfg.steps), method
    )


def convergence_report(cfg: RunConfig, method: str, base: EvolutionResult | None = None, factor: int = 2) -> dict[str, Any]:
    """Rerun with every cutoff multiplied by ``factor`` and compare all observables."""
    base = base if base is not None else evolve(cfg, method)
    fine = evolve(cfg.doubled(factor), method)
    coarse_table, fine_table = observable_table(base), observable_table(fine)
    changes = {k: float(np.abs(coarse_table[k] - fine_table[k]).max()) for k in coarse_table}
    worst = max(changes.values())
    return {
        "cutoffs": list(cfg.params.space.cutoffs),
        "refined_cutoffs": [factor * d for d in cfg.params.space.cutoffs],
        "method": method,
        "max_change": worst,
        "max_change_by_column": changes,
        "limit": CONVERGENCE_LIMIT,
        "converged": worst < CONVERGENCE_LIMIT,
    }


def residual_summary(cfg: RunConfig) -> dict[str, Any]:
    params = cfg.params
    bh = assemble_block(params)
    H = assemble_total(params)
    P = fock.parity(params.space)
    return {
        "riccati_residual_parity": riccati_residual(P, bh),
        "riccati_residual_relative": riccati_residual(P, bh) / np.linalg.norm(bh.h_plus),
        "parity_commutator": parity_constant_of_motion(params),
        "parity_commutator_relative": parity_constant_of_motion(params) / np.linalg.norm(H),
        "hamiltonian_norm": float(np.linalg.norm(H)),
    }


def evolution_summary(
    cfg: RunConfig,
    results: list[EvolutionResult],
    discrepancy: np.ndarray | None,
    convergence: dict[str, Any] | None,
) -> dict[str, Any]:
    residuals = residual_summary(cfg)
    for result in results:
        residuals[f"parity_drift_{result.method}"] = parity_drift(result)
        traces = np.trace(result.rho, axis1=1, axis2=2)
        residuals[f"trace_error_{result.method}"] = float(np.abs(traces - 1).max())
    if discrepancy is not None:
        residuals["max_discrepancy"] = float(discrepancy.max())
    return {
        "config": cfg.to_dict(),
        "tolerances": {"base": cfg.tolerance, "convergence": CONVERGENCE_LIMIT},
        "methods": [r.method for r in results],
        "n_times": len(results[0].times),
        "residuals": residuals,
        "convergence": convergence,
    }
