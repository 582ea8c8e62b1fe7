"""Invariant suite run by ``spinboson verify``.

Every check records the measured quantity next to its threshold so that a
report can be inspected without rerunning anything.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, Iterator

import numpy as np

from . import fock
from .config import RunConfig
from .dynamics import reduced_dynamics, parity_drift, uniform_grid
from .fock import FockSpace
from .model import (
    ModelParams,
    Mode,
    assemble_block,
    assemble_total,
    blocks,
    parity_constant_of_motion,
    riccati_residual,
    similarity_transform,
    spectral_obstruction_check,
    total_parity,
)
from .propagator import closed_form_propagator, dressed_spectrum, oracle_propagator, total_eigensystem

PROPAGATOR_TIMES = (0.1, 1.0, 5.0, 20.0)


@dataclass
class Check:
    name: str
    group: str
    measured: float
    threshold: float
    passed: bool
    comparison: str = "<="
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def _le(name, group, measured, threshold, detail="") -> Check:
    measured = float(measured)
    return Check(name, group, measured, float(threshold), bool(measured <= threshold), "<=", detail)


def _gt(name, group, measured, threshold, detail="") -> Check:
    measured = float(measured)
    return Check(name, group, measured, float(threshold), bool(measured > threshold), ">", detail)


def sample_params(
    rng: np.random.Generator, cutoffs: Iterable[int], beta: float = 0.0
) -> ModelParams:
    """Random parameters with alpha in [0, 2], omega in [0.5, 2], |g| <= 1."""
    space = FockSpace(tuple(cutoffs))
    modes = []
    for _ in range(space.n_modes):
        g = rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        modes.append(Mode(rng.uniform(0.5, 2.0), g))
    return ModelParams(rng.uniform(0, 2), beta, tuple(modes), space)


def sample_sets(seed: int, n_sets: int = 50) -> list[ModelParams]:
    """Half single-mode at d=32, half two-mode at d=(8, 8)."""
    rng = np.random.default_rng(seed)
    shapes = [(32,), (8, 8)]
    return [sample_params(rng, shapes[i % 2]) for i in range(n_sets)]


def fock_checks(space: FockSpace, f: complex, rng: np.random.Generator, tol: float) -> Iterator[Check]:
    group = "fock"
    worst = 0.0
    for k, d in enumerate(space.cutoffs):
        a = fock.annihilation(space, k)
        top = fock.number(space, k) == d - 1
        expected = np.eye(space.total_dim) - d * np.diag(np.diag(top).astype(float))
        worst = max(worst, np.abs(a @ a.conj().T - a.conj().T @ a - expected).max())
    yield _le("truncated_commutator", group, worst, 1e-12)

    P = fock.parity(space)
    yield _le("parity_involution", group, np.abs(P @ P - np.eye(space.total_dim)).max(), 0.0)
    worst = max(
        np.abs(P @ fock.annihilation(space, k) @ P + fock.annihilation(space, k)).max()
        for k in range(space.n_modes)
    )
    yield _le("parity_flips_ladder", group, worst, 0.0)
    per_mode = [
        fock.phase_operator(FockSpace((d,)), 0, np.pi) for d in space.cutoffs
    ]
    kron = per_mode[0]
    for M in per_mode[1:]:
        kron = np.kron(kron, M)
    yield _le("parity_is_tensor_product", group, np.abs(kron - P).max(), 0.0)

    D = fock.displacement(space, 0, f)
    D_minus = fock.displacement(space, 0, -f)
    yield _le("displacement_inverse", group, np.abs(D @ D_minus - np.eye(space.total_dim)).max(), 1e-12)
    yield _le("parity_conjugates_displacement", group, np.abs(P @ D @ P - D_minus).max(), 1e-12)

    # composition and phase conjugation at d = 30, compared on levels n < 15
    s30 = FockSpace((30,))
    low = fock.low_levels(s30)
    worst_comp = 0.0
    worst_phase = 0.0
    for _ in range(10):
        f1, f2 = (rng.uniform(0, 0.5) * np.exp(1j * rng.uniform(0, 2 * np.pi)) for _ in range(2))
        lhs = fock.displacement(s30, 0, f1) @ fock.displacement(s30, 0, f2)
        rhs = np.exp(1j * np.imag(f1 * np.conj(f2))) * fock.displacement(s30, 0, f1 + f2)
        worst_comp = max(worst_comp, np.abs((lhs - rhs)[np.ix_(low, low)]).max())
        phi = rng.uniform(0, 2 * np.pi)
        conj = fock.phase_operator(s30, 0, phi) @ fock.displacement(s30, 0, f1) @ fock.phase_operator(s30, 0, -phi)
        worst_phase = max(worst_phase, np.abs(conj - fock.displacement(s30, 0, np.exp(1j * phi) * f1)).max())
    yield _le("displacement_composition", group, worst_comp, 1e-8, "d=30, levels n<15")
    yield _le("phase_conjugation", group, worst_phase, tol, "d=30")


def model_checks(sets: list[ModelParams]) -> Iterator[Check]:
    group = "model"
    tensor_block = riccati = offdiag = diag = motion = spectra = 0.0
    for params in sets:
        bh = assemble_block(params)
        H = assemble_total(params)
        tensor_block = max(tensor_block, np.abs(H - bh.total()).max())
        P = fock.parity(params.space)
        riccati = max(riccati, riccati_residual(P, bh) / np.linalg.norm(bh.h_plus))
        D, _, _ = similarity_transform(bh, P)
        tl, tr, bl, br = blocks(D)
        hnorm = np.linalg.norm(H)
        offdiag = max(offdiag, max(np.linalg.norm(tr), np.linalg.norm(bl)) / hnorm)
        diag = max(
            diag,
            max(
                np.linalg.norm(tl - (bh.h_plus + params.alpha * P)),
                np.linalg.norm(br - (bh.h_minus - params.alpha * P)),
            )
            / hnorm,
        )
        motion = max(motion, parity_constant_of_motion(params) / hnorm)
        sp, sm, _ = spectral_obstruction_check(params)
        spectra = max(spectra, np.abs(sp - sm).max())
    n = f"{len(sets)} sets"
    yield _le("block_tensor_equivalence", group, tensor_block, 1e-14, n)
    yield _le("riccati_residual_parity", group, riccati, 1e-12, n + ", relative to ||H_+||_F")
    yield _le("diagonalization_offdiagonal", group, offdiag, 1e-12, n + ", relative to ||H||_F")
    yield _le("diagonalization_blocks", group, diag, 1e-12, n + ", relative to ||H||_F")
    yield _le("constant_of_motion", group, motion, 1e-12, n + ", relative to ||H||_F")
    yield _le("spectra_match_beta0", group, spectra, 1e-10, n)


def broken_symmetry_checks(params: ModelParams) -> Iterator[Check]:
    """Checks that must *fail* to hold when beta > 0."""
    group = "beta>0"
    H = assemble_total(params)
    yield _gt(
        "constant_of_motion_broken",
        group,
        parity_constant_of_motion(params) / np.linalg.norm(H),
        1e-3,
        "relative to ||H||_F",
    )
    sp, sm, matched = spectral_obstruction_check(params)
    yield _le("spectra_shifted_by_2beta", group, np.abs(sm - (sp - 2 * params.beta)).max(), 1e-10)
    yield _gt("spectra_mismatch", group, np.abs(sp - sm).max(), 1e-10, f"matched={matched}")
    bh = assemble_block(params)
    P = fock.parity(params.space)
    expected = 2 * params.beta * np.sqrt(params.block_dim)
    yield _le(
        "riccati_residual_equals_2beta",
        group,
        abs(riccati_residual(P, bh) - expected) / expected,
        1e-12,
        "relative deviation from 2*beta*sqrt(N)",
    )


def propagator_checks(sets: list[ModelParams], tol: float) -> Iterator[Check]:
    group = "propagator"
    equiv = unitary = union = conserve = 0.0
    for params in sets:
        dim = 2 * params.block_dim
        J = total_parity(params)
        for t in PROPAGATOR_TIMES:
            Uc = closed_form_propagator(params, t).matrix
            Uo = oracle_propagator(params, t).matrix
            equiv = max(equiv, np.linalg.norm(Uc - Uo) / dim)
            for U in (Uc, Uo):
                unitary = max(unitary, np.linalg.norm(U @ U.conj().T - np.eye(dim)))
            conserve = max(conserve, np.linalg.norm(Uc.conj().T @ J @ Uc - J))
        full = total_eigensystem(params).values
        hnorm = np.linalg.norm(assemble_total(params))
        union = max(union, np.abs(dressed_spectrum(params).union() - full).max() / hnorm)
    n = f"{len(sets)} sets, t in {PROPAGATOR_TIMES}"
    yield _le("closed_form_vs_oracle", group, equiv, 1e-9, n + ", ||dU||_F / dim")
    yield _le("unitarity", group, unitary, tol, n)
    yield _le("parity_conserved_by_U", group, conserve, tol, n)
    yield _le("dressed_spectrum_union", group, union, tol, "relative to ||H||_F")


def dynamics_checks(cfg: RunConfig, tol: float) -> Iterator[Check]:
    group = "dynamics"
    params = cfg.params
    times = uniform_grid(cfg.t_max, cfg.steps)
    rho0, bath = cfg.initial_state(), cfg.bath_state()
    method = "closed_form" if params.beta == 0 else "oracle"
    res = reduced_dynamics(params, rho0, bath, times, method)
    traces = np.trace(res.rho, axis1=1, axis2=2)
    yield _le("trace_preserved", group, np.abs(traces - 1).max(), tol)
    min_eig = min(np.linalg.eigvalsh(r).min() for r in res.rho)
    yield _le("positivity", group, -min_eig, 1e-9, "negated minimum eigenvalue")
    purity = res.observables["purity"]
    yield _le("purity_upper", group, purity.max() - 1, tol)
    yield _le("purity_lower", group, 0.5 - purity.min(), 1e-12)
    if params.beta == 0:
        yield _le("parity_drift", group, parity_drift(res), 1e-9)
        oracle = reduced_dynamics(params, rho0, bath, times, "oracle")
        yield _le("closed_form_vs_oracle_reduced", group, np.abs(res.rho - oracle.rho).max(), 1e-9)
    if params.alpha == 0:
        pops = res.rho[:, 0, 0].real
        yield _le("populations_frozen", group, np.abs(pops - pops[0]).max(), tol)


def run_suite(cfg: RunConfig, n_sets: int = 50) -> list[Check]:
    """All checks for ``cfg`` plus ``n_sets`` seeded random beta = 0 parameter sets."""
    tol = cfg.tolerance
    rng = np.random.default_rng(cfg.seed)
    params = cfg.params
    config_sets = [params] if params.beta == 0 else []
    random_sets = sample_sets(cfg.seed, n_sets)
    f = params.modes[0].g / params.modes[0].omega
    checks = list(fock_checks(params.space, f, rng, tol))
    checks += model_checks(config_sets + random_sets)
    if params.beta > 0:
        checks += broken_symmetry_checks(params)
    checks += propagator_checks(config_sets + random_sets, tol)
    checks += dynamics_checks(cfg, tol)
    return checks
