"""Initial states, composite evolution and reduced qubit dynamics.

The composite state is a density matrix on ``C^2 (x) F`` with the qubit as
the most significant index (see :mod:`spinboson.model`). Initial states are
always products ``rho_0 (x) rho_B``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import stats

from . import fock
from .fock import FockSpace
from .model import SIGMA_X, SIGMA_Y, SIGMA_Z, ModelParams, ValidationError, total_parity
from .propagator import dressed_spectrum, propagator, require_zero_beta, total_eigensystem

OBSERVABLES = ("sx", "sy", "sz", "coherence_abs", "purity", "parity_J")


def _check_density(rho: np.ndarray, tol: float, what: str) -> None:
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"{what} must be a square matrix, got shape {rho.shape}")
    if np.linalg.norm(rho - rho.conj().T) > tol:
        raise ValidationError(f"{what} is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ValidationError(f"{what} has trace {np.trace(rho).real:.12g}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValidationError(f"{what} is not positive semidefinite")


@dataclass(frozen=True, eq=False)
class QubitState:
    rho: np.ndarray
    tol: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (2, 2):
            raise ValidationError(f"qubit state must be 2x2, got {rho.shape}")
        _check_density(rho, self.tol, "qubit state")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_bloch(cls, r: Sequence[float]) -> "QubitState":
        x, y, z = (float(c) for c in r)
        if np.sqrt(x * x + y * y + z * z) > 1 + 1e-12:
            raise ValidationError(f"Bloch vector {r} is longer than 1")
        return cls(0.5 * (np.eye(2) + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z))

    def expectation(self, op: np.ndarray) -> float:
        return float(np.trace(self.rho @ op).real)

    @property
    def purity(self) -> float:
        return float(np.trace(self.rho @ self.rho).real)


@dataclass(frozen=True, eq=False)
class BathState:
    rho: np.ndarray
    kind: str
    space: FockSpace

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (self.space.total_dim,) * 2:
            raise ValidationError(
                f"bath state has shape {rho.shape}, space dimension is {self.space.total_dim}"
            )
        _check_density(rho, 1e-10, "bath state")
        object.__setattr__(self, "rho", rho)

    def mean_occupation(self, mode: int = 0) -> float:
        return float(np.trace(self.rho @ fock.number(self.space, mode)).real)


def vacuum_state(space: FockSpace) -> BathState:
    return fock_state(space, [0] * space.n_modes)


def fock_state(space: FockSpace, occupations: Sequence[int]) -> BathState:
    occupations = [int(n) for n in np.atleast_1d(occupations)]
    if len(occupations) != space.n_modes:
        raise ValidationError(f"need {space.n_modes} occupation number(s)")
    if any(not 0 <= n < d for n, d in zip(occupations, space.cutoffs)):
        raise ValidationError(f"occupations {occupations} exceed cutoffs {space.cutoffs}")
    index = int(np.ravel_multi_index(occupations, space.cutoffs))
    rho = np.zeros((space.total_dim, space.total_dim), dtype=complex)
    rho[index, index] = 1.0
    kind = "vacuum" if not any(occupations) else "fock"
    return BathState(rho, kind, space)


def thermal_state(space: FockSpace, omegas: Sequence[float], theta: float) -> BathState:
    """Truncated Gibbs state ``exp(-theta H_B) / Z`` at inverse temperature ``theta``."""
    theta = float(theta)
    if not theta > 0:
        raise ValidationError(f"inverse temperature must be > 0, got {theta}")
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    if omegas.shape != (space.n_modes,):
        raise ValidationError(f"need {space.n_modes} frequenc(ies)")
    energies = space.occupations() @ omegas
    # shift by the minimum so large theta does not underflow the ground state
    weights = np.exp(-theta * (energies - energies.min()))
    return BathState(np.diag(weights / weights.sum()).astype(complex), "thermal", space)


def coherent_state(space: FockSpace, amplitudes: Sequence[complex] | complex, tol: float = 1e-8) -> BathState:
    """Pure state ``D_f|0>`` with ``D_f = exp(A - A^dagger)``, ``A = sum conj(f_k) a_k``.

    Rejects amplitudes whose Poisson weight beyond the cutoff exceeds ``tol``.
    """
    amplitudes = [complex(f) for f in np.atleast_1d(amplitudes)]
    if len(amplitudes) != space.n_modes:
        raise ValidationError(f"need {space.n_modes} amplitude(s)")
    for f, d in zip(amplitudes, space.cutoffs):
        tail = stats.poisson.sf(d - 1, abs(f) ** 2)
        if tail > tol:
            raise ValidationError(
                f"coherent amplitude {f} loses {tail:.2e} probability beyond cutoff {d}"
            )
    psi = fock.multimode_displacement(space, amplitudes)[:, 0]
    psi = psi / np.linalg.norm(psi)
    return BathState(np.outer(psi, psi.conj()), "coherent", space)


def partial_trace(rho_total: np.ndarray) -> np.ndarray:
    """Trace out the bath: ``(rho_S)_ij = sum_n <i,n|rho|j,n>``."""
    rho_total = np.asarray(rho_total)
    if rho_total.ndim != 2 or rho_total.shape[0] != rho_total.shape[1] or rho_total.shape[0] % 2:
        raise ValidationError(f"cannot trace out a bath from shape {rho_total.shape}")
    N = rho_total.shape[0] // 2
    return np.einsum("injn->ij", rho_total.reshape(2, N, 2, N))


@dataclass
class EvolutionResult:
    times: np.ndarray
    rho: np.ndarray  # (n_times, 2, 2)
    observables: dict[str, np.ndarray]
    method: str

    def __len__(self) -> int:
        return len(self.times)

    @property
    def reduced_states(self) -> list[QubitState]:
        return [QubitState(r, tol=1e-8) for r in self.rho]


@dataclass(frozen=True, eq=False)
class _SpectralFrame:
    """``U(t) = T exp(-i diag(lam) t) T^-1`` with partial-trace kernels precomputed.

    ``kernels[i, j, a, b] = sum_n T[(i, n), a] conj(T[(j, n), b])`` so that the
    reduced state at time t is ``sum_ab M_ab kernels[i, j, a, b]`` with
    ``M = T^-1 rho_0 T^-dagger`` dressed by the phases.
    """

    lam: np.ndarray
    T: np.ndarray
    T_inv: np.ndarray
    kernels: np.ndarray
    parity_kernel: np.ndarray

    @classmethod
    def from_basis(cls, lam, T, T_inv, J) -> "_SpectralFrame":
        N = T.shape[0] // 2
        Tq = T.reshape(2, N, -1)
        kernels = np.stack(
            [np.stack([Tq[i].T @ Tq[j].conj() for j in range(2)]) for i in range(2)]
        )
        parity_kernel = (T.conj().T @ J @ T).T
        return cls(lam, T, T_inv, kernels, parity_kernel)


@lru_cache(maxsize=16)
def _frame(params: ModelParams, method: str) -> _SpectralFrame:
    J = total_parity(params)
    if method == "oracle":
        es = total_eigensystem(params)
        return _SpectralFrame.from_basis(es.values, es.vectors, es.vectors.conj().T, J)
    # closed form: S blockdiag(W_+, W_-) with S = [[1, -P], [P, 1]], S^-1 = S^dagger / 2
    ds = dressed_spectrum(params)
    N = params.block_dim
    P = np.diag(ds.parity_diagonal.astype(complex))
    I = np.eye(N)
    S = np.block([[I, -P], [P, I]])
    Z = np.zeros((N, N))
    W = np.block([[ds.plus.vectors, Z], [Z, ds.minus.vectors]])
    lam = np.concatenate([ds.plus.values, ds.minus.values])
    T = S @ W
    T_inv = 0.5 * W.conj().T @ S.conj().T
    return _SpectralFrame.from_basis(lam, T, T_inv, J)


def reduced_dynamics(
    params: ModelParams,
    rho0: QubitState,
    bath: BathState,
    times: Sequence[float],
    method: str = "auto",
    engine: str = "spectral",
) -> EvolutionResult:
    """Evolve ``rho0 (x) bath`` and trace out the bath at every time.

    ``method`` is ``closed_form`` (requires beta = 0), ``oracle`` or ``auto``.
    ``engine="direct"`` builds the full propagator at every time and
    conjugates the composite state; ``engine="spectral"`` (default) reuses one
    diagonalization and costs O(N^2) per time point.
    """
    if bath.space != params.space:
        raise ValidationError("bath state lives on a different Fock space")
    if method == "auto":
        method = "closed_form" if params.beta == 0 else "oracle"
    if method not in ("closed_form", "oracle"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed_form":
        require_zero_beta(params)
    times = np.asarray(times, dtype=float)
    rho_init = np.kron(rho0.rho, bath.rho)

    rho_t = np.empty((len(times), 2, 2), dtype=complex)
    parity_J = np.empty(len(times))
    if engine == "spectral":
        frame = _frame(params, method)
        R = frame.T_inv @ rho_init @ frame.T_inv.conj().T
        # weights[k] = R * kernel_k; each time point is then phase^T weights[k] conj(phase)
        weights = np.concatenate([frame.kernels.reshape(4, *R.shape), frame.parity_kernel[None]])
        weights *= R
        dim = R.shape[0]
        for i, t in enumerate(times):
            phase = np.exp(-1j * frame.lam * t)
            values = (weights.reshape(-1, dim) @ phase.conj()).reshape(5, dim) @ phase
            rho_t[i] = values[:4].reshape(2, 2)
            parity_J[i] = values[4].real
        # t = 0 is returned exactly, not through the change of basis
        exact = times == 0
        rho_t[exact] = rho0.rho
        parity_J[exact] = np.einsum("ij,ji->", rho_init, total_parity(params)).real
    elif engine == "direct":
        J = total_parity(params)
        for i, t in enumerate(times):
            if t == 0:
                rho_tot = rho_init
            else:
                U = propagator(params, t, method).matrix
                rho_tot = U @ rho_init @ U.conj().T
            rho_t[i] = partial_trace(rho_tot)
            parity_J[i] = np.einsum("ij,ji->", rho_tot, J).real
    else:
        raise ValueError(f"unknown engine {engine!r}")

    observables = {
        "sx": np.einsum("tij,ji->t", rho_t, SIGMA_X).real,
        "sy": np.einsum("tij,ji->t", rho_t, SIGMA_Y).real,
        "sz": np.einsum("tij,ji->t", rho_t, SIGMA_Z).real,
        "coherence_abs": np.abs(rho_t[:, 0, 1]),
        "purity": np.einsum("tij,tji->t", rho_t, rho_t).real,
        "parity_J": parity_J,
    }
    return EvolutionResult(times, rho_t, observables, method)


def parity_expectation_series(result: EvolutionResult) -> np.ndarray:
    """``<sigma_x (x) P>(t)``; constant whenever beta = 0."""
    return result.observables["parity_J"]


def parity_drift(result: EvolutionResult) -> float:
    series = parity_expectation_series(result)
    return float(np.max(np.abs(series - series[0])))


def uniform_grid(t_max: float, steps: int) -> np.ndarray:
    """``steps + 1`` equally spaced points on ``[0, t_max]``; just ``[0]`` when ``t_max == 0``."""
    if t_max < 0 or not np.isfinite(t_max):
        raise ValidationError(f"t_max must be finite and >= 0, got {t_max}")
    if steps < 1:
        raise ValidationError(f"steps must be >= 1, got {steps}")
    if t_max == 0:
        return np.zeros(1)
    return np.linspace(0.0, t_max, steps + 1)
