"""Spin-boson Hamiltonian in tensor and 2x2 block-operator form.

The qubit index is the most significant one in the total space
``C^2 (x) F``: basis index ``i * N + n`` with ``i`` the sigma_z eigenstate
(``i = 0`` is sigma_z = +1) and ``N`` the truncated Fock dimension. With this
ordering the top-left block of the total Hamiltonian is
``H_+ = H_B + V + beta`` and the bottom-right one ``H_- = H_B - V - beta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import fock
from .fock import FockSpace

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class ValidationError(ValueError):
    """Invalid model parameters or inputs."""


class RiccatiError(ValueError):
    """The supplied operator does not solve the Riccati equation."""


@dataclass(frozen=True)
class Mode:
    omega: float
    g: complex


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters; hashable so spectra can be cached per parameter set."""

    alpha: float
    beta: float
    modes: tuple[Mode, ...]
    space: FockSpace

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        modes = tuple(Mode(float(m.omega), complex(m.g)) for m in self.modes)
        object.__setattr__(self, "modes", modes)
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValidationError(f"{name} must be finite and >= 0, got {value}")
        if not modes:
            raise ValidationError("at least one bath mode is required")
        if len(modes) != self.space.n_modes:
            raise ValidationError(
                f"{len(modes)} mode(s) but the Fock space has {self.space.n_modes}"
            )
        for k, m in enumerate(modes):
            if not np.isfinite(m.omega) or m.omega <= 0:
                raise ValidationError(f"omega[{k}] must be > 0, got {m.omega}")
            if not np.isfinite(m.g):
                raise ValidationError(f"g[{k}] must be finite, got {m.g}")

    @classmethod
    def build(
        cls,
        alpha: float,
        beta: float,
        omegas: Sequence[float],
        couplings: Sequence[complex],
        cutoffs: Sequence[int] | int,
    ) -> "ModelParams":
        omegas = list(np.atleast_1d(omegas))
        couplings = list(np.atleast_1d(couplings))
        if len(omegas) != len(couplings):
            raise ValidationError("omegas and couplings must have the same length")
        cutoffs = list(np.atleast_1d(cutoffs))
        if len(cutoffs) == 1 and len(omegas) > 1:
            cutoffs = cutoffs * len(omegas)
        try:
            space = FockSpace(tuple(cutoffs))
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
        return cls(alpha, beta, tuple(Mode(w, g) for w, g in zip(omegas, couplings)), space)

    @property
    def omegas(self) -> np.ndarray:
        return np.array([m.omega for m in self.modes])

    @property
    def couplings(self) -> np.ndarray:
        return np.array([m.g for m in self.modes])

    @property
    def block_dim(self) -> int:
        return self.space.total_dim

    @property
    def reference_shift(self) -> float:
        """``E = sum_k |g_k|^2 / omega_k``."""
        return float(sum(abs(m.g) ** 2 / m.omega for m in self.modes))

    def with_space(self, space: FockSpace) -> "ModelParams":
        return ModelParams(self.alpha, self.beta, self.modes, space)

    def replace(self, **changes) -> "ModelParams":
        fields = dict(alpha=self.alpha, beta=self.beta, modes=self.modes, space=self.space)
        fields.update(changes)
        return ModelParams(**fields)


@dataclass(frozen=True, eq=False)
class BlockHamiltonian:
    h_plus: np.ndarray
    h_minus: np.ndarray
    alpha: float

    @property
    def block_dim(self) -> int:
        return self.h_plus.shape[0]

    def total(self) -> np.ndarray:
        """Assemble ``[[H_+, alpha], [alpha, H_-]]``."""
        off = self.alpha * np.eye(self.block_dim, dtype=complex)
        return np.block([[self.h_plus, off], [off, self.h_minus]])


def bath_hamiltonian(params: ModelParams) -> np.ndarray:
    """``H_B = sum_k omega_k n_k`` (diagonal, exact)."""
    occ = params.space.occupations()
    return np.diag((occ @ params.omegas).astype(complex))


def coupling_operator(params: ModelParams) -> np.ndarray:
    """``V = sum_k (conj(g_k) a_k + g_k a_k^dagger)``."""
    V = np.zeros((params.block_dim, params.block_dim), dtype=complex)
    for k, m in enumerate(params.modes):
        a = fock.annihilation(params.space, k)
        V += np.conj(m.g) * a + m.g * a.conj().T
    return V


def assemble_block(params: ModelParams) -> BlockHamiltonian:
    HB = bath_hamiltonian(params)
    V = coupling_operator(params)
    shift = params.beta * np.eye(params.block_dim)
    return BlockHamiltonian(HB + V + shift, HB - V - shift, params.alpha)


def assemble_total(params: ModelParams) -> np.ndarray:
    """``(beta sz + alpha sx) (x) I + I (x) H_B + sz (x) V`` via Kronecker products."""
    N = params.block_dim
    HS = params.beta * SIGMA_Z + params.alpha * SIGMA_X
    return (
        np.kron(HS, np.eye(N))
        + np.kron(IDENTITY_2, bath_hamiltonian(params))
        + np.kron(SIGMA_Z, coupling_operator(params))
    )


def blocks(M: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split a ``2N x 2N`` matrix into its four ``N x N`` blocks (TL, TR, BL, BR)."""
    N = M.shape[0] // 2
    return M[:N, :N], M[:N, N:], M[N:, :N], M[N:, N:]


def norm(M: np.ndarray, kind: str = "fro") -> float:
    """Frobenius norm by default; ``kind="spectral"`` for the 2-norm."""
    if kind == "fro":
        return float(np.linalg.norm(M))
    if kind == "spectral":
        return float(np.linalg.norm(M, 2))
    raise ValueError(f"unknown norm {kind!r}")


def riccati_residual(X: np.ndarray, bh: BlockHamiltonian, kind: str = "fro") -> float:
    """Norm of ``alpha X^2 + X H_+ - H_- X - alpha``."""
    N = bh.block_dim
    if X.shape != (N, N):
        raise ValidationError(f"X has shape {X.shape}, expected {(N, N)}")
    R = bh.alpha * (X @ X) + X @ bh.h_plus - bh.h_minus @ X - bh.alpha * np.eye(N)
    return norm(R, kind)


def similarity_transform(
    bh: BlockHamiltonian, X: np.ndarray, tol: float = 1e-10
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Block-diagonalize with ``S = [[1, -X^dagger], [X, 1]]``.

    Returns ``(S^-1 H S, S, S^-1)``. ``tol`` is relative to ``||H_+||_F``.
    """
    scale = max(1.0, norm(bh.h_plus))
    residual = riccati_residual(X, bh)
    if residual > tol * scale:
        raise RiccatiError(
            f"Riccati residual {residual:.3e} exceeds {tol:.1e} * ||H_+||"
        )
    N = bh.block_dim
    I = np.eye(N, dtype=complex)
    S = np.block([[I, -X.conj().T], [X, I]])
    try:
        S_inv = np.linalg.solve(S, np.eye(2 * N, dtype=complex))
    except np.linalg.LinAlgError as exc:
        raise RiccatiError("similarity transform is singular") from exc
    if np.linalg.norm(S @ S_inv - np.eye(2 * N)) > tol * np.sqrt(2 * N) * np.linalg.cond(S):
        raise RiccatiError("similarity transform is numerically singular")
    return S_inv @ bh.total() @ S, S, S_inv


def total_parity(params: ModelParams) -> np.ndarray:
    """``J = sigma_x (x) P``."""
    return np.kron(SIGMA_X, fock.parity(params.space))


def parity_constant_of_motion(params: ModelParams, kind: str = "fro") -> float:
    """Norm of the commutator ``[sigma_x (x) P, H_SB]``."""
    H = assemble_total(params)
    J = total_parity(params)
    return norm(J @ H - H @ J, kind)


def spectral_obstruction_check(
    params: ModelParams, tol: float = 1e-10
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Sorted spectra of ``H_+`` and ``H_-`` and whether they coincide.

    ``tol`` is relative to the largest eigenvalue magnitude (at least 1).
    """
    bh = assemble_block(params)
    spec_plus = np.linalg.eigvalsh(bh.h_plus)
    spec_minus = np.linalg.eigvalsh(bh.h_minus)
    scale = max(1.0, np.abs(spec_plus).max(), np.abs(spec_minus).max())
    matched = bool(np.max(np.abs(spec_plus - spec_minus)) <= tol * scale)
    return spec_plus, spec_minus, matched


def rescale_reference(bh: BlockHamiltonian, params: ModelParams) -> BlockHamiltonian:
    """Shift both diagonal blocks by ``E = sum_k |g_k|^2 / omega_k``."""
    if any(m.omega <= 0 for m in params.modes):
        raise ValidationError("rescaling requires every omega_k > 0")
    E = params.reference_shift * np.eye(bh.block_dim)
    return BlockHamiltonian(bh.h_plus + E, bh.h_minus + E, bh.alpha)
