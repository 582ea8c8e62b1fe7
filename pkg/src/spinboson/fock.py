"""Bosonic operators on truncated single- and multi-mode Fock spaces.

Every operator is a dense complex ``numpy`` array. Multi-mode basis states are
ordered lexicographically by ``(n_0, n_1, ...)``, i.e. mode 0 is the most
significant index, which is exactly the ordering produced by ``np.kron``.

Diagonal constructions (number, parity, phase) are exact. Displacement
operators are matrix exponentials of the truncated generator and therefore
carry truncation error near the highest kept levels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import prod
from typing import Sequence

import numpy as np
import scipy.linalg

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class FockSpace:
    """Truncated Fock space; mode ``k`` keeps levels ``0 .. cutoffs[k]-1``."""

    cutoffs: tuple[int, ...]

    def __post_init__(self):
        cutoffs = tuple(int(d) for d in np.atleast_1d(self.cutoffs))
        if not cutoffs:
            raise ValueError("FockSpace needs at least one mode")
        if any(d < 2 for d in cutoffs):
            raise ValueError(f"every cutoff must be >= 2, got {cutoffs}")
        object.__setattr__(self, "cutoffs", cutoffs)

    @property
    def n_modes(self) -> int:
        return len(self.cutoffs)

    @property
    def total_dim(self) -> int:
        return prod(self.cutoffs)

    def occupations(self) -> np.ndarray:
        """Occupation numbers of every basis state, shape ``(total_dim, n_modes)``."""
        grids = np.indices(self.cutoffs).reshape(self.n_modes, -1)
        return grids.T

    def doubled(self, factor: int = 2) -> "FockSpace":
        return FockSpace(tuple(factor * d for d in self.cutoffs))

    def _check_mode(self, mode: int) -> None:
        if not 0 <= mode < self.n_modes:
            raise IndexError(f"mode {mode} out of range for {self.n_modes} mode(s)")


def _embed(space: FockSpace, mode: int, local: np.ndarray) -> np.ndarray:
    """Place a single-mode operator on ``mode``, identity on every other factor."""
    space._check_mode(mode)
    factors = [np.eye(d) for d in space.cutoffs]
    factors[mode] = local
    return reduce(np.kron, factors).astype(complex)


def _local_annihilation(d: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1)


def annihilation(space: FockSpace, mode: int = 0) -> np.ndarray:
    """Annihilation operator ``a_mode``: ``a|n> = sqrt(n)|n-1>``."""
    space._check_mode(mode)
    return _embed(space, mode, _local_annihilation(space.cutoffs[mode]))


def creation(space: FockSpace, mode: int = 0) -> np.ndarray:
    return annihilation(space, mode).conj().T


def number(space: FockSpace, mode: int = 0) -> np.ndarray:
    """Number operator of one mode, built directly as a diagonal."""
    space._check_mode(mode)
    return np.diag(space.occupations()[:, mode].astype(complex))


def total_number(space: FockSpace) -> np.ndarray:
    return np.diag(space.occupations().sum(axis=1).astype(complex))


def displacement(space: FockSpace, mode: int, f: complex) -> np.ndarray:
    """Displacement ``D_f = exp(conj(f) a - f a^dagger)`` on one mode.

    The exponential is taken of the truncated generator, so ``D_f D_{-f} = I``
    and ``P D_f P = D_{-f}`` hold to rounding, while the vacuum amplitude and
    the composition law are only accurate away from the top levels.
    """
    f = complex(f)
    if not np.isfinite(f):
        raise ValueError(f"displacement amplitude must be finite, got {f}")
    if f == 0:
        return np.eye(space.total_dim, dtype=complex)
    a = annihilation(space, mode)
    return scipy.linalg.expm(np.conj(f) * a - f * a.conj().T)


def multimode_displacement(space: FockSpace, amplitudes: Sequence[complex]) -> np.ndarray:
    """``exp(A - A^dagger)`` with ``A = sum_k conj(f_k) a_k``."""
    amplitudes = [complex(f) for f in amplitudes]
    if len(amplitudes) != space.n_modes:
        raise ValueError(
            f"expected {space.n_modes} amplitudes, got {len(amplitudes)}"
        )
    if not all(np.isfinite(f) for f in amplitudes):
        raise ValueError("displacement amplitudes must be finite")
    if all(f == 0 for f in amplitudes):
        return np.eye(space.total_dim, dtype=complex)
    A = sum(np.conj(f) * annihilation(space, k) for k, f in enumerate(amplitudes))
    return scipy.linalg.expm(A - A.conj().T)


def parity_diagonal(space: FockSpace) -> np.ndarray:
    """Diagonal of the parity operator, ``(-1)**sum_k n_k`` as floats."""
    return np.where(space.occupations().sum(axis=1) % 2 == 0, 1.0, -1.0)


def parity(space: FockSpace) -> np.ndarray:
    """Bosonic parity ``exp(i pi sum_k n_k)``; exactly Hermitian and involutive."""
    return np.diag(parity_diagonal(space).astype(complex))


def phase_operator(space: FockSpace, mode: int, phi: float) -> np.ndarray:
    """``exp(i phi a^dagger a)`` on one mode.

    Phases are evaluated as ``(e^{i phi})**n`` so that ``phi = pi`` reproduces
    the parity entries +-1 without ``sin(pi)`` residue.
    """
    space._check_mode(mode)
    phi = float(phi)
    if not np.isfinite(phi):
        raise ValueError(f"phase must be finite, got {phi}")
    n = space.occupations()[:, mode]
    if phi == np.pi:
        return np.diag(np.where(n % 2 == 0, 1.0, -1.0).astype(complex))
    return np.diag(np.exp(1j * phi * n))


def conjugate_by_parity(space: FockSpace, M: np.ndarray) -> np.ndarray:
    """``P M P`` via sign flips rather than matrix products (exact)."""
    p = parity_diagonal(space)
    return M * np.outer(p, p)


def low_levels(space: FockSpace, keep: float = 0.5) -> np.ndarray:
    """Indices of basis states with every ``n_k < keep * d_k``.

    Used to compare operator identities that only hold away from the
    truncation edge.
    """
    limits = np.array([max(1, int(keep * d)) for d in space.cutoffs])
    return np.flatnonzero(np.all(space.occupations() < limits, axis=1))


def is_hermitian(M: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return np.linalg.norm(M - M.conj().T) <= tol * max(1.0, np.linalg.norm(M))


def is_unitary(M: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return np.linalg.norm(M @ M.conj().T - np.eye(M.shape[0])) <= tol * np.sqrt(M.shape[0])
