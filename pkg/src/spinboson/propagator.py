"""Time-evolution operators for the spin-boson Hamiltonian (hbar = 1).

Two independent constructions are provided:

* ``oracle_propagator`` exponentiates the full ``2N x 2N`` Hamiltonian through
  its Hermitian eigendecomposition. It works for any ``alpha`` and ``beta``.
* ``closed_form_propagator`` uses the parity operator as the solution of the
  Riccati equation and only needs the eigendecompositions of the two dressed
  ``N x N`` Hamiltonians ``H_+ + alpha P`` and ``H_- - alpha P``. It requires
  ``beta = 0``.

Functions of Hermitian matrices are basis independent, so degenerate
eigenvalues need no special treatment. Eigendecompositions are cached per
parameter set; the cached arrays are read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import fock
from .model import ModelParams, ValidationError, assemble_block, assemble_total


class ClosedFormError(ValidationError):
    """Raised when the closed-form propagator is requested with beta != 0."""


def require_zero_beta(params: ModelParams) -> None:
    if params.beta != 0:
        raise ClosedFormError(f"closed form requires β=0, got beta={params.beta}")


@dataclass(frozen=True, eq=False)
class Propagator:
    time: float
    matrix: np.ndarray
    method: str

    def __matmul__(self, other):
        return self.matrix @ other


@dataclass(frozen=True, eq=False)
class Eigensystem:
    values: np.ndarray
    vectors: np.ndarray

    def exp(self, t: float) -> np.ndarray:
        """``exp(-i H t)`` for the decomposed Hermitian ``H``; exactly ``I`` at ``t = 0``."""
        if t == 0:
            return np.eye(len(self.values), dtype=complex)
        return (self.vectors * np.exp(-1j * self.values * t)) @ self.vectors.conj().T


@dataclass(frozen=True, eq=False)
class DressedSpectrum:
    """Eigensystems of ``H_+ + alpha P`` (plus) and ``H_- - alpha P`` (minus)."""

    plus: Eigensystem
    minus: Eigensystem
    parity_diagonal: np.ndarray

    @property
    def eigenvalues_plus(self) -> np.ndarray:
        return self.plus.values

    @property
    def eigenvalues_minus(self) -> np.ndarray:
        return self.minus.values

    def union(self) -> np.ndarray:
        return np.sort(np.concatenate([self.plus.values, self.minus.values]))


def _eigh(H: np.ndarray) -> Eigensystem:
    values, vectors = np.linalg.eigh(H)
    values.setflags(write=False)
    vectors.setflags(write=False)
    return Eigensystem(values, vectors)


@lru_cache(maxsize=32)
def total_eigensystem(params: ModelParams) -> Eigensystem:
    return _eigh(assemble_total(params))


@lru_cache(maxsize=32)
def dressed_spectrum(params: ModelParams) -> DressedSpectrum:
    require_zero_beta(params)
    bh = assemble_block(params)
    P = fock.parity(params.space)
    p = fock.parity_diagonal(params.space)
    p.setflags(write=False)
    return DressedSpectrum(
        _eigh(bh.h_plus + params.alpha * P),
        _eigh(bh.h_minus - params.alpha * P),
        p,
    )


def oracle_propagator(params: ModelParams, t: float) -> Propagator:
    t = float(t)
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    return Propagator(t, total_eigensystem(params).exp(t), "oracle")


def closed_form_propagator(params: ModelParams, t: float) -> Propagator:
    """``U = 1/2 [[U_+, V_+ P], [V_- P, U_-]]``.

    ``U_pm = e^{-i(H_pm + alpha P)t} + e^{-i(H_pm - alpha P)t}`` and ``V_pm`` the
    corresponding difference. Since ``P H_+ P = H_-`` at ``beta = 0``, the two
    exponentials not covered by the dressed spectrum follow from parity
    conjugation: ``e^{-i(H_+ - alpha P)t} = P e^{-i(H_- - alpha P)t} P`` and
    ``e^{-i(H_- + alpha P)t} = P e^{-i(H_+ + alpha P)t} P``.
    """
    require_zero_beta(params)
    t = float(t)
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    ds = dressed_spectrum(params)
    p = ds.parity_diagonal
    flip = np.outer(p, p)
    plus_plus = ds.plus.exp(t)       # e^{-i(H_+ + aP)t}
    minus_minus = ds.minus.exp(t)    # e^{-i(H_- - aP)t}
    plus_minus = minus_minus * flip  # e^{-i(H_+ - aP)t}
    minus_plus = plus_plus * flip    # e^{-i(H_- + aP)t}
    U_p = plus_plus + plus_minus
    U_m = minus_plus + minus_minus
    V_p = plus_plus - plus_minus
    V_m = minus_plus - minus_minus
    # right-multiplication by the diagonal P scales columns
    U = 0.5 * np.block([[U_p, V_p * p], [V_m * p, U_m]])
    return Propagator(t, U, "closed_form")


def propagator(params: ModelParams, t: float, method: str = "auto") -> Propagator:
    """Dispatch on ``method``: closed_form, oracle, or auto (closed form iff beta = 0)."""
    if method == "auto":
        method = "closed_form" if params.beta == 0 else "oracle"
    if method == "closed_form":
        return closed_form_propagator(params, t)
    if method == "oracle":
        return oracle_propagator(params, t)
    raise ValueError(f"unknown method {method!r}")


def propagate_state(U: Propagator, psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi)
    if psi.shape[0] != U.matrix.shape[1]:
        raise ValidationError(
            f"state has dimension {psi.shape[0]}, propagator {U.matrix.shape[1]}"
        )
    return U.matrix @ psi
