"""Property-based checks of the algebraic invariants."""

import numpy as np
from hypothesis import given, settings, strategies as st

from spinboson import fock
from spinboson.dynamics import QubitState, partial_trace
from spinboson.fock import FockSpace
from spinboson.model import (
    ModelParams,
    assemble_block,
    assemble_total,
    parity_constant_of_motion,
    riccati_residual,
)
from spinboson.propagator import closed_form_propagator, oracle_propagator

SETTINGS = settings(max_examples=40, deadline=None)

amplitude = st.builds(
    lambda r, phi: r * np.exp(1j * phi),
    st.floats(0, 0.5),
    st.floats(0, 2 * np.pi),
)
coupling = st.builds(lambda r, phi: r * np.exp(1j * phi), st.floats(0, 1), st.floats(0, 2 * np.pi))


@st.composite
def symmetric_params(draw, max_modes=2):
    n_modes = draw(st.integers(1, max_modes))
    cutoffs = draw(st.lists(st.integers(2, 12 if n_modes == 1 else 5), min_size=n_modes, max_size=n_modes))
    omegas = draw(st.lists(st.floats(0.5, 2.0), min_size=n_modes, max_size=n_modes))
    gs = draw(st.lists(coupling, min_size=n_modes, max_size=n_modes))
    return ModelParams.build(draw(st.floats(0, 2)), 0.0, omegas, gs, cutoffs)


@SETTINGS
@given(f=amplitude, g=amplitude)
def test_composition_law(f, g):
    space = FockSpace((30,))
    low = fock.low_levels(space)
    lhs = fock.displacement(space, 0, f) @ fock.displacement(space, 0, g)
    rhs = np.exp(1j * np.imag(f * np.conj(g))) * fock.displacement(space, 0, f + g)
    assert np.abs((lhs - rhs)[np.ix_(low, low)]).max() <= 1e-8


@SETTINGS
@given(f=amplitude, phi=st.floats(0, 2 * np.pi, exclude_max=True))
def test_phase_rotates_displacement(f, phi):
    space = FockSpace((30,))
    lhs = fock.phase_operator(space, 0, phi) @ fock.displacement(space, 0, f) @ fock.phase_operator(space, 0, -phi)
    assert np.abs(lhs - fock.displacement(space, 0, np.exp(1j * phi) * f)).max() <= 1e-10


@SETTINGS
@given(f=amplitude, d=st.integers(2, 25))
def test_parity_conjugation_exact(f, d):
    space = FockSpace((d,))
    P = fock.parity(space)
    assert np.abs(P @ fock.displacement(space, 0, f) @ P - fock.displacement(space, 0, -f)).max() <= 1e-14


@SETTINGS
@given(params=symmetric_params())
def test_parity_solves_riccati(params):
    bh = assemble_block(params)
    P = fock.parity(params.space)
    assert riccati_residual(P, bh) <= 1e-12 * max(1.0, np.linalg.norm(bh.h_plus))
    assert np.abs(fock.conjugate_by_parity(params.space, bh.h_plus) - bh.h_minus).max() == 0


@SETTINGS
@given(params=symmetric_params(), beta=st.floats(0, 1))
def test_tensor_block_equivalence(params, beta):
    params = params.replace(beta=beta)
    assert np.abs(assemble_total(params) - assemble_block(params).total()).max() <= 1e-14


@SETTINGS
@given(params=symmetric_params())
def test_total_parity_conserved(params):
    H = assemble_total(params)
    assert parity_constant_of_motion(params) <= 1e-12 * max(1.0, np.linalg.norm(H))


@SETTINGS
@given(params=symmetric_params(), t=st.floats(-20, 20))
def test_closed_form_matches_oracle(params, t):
    dim = 2 * params.block_dim
    Uc = closed_form_propagator(params, t).matrix
    Uo = oracle_propagator(params, t).matrix
    assert np.linalg.norm(Uc - Uo) <= 1e-9 * dim
    assert np.linalg.norm(Uc @ Uc.conj().T - np.eye(dim)) <= 1e-10 * dim


@SETTINGS
@given(
    r=st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(lambda v: np.linalg.norm(v) <= 1),
    weights=st.lists(st.floats(0.01, 1), min_size=2, max_size=6),
)
def test_partial_trace_of_products(r, weights):
    M = QubitState.from_bloch(r).rho
    w = np.array(weights) / sum(weights)
    assert np.abs(partial_trace(np.kron(M, np.diag(w))) - M).max() <= 1e-15
