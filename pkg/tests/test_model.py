import numpy as np
import pytest

from spinboson import fock
from spinboson.model import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BlockHamiltonian,
    ModelParams,
    RiccatiError,
    ValidationError,
    assemble_block,
    assemble_total,
    blocks,
    coupling_operator,
    parity_constant_of_motion,
    rescale_reference,
    riccati_residual,
    similarity_transform,
    spectral_obstruction_check,
)
from spinboson.verify import sample_params


@pytest.fixture
def single():
    return ModelParams.build(1.0, 0.0, [1.0], [0.4], 16)


@pytest.fixture
def two_mode():
    return ModelParams.build(0.7, 0.0, [1.0, 1.5], [0.3 + 0.1j, -0.2j], (6, 5))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(alpha=-1, beta=0, omegas=[1], couplings=[0], cutoffs=4),
        dict(alpha=0, beta=-0.1, omegas=[1], couplings=[0], cutoffs=4),
        dict(alpha=0, beta=0, omegas=[0.0], couplings=[0.1], cutoffs=4),
        dict(alpha=0, beta=0, omegas=[1, 2], couplings=[0.1], cutoffs=4),
        dict(alpha=np.inf, beta=0, omegas=[1], couplings=[0], cutoffs=4),
        dict(alpha=0, beta=0, omegas=[1], couplings=[0], cutoffs=1),
    ],
)
def test_invalid_params(kwargs):
    with pytest.raises(ValidationError):
        ModelParams.build(**kwargs)


def test_params_hashable_and_shared_cutoff():
    p = ModelParams.build(1, 0, [1, 2], [0.1, 0.2], 5)
    assert p.space.cutoffs == (5, 5)
    assert hash(p) == hash(ModelParams.build(1, 0, [1, 2], [0.1, 0.2], 5))


def test_block_free_bath():
    p = ModelParams.build(0.5, 0.0, [1.2], [0.0], 6)
    bh = assemble_block(p)
    HB = np.diag(1.2 * np.arange(6))
    np.testing.assert_array_equal(bh.h_plus, HB)
    np.testing.assert_array_equal(bh.h_minus, HB)


def test_block_single_mode_form(single):
    bh = assemble_block(single)
    a = fock.annihilation(single.space)
    g = 0.4
    expected = 1.0 * a.conj().T @ a + (np.conj(g) * a + g * a.conj().T)
    np.testing.assert_allclose(bh.h_plus, expected, atol=1e-14)


def test_block_difference(two_mode):
    p = two_mode.replace(beta=0.3)
    bh = assemble_block(p)
    V = coupling_operator(p)
    np.testing.assert_allclose(bh.h_plus - bh.h_minus, 2 * V + 0.6 * np.eye(p.block_dim), atol=1e-14)


def test_total_block_layout(two_mode):
    H = assemble_total(two_mode)
    bh = assemble_block(two_mode)
    tl, tr, bl, br = blocks(H)
    np.testing.assert_array_equal(tl, bh.h_plus)
    np.testing.assert_array_equal(br, bh.h_minus)
    np.testing.assert_array_equal(tr, two_mode.alpha * np.eye(two_mode.block_dim))
    np.testing.assert_array_equal(bl, tr)
    assert np.linalg.norm(H - H.conj().T) == 0


def test_total_trivial():
    p = ModelParams.build(0, 0, [1.0], [0], 5)
    H = assemble_total(p)
    HB = np.diag(np.arange(5.0))
    np.testing.assert_array_equal(H, np.block([[HB, np.zeros((5, 5))], [np.zeros((5, 5)), HB]]))


def test_tensor_equals_block_random():
    rng = np.random.default_rng(7)
    for cutoffs in [(10,), (4, 3)]:
        for _ in range(10):
            p = sample_params(rng, cutoffs, beta=rng.uniform(0, 1))
            assert np.abs(assemble_total(p) - assemble_block(p).total()).max() <= 1e-14


def test_riccati_parity_exact(two_mode):
    bh = assemble_block(two_mode)
    assert riccati_residual(fock.parity(two_mode.space), bh) <= 1e-12 * np.linalg.norm(bh.h_plus)


def test_riccati_zero_alpha_zero_X():
    p = ModelParams.build(0, 0.4, [1.0], [0.3], 8)
    assert riccati_residual(np.zeros((8, 8)), assemble_block(p)) == 0


def test_riccati_beta_elementwise_oracle():
    p = ModelParams.build(1.0, 0.5, [1.0], [0.4 + 0.1j], 8)
    bh = assemble_block(p)
    X = fock.parity(p.space)
    N = p.block_dim
    R = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            value = -p.alpha * (i == j)
            for k in range(N):
                value += p.alpha * X[i, k] * X[k, j] + X[i, k] * bh.h_plus[k, j] - bh.h_minus[i, k] * X[k, j]
            R[i, j] = value
    expected = np.sqrt(np.sum(np.abs(R) ** 2))
    assert riccati_residual(X, bh) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(2 * p.beta * np.sqrt(N), rel=1e-12)


def test_riccati_dimension_mismatch(single):
    with pytest.raises(ValidationError):
        riccati_residual(np.eye(3), assemble_block(single))


def test_riccati_spectral_norm(single):
    bh = assemble_block(single.replace(beta=0.25))
    P = fock.parity(single.space)
    assert riccati_residual(P, bh, kind="spectral") == pytest.approx(0.5, rel=1e-12)


def test_similarity_parity(two_mode):
    bh = assemble_block(two_mode)
    P = fock.parity(two_mode.space)
    D, S, S_inv = similarity_transform(bh, P)
    H = bh.total()
    tl, tr, bl, br = blocks(D)
    scale = np.linalg.norm(H)
    assert np.linalg.norm(tr) <= 1e-12 * scale
    assert np.linalg.norm(bl) <= 1e-12 * scale
    np.testing.assert_allclose(tl, bh.h_plus + two_mode.alpha * P, atol=1e-12)
    np.testing.assert_allclose(br, bh.h_minus - two_mode.alpha * P, atol=1e-12)
    I = np.eye(two_mode.block_dim)
    closed = 0.5 * np.block([[I, P], [-P, I]])
    np.testing.assert_allclose(S_inv, closed, atol=1e-14)
    np.testing.assert_allclose(np.linalg.inv(S), closed, atol=1e-14)


def test_similarity_alpha_zero():
    p = ModelParams.build(0, 0.3, [1.0], [0.2], 6)
    bh = assemble_block(p)
    D, S, S_inv = similarity_transform(bh, np.zeros((6, 6)))
    np.testing.assert_array_equal(S, np.eye(12))
    np.testing.assert_allclose(D, bh.total(), atol=0)


def test_similarity_rejects_non_solution(single):
    bh = assemble_block(single.replace(beta=0.5))
    with pytest.raises(RiccatiError):
        similarity_transform(bh, fock.parity(single.space))


def test_constant_of_motion_beta_zero(two_mode):
    H = assemble_total(two_mode)
    assert parity_constant_of_motion(two_mode) <= 1e-12 * np.linalg.norm(H)


def test_constant_of_motion_broken_by_beta():
    p = ModelParams.build(0.0, 1.0, [1.0], [0.0], 6)
    N = p.block_dim
    # [sx (x) P, beta sz (x) I] = -2i beta sy (x) P
    expected = np.linalg.norm(-2j * p.beta * np.kron(SIGMA_Y, fock.parity(p.space)))
    assert parity_constant_of_motion(p) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(2 * np.sqrt(2 * N))


def test_free_qubit_commutes_with_both_symmetries():
    p = ModelParams.build(0.0, 0.0, [1.0], [0.5], 8)
    H = assemble_total(p)
    Z = np.kron(SIGMA_Z, np.eye(8))
    J = np.kron(SIGMA_X, fock.parity(p.space))
    assert np.abs(Z @ H - H @ Z).max() == 0
    assert np.abs(J @ H - H @ J).max() == 0


def test_spectral_obstruction(single):
    sp, sm, matched = spectral_obstruction_check(single)
    assert matched
    np.testing.assert_allclose(sp, sm, atol=1e-10)
    biased = single.replace(beta=0.7)
    sp_b, sm_b, matched_b = spectral_obstruction_check(biased)
    assert not matched_b
    np.testing.assert_allclose(sm_b, sp_b - 1.4, atol=1e-10)


def test_spectral_free_bath_levels():
    p = ModelParams.build(0, 0, [1.0, 2.5], [0, 0], (3, 3))
    sp, sm, matched = spectral_obstruction_check(p)
    levels = np.sort([n0 * 1.0 + n1 * 2.5 for n0 in range(3) for n1 in range(3)])
    np.testing.assert_allclose(sp, levels, atol=1e-12)
    np.testing.assert_allclose(sm, levels, atol=1e-12)
    assert matched


def test_rescale_noop_without_coupling():
    p = ModelParams.build(0.3, 0, [1.0], [0], 5)
    bh = assemble_block(p)
    r = rescale_reference(bh, p)
    np.testing.assert_array_equal(r.h_plus, bh.h_plus)


def test_rescale_matches_displaced_number_operator():
    p = ModelParams.build(0.0, 0.0, [1.0], [0.3], 40)
    r = rescale_reference(assemble_block(p), p)
    f = 0.3 / 1.0
    space = p.space
    rhs = 1.0 * fock.displacement(space, 0, f) @ fock.number(space) @ fock.displacement(space, 0, -f)
    low = fock.low_levels(space)
    assert np.abs((r.h_plus - rhs)[np.ix_(low, low)]).max() <= 1e-8
    # and the partner block is displaced the other way
    rhs_minus = fock.displacement(space, 0, -f) @ fock.number(space) @ fock.displacement(space, 0, f)
    assert np.abs((r.h_minus - rhs_minus)[np.ix_(low, low)]).max() <= 1e-8


def test_rescale_multimode():
    p = ModelParams.build(0.0, 0.0, [1.0, 1.7], [0.2, 0.1j], (14, 14))
    r = rescale_reference(assemble_block(p), p)
    f = p.couplings / p.omegas
    D = fock.multimode_displacement(p.space, f)
    Dm = fock.multimode_displacement(p.space, -f)
    HB = np.diag(p.space.occupations() @ p.omegas)
    low = fock.low_levels(p.space)
    assert np.abs((r.h_plus - D @ HB @ Dm)[np.ix_(low, low)]).max() <= 1e-8


def test_rescaled_spectrum_approaches_ladder():
    p = ModelParams.build(0.0, 0.0, [1.3], [0.3], 40)
    r = rescale_reference(assemble_block(p), p)
    eig = np.linalg.eigvalsh(r.h_plus)
    np.testing.assert_allclose(eig[:15], 1.3 * np.arange(15), atol=1e-9)


def test_block_hamiltonian_total_roundtrip(single):
    bh = assemble_block(single)
    again = BlockHamiltonian(*blocks(bh.total())[::3], single.alpha)
    np.testing.assert_array_equal(again.total(), bh.total())
