"""Blocks, projectors and marginals, cross-checked against dense oracles."""

import math

import numpy as np
import pytest
from conftest import dense_marginal, embedded_epr_projector, random_block

from epr.constants import ALPHA, GAMMA, THETA
from epr.quantum import (
    MAX_BLOCK_QUBITS,
    BlockError,
    DensityBlock,
    Ket,
    conjugate_by_y,
    epr_ket,
    epr_projector,
    pair_energy,
    pair_energy_from_marginals,
    partial_trace,
    singlet_projector,
    tensor_blocks,
    tilted_epr,
    tilted_marginal,
    zero_ket,
)


# ---------------------------------------------------------------- projectors


def test_epr_projector_is_rank_one_projector():
    e = epr_projector()
    assert np.allclose(e @ e, e, atol=1e-15)
    assert np.isclose(np.trace(e), 1.0)
    assert np.allclose(e, e.T)
    v = epr_ket().amplitudes
    assert np.allclose(e @ v, v, atol=1e-15)


def test_singlet_projector_orthogonal_to_pair_state():
    s = singlet_projector()
    assert np.allclose(s @ s, s, atol=1e-15)
    assert np.isclose(np.trace(s), 1.0)
    assert abs(epr_ket().amplitudes.conj() @ s @ epr_ket().amplitudes) <= 1e-15


def test_embedded_projector_oracle_matches_two_qubit_case():
    assert np.allclose(embedded_epr_projector(2, 0, 1), epr_projector())


# ------------------------------------------------------------- tilted family


@pytest.mark.parametrize("seed", range(10))
def test_tilted_pair_overlap_identity(seed):
    # |<pair|tilted(theta)>|^2 = 1/2 + sqrt(theta*(1-theta)) for every theta
    rng = np.random.default_rng(1000 + seed)
    for theta in rng.random(10):
        overlap = epr_ket().amplitudes.conj() @ tilted_epr(theta).amplitudes
        expected = 0.5 + math.sqrt(theta * (1.0 - theta))
        assert abs(abs(overlap) ** 2 - expected) <= 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_tilted_marginals_are_diagonal(seed):
    rng = np.random.default_rng(2000 + seed)
    for theta in rng.random(10):
        block = tilted_epr(theta).density((4, 9))
        for q in (4, 9):
            m = partial_trace(block, (q,)).matrix
            assert np.allclose(m, np.diag([theta, 1.0 - theta]), atol=1e-12)


def test_tilted_pair_energy_is_alpha_at_theta():
    block = tilted_epr(THETA).density((0, 1))
    assert abs(pair_energy(block, 0, 1) - ALPHA) <= 1e-12


def test_independent_tilted_qubits_score_half_alpha():
    m = tilted_marginal()
    energy = pair_energy_from_marginals(m, m)
    assert abs(energy - (0.5 - GAMMA * GAMMA)) <= 1e-15
    assert abs(energy - ALPHA / 2.0) <= 1e-15


def test_tilted_marginal_defaults_to_theta():
    assert np.allclose(tilted_marginal(), np.diag([THETA, 1.0 - THETA]))
    with pytest.raises(ValueError):
        tilted_epr(1.5)
    with pytest.raises(ValueError):
        tilted_marginal(-0.1)


def test_tilted_extremes():
    assert abs(pair_energy(tilted_epr(1.0).density((0, 1)), 0, 1) - 0.5) <= 1e-15
    assert abs(pair_energy(tilted_epr(0.5).density((0, 1)), 0, 1) - 1.0) <= 1e-15


# ---------------------------------------------------------------- Ket basics


def test_ket_validation():
    with pytest.raises(BlockError):
        Ket(np.array([1.0, 0.0, 0.0]))  # not a power of 2
    with pytest.raises(BlockError):
        Ket(np.array([1.0, 1.0]))  # not unit norm
    k = zero_ket(3)
    assert k.num_qubits == 3 and k.dim == 8
    assert np.isclose(k.amplitudes[0], 1.0)


def test_density_from_ket_orders_labels():
    block = zero_ket(2).density((7, 3))
    assert block.qubits == (7, 3)
    assert np.isclose(block.matrix[0, 0], 1.0)


# ----------------------------------------------------------- block invariants


def test_block_validation_errors():
    eye4 = np.eye(4) / 4.0
    with pytest.raises(BlockError):
        DensityBlock((0, 0), eye4)  # duplicate labels
    with pytest.raises(BlockError):
        DensityBlock((0,), eye4)  # shape mismatch
    with pytest.raises(BlockError):
        DensityBlock((0, 1), np.eye(4))  # trace 4
    with pytest.raises(BlockError):
        DensityBlock((0, 1), np.diag([1.5, -0.5, 0.0, 0.0]))  # not PSD
    bad = np.eye(4) / 4.0
    bad[0, 1] = 1e-3  # not Hermitian
    with pytest.raises(BlockError):
        DensityBlock((0, 1), bad)
    with pytest.raises(BlockError):
        DensityBlock(tuple(range(MAX_BLOCK_QUBITS + 1)), np.eye(64) / 64.0)
    with pytest.raises(BlockError):
        DensityBlock((), np.array([[1.0]]))


def test_relabel_and_position():
    block = tilted_epr(THETA).density((0, 1)).relabel({0: 5, 1: 2})
    assert block.qubits == (5, 2)
    assert block.position(2) == 1
    with pytest.raises(BlockError):
        block.position(0)


def test_json_round_trip(tmp_path):
    rng = np.random.default_rng(7)
    block = random_block(rng, (3, 1, 4))
    path = tmp_path / "block.json"
    block.save(path)
    loaded = DensityBlock.load(path)
    assert loaded.qubits == block.qubits
    # repr(float) round-trips doubles exactly through JSON
    assert np.array_equal(loaded.matrix, block.matrix)
    with pytest.raises(BlockError):
        DensityBlock.from_json({"qubits": [0, 1], "matrix": [[1.0, 0.0]]})


# -------------------------------------------------------------- partial trace


@pytest.mark.parametrize("seed", range(5))
def test_partial_trace_matches_dense_oracle(seed):
    rng = np.random.default_rng(3000 + seed)
    labels = (2, 0, 5, 1)
    block = random_block(rng, labels)
    for keep in [(2,), (5,), (0, 1), (5, 2), (1, 0, 5)]:
        reduced = partial_trace(block, keep)
        positions = tuple(labels.index(q) for q in keep)
        expected = dense_marginal(block.matrix, 4, positions)
        assert reduced.qubits == keep
        assert np.allclose(reduced.matrix, expected, atol=1e-13)
        assert np.isclose(np.trace(reduced.matrix).real, 1.0, atol=1e-12)


def test_partial_trace_respects_keep_order():
    rng = np.random.default_rng(11)
    block = random_block(rng, (0, 1))
    ab = partial_trace(block, (0, 1)).matrix
    ba = partial_trace(block, (1, 0)).matrix
    swap = np.zeros((4, 4))
    for a in range(2):
        for b in range(2):
            swap[2 * a + b, 2 * b + a] = 1.0
    assert np.allclose(ba, swap @ ab @ swap.T, atol=1e-13)


def test_partial_trace_rejects_unknown_and_empty():
    block = random_block(np.random.default_rng(0), (0, 1))
    with pytest.raises(BlockError):
        partial_trace(block, (3,))
    with pytest.raises(BlockError):
        partial_trace(block, ())


# ---------------------------------------------------------------- pair energy


@pytest.mark.parametrize("seed", range(5))
def test_pair_energy_matches_embedded_projector(seed):
    rng = np.random.default_rng(4000 + seed)
    labels = (4, 7, 2)
    block = random_block(rng, labels)
    for i in labels:
        for j in labels:
            if i == j:
                continue
            pi, pj = labels.index(i), labels.index(j)
            expected = np.trace(embedded_epr_projector(3, pi, pj) @ block.matrix).real
            assert abs(pair_energy(block, i, j) - expected) <= 1e-12


def test_pair_energy_requires_distinct_qubits():
    block = random_block(np.random.default_rng(1), (0, 1))
    with pytest.raises(BlockError):
        pair_energy(block, 0, 0)


def test_pair_energy_from_marginals_equals_product_block():
    rng = np.random.default_rng(21)
    m_i = random_block(rng, (0,)).matrix
    m_j = random_block(rng, (1,)).matrix
    product = tensor_blocks([DensityBlock((0,), m_i), DensityBlock((1,), m_j)])
    assert abs(pair_energy_from_marginals(m_i, m_j) - pair_energy(product, 0, 1)) <= 1e-13


# --------------------------------------------------------------- tensor & Y


def test_tensor_blocks_bookkeeping():
    rng = np.random.default_rng(31)
    a = random_block(rng, (2, 0))
    b = random_block(rng, (5,))
    t = tensor_blocks([a, b])
    assert t.qubits == (2, 0, 5)
    assert np.allclose(t.matrix, np.kron(a.matrix, b.matrix))
    with pytest.raises(BlockError):
        tensor_blocks([a, random_block(rng, (0,))])  # reused label
    with pytest.raises(BlockError):
        tensor_blocks([])
    with pytest.raises(BlockError):
        tensor_blocks([a, b, random_block(rng, (7, 8, 9))])  # 6 qubits


def test_y_conjugation_turns_pair_state_into_singlet():
    block = epr_ket().density((0, 1))
    for side in ({0}, {1}):
        rotated = conjugate_by_y(block, side)
        assert np.allclose(rotated.matrix, singlet_projector(), atol=1e-14)
    both = conjugate_by_y(block, {0, 1})
    assert np.allclose(both.matrix, block.matrix, atol=1e-14)


def test_y_conjugation_preserves_spectrum():
    rng = np.random.default_rng(41)
    block = random_block(rng, (0, 1, 2))
    rotated = conjugate_by_y(block, {1})
    assert np.allclose(
        np.linalg.eigvalsh(rotated.matrix), np.linalg.eigvalsh(block.matrix), atol=1e-12
    )
