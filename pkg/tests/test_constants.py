"""The (gamma, theta, alpha) triple and the inequalities hung off it."""

import math

import pytest

from epr.constants import (
    ALPHA,
    CYCLE_EDGE_THRESHOLD,
    GAMMA,
    PAIR_THRESHOLD,
    PSI_PATH_ENERGY,
    THETA,
    AlgorithmConstants,
    constants_block,
    path_state_slack,
)


def test_closed_forms():
    assert GAMMA == (math.sqrt(5.0) - 1.0) / 4.0
    assert ALPHA == (1.0 + math.sqrt(5.0)) / 4.0
    assert abs(ALPHA - (0.5 + GAMMA)) <= 1e-15


def test_theta_defining_relation():
    # theta is pinned by sqrt(theta*(1-theta)) = gamma, not by any decimal
    # expansion; assert the relation itself at full double precision.
    assert abs(math.sqrt(THETA * (1.0 - THETA)) - GAMMA) <= 1e-14
    assert THETA >= 0.5
    assert abs(THETA * THETA - THETA + GAMMA * GAMMA) <= 1e-16


def test_gamma_quadratic_root():
    # gamma solves g^2 + g/2 - 1/4 = 0, which is what makes the independent
    # tilted-pair energy 1/2 - gamma^2 land exactly on ALPHA/2.
    assert abs(GAMMA * GAMMA + GAMMA / 2.0 - 0.25) <= 1e-16
    assert 0.5 - GAMMA * GAMMA == ALPHA / 2.0


def test_theta_pair_energy_identity():
    # <E> of the tilted pair state is theta^2/2 + (1-theta)^2/2 + gamma,
    # which collapses to alpha because theta^2 + (1-theta)^2 = alpha.
    assert abs(THETA**2 + (1.0 - THETA) ** 2 - ALPHA) <= 1e-15


def test_thresholds_derive_from_alpha():
    assert CYCLE_EDGE_THRESHOLD == 0.75 * ALPHA
    assert PAIR_THRESHOLD == 0.5 * ALPHA
    assert PSI_PATH_ENERGY == 0.668


def test_path_state_slack():
    slack = path_state_slack()
    assert slack > 0.0
    assert slack == pytest.approx(
        (4 * 0.668 + ALPHA / 2.0) - 5 * 0.75 * ALPHA, abs=1e-15
    )
    # the two sides of the inequality, to the published precision
    assert 4 * 0.668 + ALPHA / 2.0 == pytest.approx(3.0765, abs=5e-5)
    assert 5 * 0.75 * ALPHA == pytest.approx(3.0338, abs=5e-5)


def test_validate_accepts_defaults_and_rejects_corruption():
    AlgorithmConstants().validate()
    with pytest.raises(AssertionError):
        AlgorithmConstants(theta=0.9).validate()
    with pytest.raises(AssertionError):
        AlgorithmConstants(theta=1.0 - THETA).validate()  # the < 1/2 root
    with pytest.raises(AssertionError):
        AlgorithmConstants(alpha=0.8).validate()


def test_constants_block_shape():
    block = constants_block()
    assert set(block) == {"alpha", "gamma", "theta"}
    assert block["alpha"] == ALPHA
    assert block["gamma"] == GAMMA
    assert block["theta"] == THETA
