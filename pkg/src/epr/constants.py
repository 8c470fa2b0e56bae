"""Algorithm constants: the tilt angle and the approximation ratio.

All three constants derive from the single choice gamma = (sqrt(5)-1)/4:

* ``GAMMA``  -- the off-diagonal amplitude of the tilted pair state,
* ``THETA``  -- the >= 1/2 solution of sqrt(theta*(1-theta)) = gamma,
  in closed form (1 + sqrt((sqrt(5)-1)/2)) / 2,
* ``ALPHA``  -- the certified approximation ratio 1/2 + gamma = (1+sqrt(5))/4.

gamma is the unique positive root of g**2 + g/2 - 1/4 = 0, which makes the
energy of a pair of independent tilted qubits (1/2 - gamma**2) coincide with
ALPHA/2, the budget the rounding must meet on off-support pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

GAMMA: float = (math.sqrt(5.0) - 1.0) / 4.0
THETA: float = (1.0 + math.sqrt((math.sqrt(5.0) - 1.0) / 2.0)) / 2.0
ALPHA: float = (1.0 + math.sqrt(5.0)) / 4.0

#: Guaranteed average energy of the 4 path edges of the 5-qubit path state.
PSI_PATH_ENERGY: float = 0.668

#: Energy a cycle edge must strictly exceed: (3/4) * ALPHA.
CYCLE_EDGE_THRESHOLD: float = 0.75 * ALPHA

#: Energy any in-cycle pair must strictly exceed: (1/2) * ALPHA.
PAIR_THRESHOLD: float = 0.5 * ALPHA


@dataclass(frozen=True)
class AlgorithmConstants:
    """The (gamma, theta, alpha) triple used throughout the pipeline."""

    gamma: float = GAMMA
    theta: float = THETA
    alpha: float = ALPHA

    def validate(self) -> None:
        if abs(math.sqrt(self.theta * (1.0 - self.theta)) - self.gamma) > 1e-14:
            raise AssertionError("theta does not solve sqrt(theta*(1-theta)) = gamma")
        if self.theta < 0.5:
            raise AssertionError("theta must be the >= 1/2 root")
        if abs(self.alpha - (0.5 + self.gamma)) > 1e-15:
            raise AssertionError("alpha must equal 1/2 + gamma")


def path_state_slack() -> float:
    """Slack of the inequality that makes long odd cycles work.

    The average edge energy of the shifted product construction on a k-cycle
    stays above (3/4)*ALPHA precisely because the 5 positions covered by the
    path state contribute 4*0.668 + ALPHA/2, which exceeds 5*(3/4)*ALPHA.
    Returns the (positive) difference, about 0.0427.
    """
    return 4.0 * PSI_PATH_ENERGY + 0.5 * ALPHA - 5.0 * CYCLE_EDGE_THRESHOLD


def constants_block() -> dict[str, float]:
    """Constants block attached to every machine-readable report."""
    return {"alpha": ALPHA, "gamma": GAMMA, "theta": THETA}


# Startup sanity checks: the defining relations and the long-cycle slack.
AlgorithmConstants().validate()
assert path_state_slack() > 0.0, "long-cycle slack inequality failed"
