"""Assemble the output state from the LP decomposition and certify it.

The output is a tensor product of independent factors — one tilted pair per
matched edge, one cycle state per odd cycle, one diag(θ,1−θ) qubit per
unmatched vertex — each factor itself a small mixture of products. Energies
are computed from marginals only: a pair inside one factor uses that
factor's 2-qubit marginal; a pair straddling factors uses the tensor of two
1-qubit marginals. No global 2^n object is ever formed, so n can be large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .constants import ALPHA, THETA, constants_block
from .cyclestates import cycle_state
from .graphs import QubitFrame, WeightedGraph
from .lp import HalfIntegralSolution, LpEnergies, lp_energies, upper_bound
from .mixtures import MixtureProductState
from .quantum import DensityBlock, pair_energy_from_marginals, tilted_epr, tilted_marginal

CERT_RATIO_TOL = 1e-9
MARGINAL_UNIFORMITY_TOL = 1e-8


@dataclass(frozen=True)
class RoundedState:
    """Product of disjoint mixture factors covering qubits 0..n-1."""

    n: int
    factors: tuple[MixtureProductState, ...]
    frame: QubitFrame | None = None
    _factor_of: dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        covered: dict[int, int] = {}
        for t, f in enumerate(self.factors):
            for q in f.qubits:
                if q in covered:
                    raise ValueError(f"qubit {q} appears in two factors")
                if not 0 <= q < self.n:
                    raise ValueError(f"qubit {q} outside range for n={self.n}")
                covered[q] = t
        if len(covered) != self.n:
            raise ValueError("factors do not cover all qubits")
        object.__setattr__(self, "_factor_of", covered)

    def factor_index(self, qubit: int) -> int:
        return self._factor_of[qubit]

    def marginal_1(self, i: int) -> np.ndarray:
        return self.factors[self._factor_of[i]].marginal_1(i)

    def pair_energy(self, i: int, j: int) -> float:
        fi, fj = self._factor_of[i], self._factor_of[j]
        if fi == fj:
            return self.factors[fi].pair_energy(i, j)
        return pair_energy_from_marginals(self.marginal_1(i), self.marginal_1(j))

    def max_marginal_deviation(self) -> float:
        target = tilted_marginal()
        return max(
            float(np.max(np.abs(self.marginal_1(q) - target))) for q in range(self.n)
        ) if self.n else 0.0

    def with_frame(self, frame: QubitFrame) -> "RoundedState":
        return RoundedState(self.n, self.factors, frame)

    def structure_json(self) -> dict:
        desc = []
        for f in self.factors:
            desc.append(
                {
                    "qubits": sorted(f.qubits),
                    "components": [
                        {"weight": w, "blocks": [sorted(b.qubits) for b in blocks]}
                        for w, blocks in f.components
                    ],
                }
            )
        return {
            "n": self.n,
            "factors": desc,
            "y_conjugated_qubits": sorted(self.frame.y_qubits) if self.frame else [],
        }


@dataclass(frozen=True)
class EdgeRecord:
    i: int
    j: int
    weight: float
    lp_energy: float
    achieved: float
    ratio: float

    def to_json(self) -> dict:
        return {
            "edge": [self.i, self.j],
            "weight": self.weight,
            "lp_energy": self.lp_energy,
            "achieved": self.achieved,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class Certificate:
    """Per-edge proof that achieved energy ≥ α · Ẽ_ij, plus totals."""

    records: tuple[EdgeRecord, ...]
    alpha: float
    total_energy: float
    upper_bound: float
    total_ratio: float
    min_ratio: float
    passed: bool
    algorithm: str = "main"

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "algorithm": self.algorithm,
            "constants": constants_block(),
            "alpha": self.alpha,
            "edges": [r.to_json() for r in self.records],
            "total": self.total_energy,
            "upper_bound": self.upper_bound,
            "total_ratio": self.total_ratio,
            "min_ratio": None if math.isinf(self.min_ratio) else self.min_ratio,
            "pass": self.passed,
        }


def round_solution(
    g: WeightedGraph,
    s: HalfIntegralSolution,
    frame: QubitFrame | None = None,
    data_path: str | Path | None = None,
) -> RoundedState:
    """Build the output state: pairs on M, cycle states on 𝒞, tilted qubits on U."""
    factors: list[MixtureProductState] = []
    pair = tilted_epr(THETA)
    for i, j in sorted(s.matched):
        factors.append(MixtureProductState.pure(pair.density((i, j))))
    for cyc in s.cycles:
        canonical = cycle_state(len(cyc), data_path)
        factors.append(canonical.relabel({t: cyc[t] for t in range(len(cyc))}))
    single = tilted_marginal().astype(complex)
    for u in sorted(s.unmatched):
        factors.append(MixtureProductState.pure(DensityBlock((u,), single)))
    rs = RoundedState(g.n, tuple(factors), frame)
    dev = rs.max_marginal_deviation()
    if dev > MARGINAL_UNIFORMITY_TOL:
        raise ValueError(f"marginal uniformity violated: deviation {dev:.3e}")
    return rs


def edge_energy(rs: RoundedState, i: int, j: int) -> float:
    """tr(ρ · E_ij) from marginals; i and j may live in different factors."""
    if i == j:
        raise ValueError("edge endpoints must differ")
    return rs.pair_energy(i, j)


def certify(g: WeightedGraph, s: HalfIntegralSolution, rs: RoundedState) -> Certificate:
    """Audit every weighted edge against its budget Ẽ_ij."""
    energies = lp_energies(s)
    records = []
    total = 0.0
    min_ratio = math.inf
    for i, j, w in g.edges:
        achieved = edge_energy(rs, i, j)
        e_tilde = float(energies.value(i, j))
        ratio = achieved / e_tilde
        min_ratio = min(min_ratio, ratio)
        total += w * achieved
        records.append(EdgeRecord(i, j, w, e_tilde, achieved, ratio))
    ub = upper_bound(g, s)
    return Certificate(
        records=tuple(records),
        alpha=ALPHA,
        total_energy=total,
        upper_bound=ub,
        total_ratio=total / ub if ub > 0 else 1.0,
        min_ratio=min_ratio,
        passed=min_ratio >= ALPHA - CERT_RATIO_TOL,
    )


def baseline_34(
    g: WeightedGraph, s: HalfIntegralSolution, p: float = 0.5
) -> tuple[RoundedState, Certificate]:
    """Reference mixture (1−p)·|0^n⟩⟨0^n| + p·(pairs on M, maximally mixed off M).

    Only defined on instances whose LP optimum is integral (no cycles); at
    p = 1/2 every weighted edge achieves exactly 3/4 of its budget.
    """
    if s.cycles:
        raise ValueError("baseline is defined for integral (bipartite) solutions only")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing probability {p} outside [0, 1]")
    zero = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    mixed = np.eye(2, dtype=complex) / 2.0
    comp_zero = tuple(DensityBlock((q,), zero) for q in range(g.n))
    blocks: list[DensityBlock] = []
    epr_pair = tilted_epr(0.5)
    for i, j in sorted(s.matched):
        blocks.append(epr_pair.density((i, j)))
    matched_vertices = {v for e in s.matched for v in e}
    for q in range(g.n):
        if q not in matched_vertices:
            blocks.append(DensityBlock((q,), mixed))
    components = []
    if 1.0 - p > 0.0:
        components.append((1.0 - p, comp_zero))
    if p > 0.0:
        components.append((p, tuple(blocks)))
    mixture = MixtureProductState(tuple(range(g.n)), tuple(components))
    rs = RoundedState(g.n, (mixture,))
    cert = certify(g, s, rs)
    return rs, Certificate(
        records=cert.records,
        alpha=cert.alpha,
        total_energy=cert.total_energy,
        upper_bound=cert.upper_bound,
        total_ratio=cert.total_ratio,
        min_ratio=cert.min_ratio,
        passed=cert.passed,
        algorithm="baseline34",
    )
