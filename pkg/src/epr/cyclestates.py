"""Odd-cycle states: SDP synthesis, shift averaging, and verification.

Small cycles (k = 3, 5) and the 5-qubit path state ψ are found by a
max-min-slack semidefinite program, then cleaned so the shipped matrices
satisfy their constraints genuinely: symmetrize over the problem's
permutation group, project onto the marginal-equality affine subspace in
the (orthogonal) Pauli-string basis, and restore positive semidefiniteness
by mixing with the classical product state diag(θ,1−θ)^⊗k, which meets
every equality exactly. Long odd cycles (k ≥ 7) never materialize a 2^k
matrix: they are uniform mixtures of rotated pair-blocks-plus-ψ layouts,
plus a tiny classical tie-breaker component that leaves every 1-qubit
marginal untouched while pushing strictly above the distant-pair floor.

Synthesized states are cached as JSON next to this module (override with
EPR_DATA_DIR) and re-verified on every load.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constants import ALPHA, CYCLE_EDGE_THRESHOLD, PAIR_THRESHOLD, PSI_PATH_ENERGY, THETA
from .mixtures import MixtureProductState
from .quantum import DensityBlock, tilted_epr, tilted_marginal

MIN_SYNTH_MARGIN = 1e-6
MARGINAL_TOL = 1e-8
SOLVE_FLOOR = 1e-5  # solver slack below this signals a failed solve, not a tight instance
PSI_QUBITS = 5


class SynthesisFailed(RuntimeError):
    """A synthesized or loaded state missed its verified guarantees."""


@dataclass(frozen=True)
class CycleStateSpec:
    """Thresholds a k-cycle state must clear (strict inequalities)."""

    k: int
    edge_threshold: float = CYCLE_EDGE_THRESHOLD
    pair_threshold: float = PAIR_THRESHOLD

    def marginal(self) -> np.ndarray:
        return tilted_marginal()


@dataclass(frozen=True)
class PsiSpec:
    """Thresholds for the 5-qubit path state ψ."""

    path_energy_threshold: float = PSI_PATH_ENERGY
    pair_threshold: float = PAIR_THRESHOLD

    def marginal(self) -> np.ndarray:
        return tilted_marginal()


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float | None
    threshold: float | None
    margin: float | None
    passed: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "measured": self.measured,
            "threshold": self.threshold,
            "margin": self.margin,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class VerificationReport:
    k: int
    items: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def min_margin(self) -> float:
        margins = [i.margin for i in self.items if i.margin is not None]
        return min(margins) if margins else math.inf

    def to_json(self) -> dict:
        return {"k": self.k, "passed": self.passed, "items": [i.to_json() for i in self.items]}


# ---------------------------------------------------------------------------
# Dense operators on k <= 5 qubits (qubit 0 = most significant bit)


def _pair_projector(k: int, i: int, j: int) -> np.ndarray:
    dim = 1 << k
    bi, bj = 1 << (k - 1 - i), 1 << (k - 1 - j)
    idx = np.arange(dim)
    a00 = idx[(idx & bi == 0) & (idx & bj == 0)]
    a11 = a00 | bi | bj
    m = np.zeros((dim, dim))
    m[a00, a00] += 0.5
    m[a11, a11] += 0.5
    m[a00, a11] += 0.5
    m[a11, a00] += 0.5
    return m


def _embed_1q(k: int, q: int, op: np.ndarray) -> np.ndarray:
    return np.kron(np.kron(np.eye(1 << q), op), np.eye(1 << (k - 1 - q)))


def _perm_index(k: int, p: list[int]) -> np.ndarray:
    """Basis-index image of the qubit permutation q -> p[q]."""
    out = np.zeros(1 << k, dtype=np.int64)
    for b in range(1 << k):
        nb = 0
        for q in range(k):
            if b & (1 << (k - 1 - q)):
                nb |= 1 << (k - 1 - p[q])
        out[b] = nb
    return out


def _conjugate_perm(x: np.ndarray, img: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    out[np.ix_(img, img)] = x
    return out


# ---------------------------------------------------------------------------
# Synthesis


def _marginal_equalities(k: int) -> list[tuple[np.ndarray, float]]:
    pauli_z = np.diag([1.0, -1.0])
    pauli_x = np.array([[0.0, 1.0], [1.0, 0.0]])
    eqs = []
    for q in range(k):
        eqs.append((_embed_1q(k, q, pauli_z), 2.0 * THETA - 1.0))
        eqs.append((_embed_1q(k, q, pauli_x), 0.0))
    return eqs


def _solve_max_slack(
    dim: int,
    equalities: list[tuple[np.ndarray, float]],
    lower_bounds: list[tuple[np.ndarray, float]],
) -> tuple[np.ndarray, float]:
    """Maximize the common slack t over real symmetric density matrices.

    The feasible set is conjugation-invariant, so a real symmetric optimum
    exists; restricting the variable keeps the solve small.
    """
    import cvxpy as cp

    x = cp.Variable((dim, dim), symmetric=True)
    t = cp.Variable()
    cons = [x >> 0, cp.trace(x) == 1.0]
    for a, b in equalities:
        cons.append(cp.sum(cp.multiply(a, x)) == b)
    for a, lo in lower_bounds:
        cons.append(cp.sum(cp.multiply(a, x)) >= lo + t)
    prob = cp.Problem(cp.Maximize(t), cons)
    try:
        prob.solve(solver=cp.CLARABEL)
    except cp.error.SolverError:
        prob.solve(solver=cp.SCS, eps=1e-10, max_iters=200_000)
    if x.value is None or t.value is None:
        raise SynthesisFailed(f"SDP solver returned no solution (status {prob.status})")
    if float(t.value) < SOLVE_FLOOR:
        raise SynthesisFailed(f"SDP slack {float(t.value):.3e} below floor {SOLVE_FLOOR}")
    return np.asarray(x.value, dtype=float), float(t.value)


def _cleanup(
    x: np.ndarray,
    perms: list[list[int]],
    equalities: list[tuple[np.ndarray, float]],
    k: int,
) -> np.ndarray:
    """Symmetrize, hit the equalities exactly, restore PSD, renormalize."""
    dim = x.shape[0]
    x = (x + x.T) / 2.0
    if perms:
        imgs = [_perm_index(k, p) for p in perms]
        x = sum(_conjugate_perm(x, img) for img in imgs) / len(imgs)
        x = (x + x.T) / 2.0
    # Affine projection: {I} ∪ equality operators are orthogonal Pauli strings
    # with tr(P^2) = dim, so one sweep lands exactly on the subspace.
    x = x - ((np.trace(x) - 1.0) / dim) * np.eye(dim)
    for a, b in equalities:
        x = x - ((np.sum(a * x) - b) / dim) * a
    lmin = float(np.linalg.eigvalsh(x)[0])
    if lmin < -1e-6:
        raise SynthesisFailed(f"solver iterate far from PSD (min eigenvalue {lmin:.3e})")
    if lmin < 0.0:
        z = np.diag([THETA, 1.0 - THETA])
        zprod = z
        for _ in range(k - 1):
            zprod = np.kron(zprod, z)
        lz = (1.0 - THETA) ** k
        s = 1.05 * (-lmin) / (lz - lmin)
        x = (1.0 - s) * x + s * zprod
    return x / np.trace(x)


def synth_small_cycle(k: int) -> DensityBlock:
    """Synthesize ρ_k for k ∈ {3, 5} and verify its guarantees."""
    if k not in (3, 5):
        raise ValueError(f"explicit cycle states exist only for k in {{3, 5}}, got {k}")
    dim = 1 << k
    equalities = _marginal_equalities(k)
    lower = []
    for i in range(k):
        lower.append((_pair_projector(k, i, (i + 1) % k), CYCLE_EDGE_THRESHOLD))
    for i in range(k):
        for j in range(i + 1, k):
            if (j - i) % k not in (1, k - 1):
                lower.append((_pair_projector(k, i, j), PAIR_THRESHOLD))
    x, _slack = _solve_max_slack(dim, equalities, lower)
    shifts = [[(q + s) % k for q in range(k)] for s in range(k)]
    x = _cleanup(x, shifts, equalities, k)
    block = DensityBlock(tuple(range(k)), x.astype(complex))
    report = verify_lemma5(block, k)
    if not report.passed or report.min_margin() < 0.0:
        raise SynthesisFailed(f"rho_{k} failed post-synthesis verification: {report.to_json()}")
    return block


def synth_psi() -> DensityBlock:
    """Synthesize the 5-qubit path state ψ and verify its guarantees."""
    k = PSI_QUBITS
    dim = 1 << k
    equalities = _marginal_equalities(k)
    path_avg = sum(_pair_projector(k, i, i + 1) for i in range(4)) / 4.0
    lower = [(path_avg, PSI_PATH_ENERGY)]
    for i in range(k):
        for j in range(i + 1, k):
            lower.append((_pair_projector(k, i, j), PAIR_THRESHOLD))
    x, _slack = _solve_max_slack(dim, equalities, lower)
    reflection = [k - 1 - q for q in range(k)]
    x = _cleanup(x, [list(range(k)), reflection], equalities, k)
    block = DensityBlock(tuple(range(k)), x.astype(complex))
    report = verify_psi(block)
    if not report.passed:
        raise SynthesisFailed(f"psi failed post-synthesis verification: {report.to_json()}")
    return block


# ---------------------------------------------------------------------------
# Long odd cycles


def epsilon_tiebreak(k: int) -> float:
    """Weight of the classical tie-breaker component for a k-cycle."""
    return min(1e-4, 1.0 / (100.0 * k))


def classical_tiebreaker(qubits: tuple[int, ...]) -> MixtureProductState:
    """θ·|0...0⟩⟨0...0| + (1−θ)·|1...1⟩⟨1...1| as 1-qubit product components.

    Every 1-qubit marginal is exactly diag(θ, 1−θ) and every pair energy is
    exactly 1/2, strictly above the distant-pair floor (1/2)·α.
    """
    zero = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    one = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    comp0 = tuple(DensityBlock((q,), zero) for q in qubits)
    comp1 = tuple(DensityBlock((q,), one) for q in qubits)
    return MixtureProductState(tuple(qubits), ((THETA, comp0), (1.0 - THETA, comp1)))


def shift_averaged_cycle(k: int, psi: DensityBlock) -> MixtureProductState:
    """Uniform mixture over the k rotations of the pairs-plus-ψ layout.

    Component i places (k−5)/2 tilted pair blocks on positions
    (i, i+1), (i+2, i+3), ..., then ψ on the remaining 5 consecutive
    positions, all mod k. No 2^k matrix is ever formed.
    """
    if k % 2 == 0 or k < 7:
        raise ValueError(f"shift averaging needs odd k >= 7, got {k}")
    if psi.num_qubits != PSI_QUBITS:
        raise ValueError("psi must be a 5-qubit block")
    pair = tilted_epr(THETA)
    components = []
    for shift in range(k):
        blocks: list[DensityBlock] = []
        for m in range((k - 5) // 2):
            a = (2 * m + shift) % k
            b = (2 * m + 1 + shift) % k
            blocks.append(pair.density((a, b)))
        mapping = {q: (k - 5 + q + shift) % k for q in range(PSI_QUBITS)}
        blocks.append(psi.relabel(mapping))
        components.append((1.0 / k, tuple(blocks)))
    return MixtureProductState(tuple(range(k)), tuple(components))


def cycle_state(k: int, data_path: str | Path | None = None) -> MixtureProductState:
    """Production state for an odd k-cycle, ready for rounding.

    k ∈ {3, 5}: the cached SDP state. k ≥ 7: the shift-averaged mixture
    blended with weight ε of the classical tie-breaker, which preserves all
    1-qubit marginals exactly and lifts the distant-pair energies strictly
    above (1/2)·α (they sit exactly at the floor under shift averaging
    alone, because 1/2 − γ² = (1/2)·α).
    """
    if k < 3 or k % 2 == 0:
        raise ValueError(f"cycle states exist only for odd k >= 3, got {k}")
    if k == 3:
        return MixtureProductState.pure(load_cycle_block("rho3", data_path))
    if k == 5:
        return MixtureProductState.pure(load_cycle_block("rho5", data_path))
    psi = load_cycle_block("psi", data_path)
    bare = shift_averaged_cycle(k, psi)
    eps = epsilon_tiebreak(k)
    tie = classical_tiebreaker(bare.qubits)
    components = tuple(((1.0 - eps) * w, blocks) for w, blocks in bare.components)
    components += tuple((eps * w, blocks) for w, blocks in tie.components)
    return MixtureProductState(bare.qubits, components)


# ---------------------------------------------------------------------------
# Verification


def _as_mixture(state: DensityBlock | MixtureProductState) -> MixtureProductState:
    if isinstance(state, DensityBlock):
        return MixtureProductState.pure(state)
    return state


def verify_lemma5(state: DensityBlock | MixtureProductState, k: int) -> VerificationReport:
    """Measure the three cycle-state guarantees on any k-qubit state.

    Item 1: every cycle-edge energy > (3/4)·α. Item 2: every 1-qubit
    marginal equals diag(θ, 1−θ) entrywise to 1e−8. Item 3: every
    non-adjacent pair energy > (1/2)·α.
    """
    mix = _as_mixture(state)
    if mix.num_qubits != k:
        raise ValueError(f"state has {mix.num_qubits} qubits, expected {k}")
    labels = sorted(mix.qubits)
    edge_energies = [mix.pair_energy(labels[i], labels[(i + 1) % k]) for i in range(k)]
    item1_measured = min(edge_energies)
    item1 = CheckResult(
        name="cycle_edge_energy",
        measured=item1_measured,
        threshold=CYCLE_EDGE_THRESHOLD,
        margin=item1_measured - CYCLE_EDGE_THRESHOLD,
        passed=item1_measured > CYCLE_EDGE_THRESHOLD,
    )
    target = tilted_marginal()
    dev = max(
        float(np.max(np.abs(mix.marginal_1(q) - target))) for q in labels
    )
    item2 = CheckResult(
        name="single_qubit_marginals",
        measured=dev,
        threshold=MARGINAL_TOL,
        margin=MARGINAL_TOL - dev,
        passed=dev <= MARGINAL_TOL,
    )
    nonadjacent = [
        (labels[i], labels[j])
        for i in range(k)
        for j in range(i + 1, k)
        if (j - i) % k not in (1, k - 1)
    ]
    if nonadjacent:
        item3_measured = min(mix.pair_energy(i, j) for i, j in nonadjacent)
        item3 = CheckResult(
            name="nonadjacent_pair_energy",
            measured=item3_measured,
            threshold=PAIR_THRESHOLD,
            margin=item3_measured - PAIR_THRESHOLD,
            passed=item3_measured > PAIR_THRESHOLD,
        )
    else:
        item3 = CheckResult(
            name="nonadjacent_pair_energy", measured=None, threshold=None, margin=None, passed=True
        )
    return VerificationReport(k=k, items=(item1, item2, item3))


def verify_psi(block: DensityBlock) -> VerificationReport:
    """Measure ψ's three conditions: path average, pair floor, marginals."""
    mix = MixtureProductState.pure(block)
    labels = sorted(block.qubits)
    if len(labels) != PSI_QUBITS:
        raise ValueError("psi verification expects a 5-qubit state")
    path = [mix.pair_energy(labels[i], labels[i + 1]) for i in range(4)]
    avg = float(np.mean(path))
    item1 = CheckResult(
        name="path_average_energy",
        measured=avg,
        threshold=PSI_PATH_ENERGY,
        margin=avg - PSI_PATH_ENERGY,
        passed=avg >= PSI_PATH_ENERGY,
    )
    pairs = [(labels[i], labels[j]) for i in range(5) for j in range(i + 1, 5)]
    pair_min = min(mix.pair_energy(i, j) for i, j in pairs)
    item2 = CheckResult(
        name="all_pair_energy",
        measured=pair_min,
        threshold=PAIR_THRESHOLD,
        margin=pair_min - PAIR_THRESHOLD,
        passed=pair_min > PAIR_THRESHOLD + MIN_SYNTH_MARGIN,
    )
    target = tilted_marginal()
    dev = max(float(np.max(np.abs(mix.marginal_1(q) - target))) for q in labels)
    item3 = CheckResult(
        name="single_qubit_marginals",
        measured=dev,
        threshold=MARGINAL_TOL,
        margin=MARGINAL_TOL - dev,
        passed=dev <= MARGINAL_TOL,
    )
    return VerificationReport(k=PSI_QUBITS, items=(item1, item2, item3))


# ---------------------------------------------------------------------------
# Cache


def data_dir() -> Path:
    env = os.environ.get("EPR_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


_SYNTH = {
    "rho3": lambda: synth_small_cycle(3),
    "rho5": lambda: synth_small_cycle(5),
    "psi": synth_psi,
}


def load_cycle_block(name: str, data_path: str | Path | None = None) -> DensityBlock:
    """Load a cached synthesized state, re-verifying it; synthesize if absent."""
    if name not in _SYNTH:
        raise ValueError(f"unknown cycle-state cache entry {name!r}")
    base = Path(data_path) if data_path is not None else data_dir()
    path = base / f"{name}.json"
    if not path.exists():
        block = _SYNTH[name]()
        base.mkdir(parents=True, exist_ok=True)
        block.save(path)
        return block
    try:
        block = DensityBlock.load(path)
    except Exception as exc:
        raise SynthesisFailed(f"cache file {path} is unreadable: {exc}") from exc
    if name == "psi":
        report = verify_psi(block)
    else:
        report = verify_lemma5(block, 3 if name == "rho3" else 5)
    if not report.passed:
        failing = [i.name for i in report.items if not i.passed]
        raise SynthesisFailed(f"cached state {name} failed verification on load: {failing}")
    return block


def regenerate_cache(data_path: str | Path | None = None) -> dict[str, Path]:
    """Re-synthesize all cached states and write them to the data directory."""
    base = Path(data_path) if data_path is not None else data_dir()
    base.mkdir(parents=True, exist_ok=True)
    out = {}
    for name, fn in _SYNTH.items():
        block = fn()
        path = base / f"{name}.json"
        block.save(path)
        out[name] = path
    return out
