"""Dense complex linear algebra on a handful of labeled qubits.

Everything here manipulates explicit matrices, capped at MAX_BLOCK_QUBITS
qubits (dimension 32). Larger states are handled structurally by
`epr.mixtures` and `epr.rounding` and never materialized.

Qubit ordering convention, used module-wide: for a block over qubits
``(q0, q1, ..., q_{m-1})`` the computational basis index is the integer
``b0 b1 ... b_{m-1}`` read as binary with b0 (the FIRST listed qubit) as the
most significant bit. All projectors, marginals and tensor products follow
this convention.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .constants import THETA

MAX_BLOCK_QUBITS = 5

HERMITICITY_TOL = 1e-10
PSD_TOL = 1e-9
TRACE_TOL = 1e-10


class BlockError(ValueError):
    """Invalid state block: bad labels, bad shape or a broken invariant."""


@dataclass(frozen=True)
class Ket:
    """A pure state on one or more qubits, unit-norm amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        dim = amps.shape[0]
        if amps.ndim != 1 or dim & (dim - 1) or dim < 2:
            raise BlockError(f"amplitude vector length {amps.shape} is not a power of 2")
        if abs(np.linalg.norm(amps) - 1.0) > 1e-12:
            raise BlockError("ket is not unit norm")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def density(self, qubits: tuple[int, ...]) -> "DensityBlock":
        """Rank-1 density block |psi><psi| on the given qubit labels."""
        return DensityBlock(qubits, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityBlock:
    """Explicit density matrix on <= 5 labeled qubits.

    Validated on construction: Hermitian to 1e-10, PSD to -1e-9 on the
    smallest eigenvalue, unit trace to 1e-10.
    """

    qubits: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        if not qubits:
            raise BlockError("block needs at least one qubit")
        if len(set(qubits)) != len(qubits):
            raise BlockError(f"duplicate qubit labels {qubits}")
        if len(qubits) > MAX_BLOCK_QUBITS:
            raise BlockError(f"{len(qubits)} qubits exceeds the {MAX_BLOCK_QUBITS}-qubit cap")
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        dim = 2 ** len(qubits)
        if mat.shape != (dim, dim):
            raise BlockError(f"matrix shape {mat.shape} does not match {len(qubits)} qubits")
        if np.abs(mat - mat.conj().T).max() > HERMITICITY_TOL:
            raise BlockError("matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > TRACE_TOL:
            raise BlockError(f"trace {np.trace(mat).real!r} != 1")
        if np.linalg.eigvalsh(mat).min() < -PSD_TOL:
            raise BlockError("matrix is not PSD")

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    def relabel(self, mapping: dict[int, int]) -> "DensityBlock":
        """Rename qubit labels; the matrix is unchanged."""
        return DensityBlock(tuple(mapping[q] for q in self.qubits), self.matrix)

    def position(self, qubit: int) -> int:
        try:
            return self.qubits.index(qubit)
        except ValueError:
            raise BlockError(f"qubit {qubit} not in block {self.qubits}") from None

    def to_json(self) -> dict:
        """JSON form: qubit labels plus row-major [re, im] entry pairs."""
        entries = [[float(z.real), float(z.imag)] for z in self.matrix.ravel()]
        return {"qubits": list(self.qubits), "matrix": entries}

    @staticmethod
    def from_json(obj: dict) -> "DensityBlock":
        qubits = tuple(int(q) for q in obj["qubits"])
        dim = 2 ** len(qubits)
        flat = np.array([complex(re, im) for re, im in obj["matrix"]])
        if flat.shape[0] != dim * dim:
            raise BlockError(f"matrix entry count {flat.shape[0]} != {dim * dim}")
        return DensityBlock(qubits, flat.reshape(dim, dim))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @staticmethod
    def load(path: str | Path) -> "DensityBlock":
        return DensityBlock.from_json(json.loads(Path(path).read_text()))


def epr_ket() -> Ket:
    """(|00> + |11>) / sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[0b00] = v[0b11] = 1.0 / math.sqrt(2.0)
    return Ket(v)


def epr_projector() -> np.ndarray:
    """Rank-1 projector onto the maximally correlated 2-qubit pair state."""
    v = epr_ket().amplitudes
    return np.outer(v, v.conj()).real.astype(float)


def singlet_projector() -> np.ndarray:
    """Rank-1 projector onto (|01> - |10>) / sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[0b01] = 1.0 / math.sqrt(2.0)
    v[0b10] = -1.0 / math.sqrt(2.0)
    return np.outer(v, v.conj()).real.astype(float)


def tilted_epr(theta: float) -> Ket:
    """sqrt(theta)|00> + sqrt(1-theta)|11>; theta in [0, 1]."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    v = np.zeros(4, dtype=complex)
    v[0b00] = math.sqrt(theta)
    v[0b11] = math.sqrt(1.0 - theta)
    return Ket(v)


def tilted_marginal(theta: float = THETA) -> np.ndarray:
    """diag(theta, 1-theta), the 1-qubit marginal of the tilted pair."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    return np.diag([theta, 1.0 - theta]).astype(complex)


def zero_ket(n: int) -> Ket:
    """|0...0> on n qubits."""
    v = np.zeros(2**n, dtype=complex)
    v[0] = 1.0
    return Ket(v)


def partial_trace(block: DensityBlock, keep: tuple[int, ...]) -> DensityBlock:
    """Reduced density matrix on the `keep` qubits, in the order given.

    Trace-preserving; the result follows the module ordering convention with
    keep[0] as the most significant bit.
    """
    keep = tuple(keep)
    if not keep:
        raise BlockError("keep must be nonempty")
    positions = [block.position(q) for q in keep]
    q = block.num_qubits
    tensor = block.matrix.reshape([2] * (2 * q))
    # einsum: kept ket/bra axes get distinct output letters, traced axes are
    # contracted pairwise between ket side (axis p) and bra side (axis p+q).
    letters = "abcdefghijklmnopqrstuvwxyz"
    ket = list(letters[:q])
    bra = list(letters[q : 2 * q])
    for p in range(q):
        if p not in positions:
            bra[p] = ket[p]
    out = "".join(ket[p] for p in positions) + "".join(bra[p] for p in positions)
    reduced = np.einsum("".join(ket) + "".join(bra) + "->" + out, tensor)
    dim = 2 ** len(keep)
    return DensityBlock(keep, reduced.reshape(dim, dim))


def pair_energy(block: DensityBlock, i: int, j: int) -> float:
    """tr(E * rho_{ij}) for the 2-qubit marginal on (i, j); value in [0, 1]."""
    if i == j:
        raise BlockError("pair energy needs two distinct qubits")
    marginal = block if (block.num_qubits == 2 and block.qubits == (i, j)) else partial_trace(block, (i, j))
    return float(np.trace(epr_projector() @ marginal.matrix).real)


def tensor_blocks(blocks: list[DensityBlock] | tuple[DensityBlock, ...]) -> DensityBlock:
    """Kronecker product of blocks with label bookkeeping; total <= 5 qubits."""
    if not blocks:
        raise BlockError("tensor of zero blocks")
    labels: list[int] = []
    for b in blocks:
        labels.extend(b.qubits)
    if len(set(labels)) != len(labels):
        raise BlockError(f"overlapping qubit labels in tensor: {labels}")
    if len(labels) > MAX_BLOCK_QUBITS:
        raise BlockError(f"tensor of {len(labels)} qubits exceeds the {MAX_BLOCK_QUBITS}-qubit cap")
    mat = blocks[0].matrix
    for b in blocks[1:]:
        mat = np.kron(mat, b.matrix)
    return DensityBlock(tuple(labels), mat)


def conjugate_by_y(block: DensityBlock, qubits: frozenset[int] | set[int]) -> DensityBlock:
    """Apply Pauli Y to the listed qubits of the block (rho -> U rho U+)."""
    y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    ident = np.eye(2, dtype=complex)
    u = np.array([[1.0]], dtype=complex)
    for q in block.qubits:
        u = np.kron(u, y if q in qubits else ident)
    return DensityBlock(block.qubits, u @ block.matrix @ u.conj().T)


def pair_energy_from_marginals(m_i: np.ndarray, m_j: np.ndarray) -> float:
    """Energy of a pair whose joint state is the product of 1-qubit marginals."""
    return float(np.trace(epr_projector() @ np.kron(m_i, m_j)).real)
