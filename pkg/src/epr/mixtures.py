"""Convex mixtures of tensor products of small density blocks.

A MixtureProductState represents sum_c w_c * (tensor of the blocks of
component c) over a fixed qubit set, without ever forming the full matrix.
Marginals on one or two qubits are computed per component: inside a block by
partial trace, across blocks as the product of 1-qubit marginals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quantum import (
    BlockError,
    DensityBlock,
    pair_energy as block_pair_energy,
    partial_trace,
    tensor_blocks,
)

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class MixtureProductState:
    """Mixture of product states; each component's blocks partition `qubits`."""

    qubits: tuple[int, ...]
    components: tuple[tuple[float, tuple[DensityBlock, ...]], ...]

    def __post_init__(self) -> None:
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        components = tuple((float(w), tuple(blocks)) for w, blocks in self.components)
        object.__setattr__(self, "components", components)
        if not components:
            raise BlockError("mixture needs at least one component")
        qubit_set = set(qubits)
        if len(qubit_set) != len(qubits):
            raise BlockError("duplicate qubit labels in mixture")
        total = 0.0
        for w, blocks in components:
            if w < -WEIGHT_TOL:
                raise BlockError(f"negative component weight {w}")
            total += w
            covered: set[int] = set()
            for b in blocks:
                overlap = covered.intersection(b.qubits)
                if overlap:
                    raise BlockError(f"qubits {overlap} appear in two blocks of one component")
                covered.update(b.qubits)
            if covered != qubit_set:
                raise BlockError("component blocks do not partition the qubit set")
        if abs(total - 1.0) > 1e-9:
            raise BlockError(f"component weights sum to {total}, not 1")

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    @staticmethod
    def pure(block: DensityBlock) -> "MixtureProductState":
        """Wrap a single explicit block as a 1-component mixture."""
        return MixtureProductState(block.qubits, ((1.0, (block,)),))

    @staticmethod
    def product(blocks: tuple[DensityBlock, ...]) -> "MixtureProductState":
        """One component made of the given disjoint blocks."""
        labels = tuple(q for b in blocks for q in b.qubits)
        return MixtureProductState(labels, ((1.0, tuple(blocks)),))

    def relabel(self, mapping: dict[int, int]) -> "MixtureProductState":
        return MixtureProductState(
            tuple(mapping[q] for q in self.qubits),
            tuple((w, tuple(b.relabel(mapping) for b in blocks)) for w, blocks in self.components),
        )

    def _block_of(self, blocks: tuple[DensityBlock, ...], qubit: int) -> DensityBlock:
        for b in blocks:
            if qubit in b.qubits:
                return b
        raise BlockError(f"qubit {qubit} not covered")

    def marginal_1(self, i: int) -> np.ndarray:
        """Weighted 1-qubit marginal, as a bare 2x2 matrix."""
        out = np.zeros((2, 2), dtype=complex)
        for w, blocks in self.components:
            b = self._block_of(blocks, i)
            reduced = b.matrix if b.qubits == (i,) else partial_trace(b, (i,)).matrix
            out += w * reduced
        return out

    def marginal_2(self, i: int, j: int) -> np.ndarray:
        """Weighted 2-qubit marginal in qubit order (i, j), as a 4x4 matrix."""
        if i == j:
            raise BlockError("marginal_2 needs distinct qubits")
        out = np.zeros((4, 4), dtype=complex)
        for w, blocks in self.components:
            bi = self._block_of(blocks, i)
            if j in bi.qubits:
                out += w * partial_trace(bi, (i, j)).matrix
            else:
                bj = self._block_of(blocks, j)
                mi = bi.matrix if bi.qubits == (i,) else partial_trace(bi, (i,)).matrix
                mj = bj.matrix if bj.qubits == (j,) else partial_trace(bj, (j,)).matrix
                out += w * np.kron(mi, mj)
        return out

    def pair_energy(self, i: int, j: int) -> float:
        """tr(E * rho_{ij}) of the mixture, never materializing the full state."""
        marginal = DensityBlock((i, j), self.marginal_2(i, j))
        return block_pair_energy(marginal, i, j)

    def to_dense(self, max_qubits: int = 10) -> DensityBlock | np.ndarray:
        """Explicit matrix over `qubits` (in listed order), for small oracles.

        Returns a bare ndarray since mixtures may exceed the block qubit cap.
        """
        n = self.num_qubits
        if n > max_qubits:
            raise BlockError(f"refusing to materialize {n} qubits (cap {max_qubits})")
        order = {q: p for p, q in enumerate(self.qubits)}
        dim = 2**n
        out = np.zeros((dim, dim), dtype=complex)
        for w, blocks in self.components:
            kron = blocks[0].matrix
            labels = list(blocks[0].qubits)
            for b in blocks[1:]:
                kron = np.kron(kron, b.matrix)
                labels.extend(b.qubits)
            # permute from the component's label order to the mixture's order
            perm = [order[q] for q in labels]
            tensor = kron.reshape([2] * (2 * n))
            axes = np.empty(2 * n, dtype=int)
            for src, dst in enumerate(perm):
                axes[dst] = src
                axes[dst + n] = src + n
            out += w * tensor.transpose(tuple(axes)).reshape(dim, dim)
        return out
