"""Shared helpers: independent dense oracles the library code never uses.

Everything here is deliberately written the slow, obvious way (full 2^n
matrices, explicit loops) so that agreement with the library's block/marginal
algebra is a meaningful cross-check rather than a tautology.
"""

from __future__ import annotations

import numpy as np

from epr.quantum import DensityBlock


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Random full-rank density matrix (complex Wishart, normalized)."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_block(rng: np.random.Generator, qubits: tuple[int, ...]) -> DensityBlock:
    return DensityBlock(tuple(qubits), random_density(rng, 2 ** len(qubits)))


def random_ket(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def embedded_epr_projector(n: int, pos_i: int, pos_j: int) -> np.ndarray:
    """E acting on qubit positions pos_i, pos_j of an n-qubit register.

    Position 0 is the most significant bit, matching the library convention.
    Built entry-by-entry from the definition, independent of any kron helper.
    """
    dim = 2**n
    bit_i, bit_j = 1 << (n - 1 - pos_i), 1 << (n - 1 - pos_j)
    out = np.zeros((dim, dim))
    for a in range(dim):
        if bool(a & bit_i) != bool(a & bit_j):
            continue  # <a| has a |01>/|10> pattern on the pair: E kills it
        rest = a & ~(bit_i | bit_j)
        for b in (rest, rest | bit_i | bit_j):
            out[a, b] += 0.5
    return out


def dense_marginal(matrix: np.ndarray, n: int, keep: tuple[int, ...]) -> np.ndarray:
    """Partial trace of a 2^n x 2^n matrix onto `keep` (positions, MSB-first)."""
    tensor = np.asarray(matrix).reshape([2] * (2 * n))
    kept = list(keep)
    rest = [p for p in range(n) if p not in kept]
    perm = kept + rest
    tensor = tensor.transpose(perm + [p + n for p in perm])
    k = len(kept)
    tensor = tensor.reshape(2**k, 2 ** (n - k), 2**k, 2 ** (n - k))
    return np.einsum("irjr->ij", tensor)
