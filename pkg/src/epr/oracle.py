"""Desk-scale ground truth: dense diagonalization and brute-force checks.

Everything here is deliberately independent of the production pipeline: the
Hamiltonian is materialized entry by entry, the LP is enumerated over the
half-integral grid, and matchings are enumerated directly. These routes are
slow and small but trustworthy, which is their entire job.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import eigh

from .graphs import WeightedGraph, generate
from .lp import lp_energies, solve_lp, upper_bound
from .quantum import Ket

MAX_ORACLE_QUBITS = 14
MAX_BRUTE_EDGES = 18
EIG_RESIDUAL_TOL = 1e-8


class OracleError(ValueError):
    """Instance exceeds an oracle size cap."""


@dataclass(frozen=True)
class DenseHamiltonian:
    """H = Σ w_ij E_ij as an explicit real symmetric matrix, n ≤ 14."""

    n: int
    matrix: np.ndarray


def _bit(n: int, qubit: int) -> int:
    # Qubit 0 is the most significant bit of the basis index.
    return 1 << (n - 1 - qubit)


def build_hamiltonian(g: WeightedGraph) -> DenseHamiltonian:
    if g.n > MAX_ORACLE_QUBITS:
        raise OracleError(f"n = {g.n} exceeds the dense cap {MAX_ORACLE_QUBITS}")
    dim = 1 << g.n
    h = np.zeros((dim, dim))
    idx = np.arange(dim)
    for i, j, w in g.edges:
        bi, bj = _bit(g.n, i), _bit(g.n, j)
        a00 = idx[(idx & bi == 0) & (idx & bj == 0)]
        a11 = a00 | bi | bj
        h[a00, a00] += w / 2
        h[a11, a11] += w / 2
        h[a00, a11] += w / 2
        h[a11, a00] += w / 2
    return DenseHamiltonian(g.n, h)


def lambda_max(h: DenseHamiltonian) -> tuple[float, Ket]:
    """Top eigenpair of the dense Hamiltonian, residual-checked."""
    dim = h.matrix.shape[0]
    if dim == 1 or not h.matrix.any():
        return 0.0, Ket(np.eye(dim)[:, 0].astype(complex))
    vals, vecs = eigh(h.matrix, subset_by_index=[dim - 1, dim - 1])
    lam, vec = float(vals[0]), vecs[:, 0]
    residual = float(np.linalg.norm(h.matrix @ vec - lam * vec))
    if residual > EIG_RESIDUAL_TOL * max(1.0, abs(lam)):
        raise ArithmeticError(f"eigensolver residual {residual:.3e} too large")
    return lam, Ket(vec.astype(complex))


def ket_pair_energy(amplitudes: np.ndarray, n: int, i: int, j: int) -> float:
    """⟨v|E_ij|v⟩ without building any matrix."""
    dim = 1 << n
    bi, bj = _bit(n, i), _bit(n, j)
    idx = np.arange(dim)
    a00 = idx[(idx & bi == 0) & (idx & bj == 0)]
    s = amplitudes[a00] + amplitudes[a00 | bi | bj]
    return float(0.5 * np.sum(np.abs(s) ** 2))


def vertex_energy_lists(ket: Ket, n: int) -> list[list[float]]:
    """Per-vertex lists of pair energies against every other qubit."""
    pair = {}
    for i in range(n):
        for j in range(i + 1, n):
            pair[(i, j)] = ket_pair_energy(ket.amplitudes, n, i, j)
    return [[pair[(min(i, j), max(i, j))] for j in range(n) if j != i] for i in range(n)]


def brute_force_lp(g: WeightedGraph) -> Fraction:
    """Exhaustive max of Σ w x over half-integral x with unit vertex caps.

    Valid because some optimum of the fractional matching polytope is
    half-integral. Loads are doubled so everything stays in integers;
    weights become exact rationals. Capped at MAX_BRUTE_EDGES edges.
    """
    if g.num_edges > MAX_BRUTE_EDGES:
        raise OracleError(f"|E| = {g.num_edges} exceeds the brute-force cap")

    comp = _support_components(g)
    total = Fraction(0)
    for edges in comp:
        edges = sorted(edges, key=lambda e: -e[2])
        weights = [Fraction(w) for _, _, w in edges]
        suffix = [Fraction(0)] * (len(edges) + 1)
        for t in range(len(edges) - 1, -1, -1):
            suffix[t] = suffix[t + 1] + weights[t]
        load: dict[int, int] = {}
        best = Fraction(0)

        def dfs(t: int, cur: Fraction) -> None:
            nonlocal best
            if cur + suffix[t] <= best:
                return
            if t == len(edges):
                best = max(best, cur)
                return
            i, j, _ = edges[t]
            li, lj = load.get(i, 0), load.get(j, 0)
            for x2 in (2, 1, 0):
                if li + x2 <= 2 and lj + x2 <= 2:
                    load[i], load[j] = li + x2, lj + x2
                    dfs(t + 1, cur + weights[t] * x2 / 2)
            load[i], load[j] = li, lj

        dfs(0, Fraction(0))
        total += best
    return total


def brute_force_matching(g: WeightedGraph) -> Fraction:
    """Exhaustive maximum-weight integral matching (x ∈ {0,1})."""
    if g.num_edges > MAX_BRUTE_EDGES:
        raise OracleError(f"|E| = {g.num_edges} exceeds the brute-force cap")
    edges = sorted(g.edges, key=lambda e: -e[2])
    weights = [Fraction(w) for _, _, w in edges]
    suffix = [Fraction(0)] * (len(edges) + 1)
    for t in range(len(edges) - 1, -1, -1):
        suffix[t] = suffix[t + 1] + weights[t]
    used: set[int] = set()
    best = Fraction(0)

    def dfs(t: int, cur: Fraction) -> None:
        nonlocal best
        if cur + suffix[t] <= best:
            return
        if t == len(edges):
            best = max(best, cur)
            return
        i, j, _ = edges[t]
        if i not in used and j not in used:
            used.add(i)
            used.add(j)
            dfs(t + 1, cur + weights[t])
            used.discard(i)
            used.discard(j)
        dfs(t + 1, cur)

    dfs(0, Fraction(0))
    return best


def _support_components(g: WeightedGraph) -> list[list[tuple[int, int, float]]]:
    parent = list(range(g.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j, _ in g.edges:
        parent[find(i)] = find(j)
    groups: dict[int, list[tuple[int, int, float]]] = {}
    for i, j, w in g.edges:
        groups.setdefault(find(i), []).append((i, j, w))
    return list(groups.values())


def measure_ratio(g: WeightedGraph, audit_star_bound: bool = False) -> dict:
    """Run the full pipeline and compare against exact ground truth.

    Reports achieved/upper_bound always; achieved/λ_max when n is within
    the dense cap. Ratios default to 1 on weightless instances.
    """
    from .rounding import certify, round_solution

    sol = solve_lp(g)
    rs = round_solution(g, sol)
    cert = certify(g, sol, rs)
    ub = upper_bound(g, sol)
    report: dict = {
        "n": g.n,
        "num_edges": g.num_edges,
        "lp_value": float(sol.lp_value),
        "upper_bound": ub,
        "achieved": cert.total_energy,
        "ratio_vs_upper_bound": cert.total_energy / ub if ub > 0 else 1.0,
        "certificate_pass": cert.passed,
        "min_edge_ratio": cert.min_ratio,
        "lambda_max": None,
        "ratio_vs_lambda_max": None,
    }
    if g.n <= MAX_ORACLE_QUBITS:
        lam, vec = lambda_max(build_hamiltonian(g))
        report["lambda_max"] = lam
        report["ratio_vs_lambda_max"] = cert.total_energy / lam if lam > 1e-12 else 1.0
        report["upper_bound_slack"] = ub - lam
        if audit_star_bound:
            from .lp import star_bound_check

            report["star_bound_ok"] = all(
                star_bound_check(lst) for lst in vertex_energy_lists(vec, g.n)
            )
    _ = lp_energies(sol)
    return report


def corpus_small(include_heavy: bool = False) -> list[tuple[str, WeightedGraph]]:
    """Deterministic named corpus (> 200 instances, all n ≤ 10).

    Families: G(n,p) with several densities, odd/even cycles, complete
    graphs (unit and random weights), and random bipartite graphs.
    """
    out: list[tuple[str, WeightedGraph]] = []
    for n in range(4, 9):
        for p in (0.3, 0.5, 0.7):
            for seed in range(1, 11):
                out.append((f"gnp-n{n}-p{p}-s{seed}", generate("random_gnp", n=n, p=p, seed=seed)))
    for n in (9, 10):
        for seed in range(1, 16):
            out.append((f"gnp-n{n}-p0.5-s{seed}", generate("random_gnp", n=n, p=0.5, seed=seed)))
    for k in range(3, 10):
        out.append((f"cycle-C{k}", generate("cycle", k=k)))
    for n in range(3, 7):
        out.append((f"complete-K{n}", generate("complete", n=n)))
        out.append((f"complete-K{n}-rand", generate("complete", n=n, seed=n)))
    for na, nb in ((3, 3), (4, 4), (5, 5), (3, 5)):
        for seed in range(1, 6):
            out.append(
                (f"bip-{na}x{nb}-s{seed}", generate("bipartite_random", na=na, nb=nb, p=0.6, seed=seed))
            )
    if include_heavy:
        out.append(("gnp-n12-p0.4-s1", generate("random_gnp", n=12, p=0.4, seed=1)))
    return out
