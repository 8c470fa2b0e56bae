"""Problem instances: weighted interaction graphs, I/O and test families.

The on-disk edge-list format is: first non-comment line "n", then one edge
per line "i j w" (whitespace separated, '#' starts a comment line). Weights
may be decimal or rational "p/q"; rationals are converted at parse time.
A JSON mirror {"n": int, "edges": [[i, j, w], ...]} is also supported.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np


class InstanceError(ValueError):
    """Malformed instance: parse failure or a violated graph invariant."""


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric nonnegative interaction graph on qubits 0..n-1.

    Edges are stored canonically: i < j, sorted, strictly positive weights
    (zero-weight edges are dropped on construction so the support graph is
    exactly the stored edge set). Immutable after construction.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InstanceError(f"negative vertex count {self.n}")
        seen: set[tuple[int, int]] = set()
        canonical = []
        for i, j, w in self.edges:
            i, j, w = int(i), int(j), float(w)
            if i == j:
                raise InstanceError(f"self-loop at vertex {i}")
            if i > j:
                i, j = j, i
            if not 0 <= i < self.n or not j < self.n:
                raise InstanceError(f"edge ({i}, {j}) out of range for n={self.n}")
            if (i, j) in seen:
                raise InstanceError(f"duplicate edge ({i}, {j})")
            if w < 0 or not math.isfinite(w):
                raise InstanceError(f"weight {w} on edge ({i}, {j}) must be finite and >= 0")
            seen.add((i, j))
            if w > 0:
                canonical.append((i, j, w))
        canonical.sort()
        object.__setattr__(self, "edges", tuple(canonical))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def total_weight_exact(self) -> Fraction:
        return sum((Fraction(w) for _, _, w in self.edges), Fraction(0))

    def weight(self, i: int, j: int) -> float:
        if i > j:
            i, j = j, i
        return self.weight_map().get((i, j), 0.0)

    def weight_map(self) -> dict[tuple[int, int], float]:
        return {(i, j): w for i, j, w in self.edges}

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def save(self, path: str | Path, fmt: str = "edgelist") -> None:
        path = Path(path)
        if fmt == "edgelist":
            lines = [str(self.n)]
            lines += [f"{i} {j} {w!r}" for i, j, w in self.edges]
            path.write_text("\n".join(lines) + "\n")
        elif fmt == "json":
            path.write_text(json.dumps({"n": self.n, "edges": [[i, j, w] for i, j, w in self.edges]}))
        else:
            raise InstanceError(f"unknown format {fmt!r}")


@dataclass(frozen=True)
class Bipartition:
    """Two disjoint sides covering all vertices; every edge crosses sides."""

    side_a: frozenset[int]
    side_b: frozenset[int]


@dataclass(frozen=True)
class QubitFrame:
    """Qubits that carry a Pauli-Y conjugation in the output state.

    Converting a bipartite antiferromagnetic (singlet) instance to the
    ferromagnetic pair form leaves the graph unchanged and records one side
    of the bipartition here; conjugating each output block by Y on these
    qubits maps pair-state energies to singlet energies exactly.
    """

    y_qubits: frozenset[int] = field(default_factory=frozenset)


def _parse_weight(token: str, lineno: int) -> float:
    try:
        if "/" in token:
            return float(Fraction(token))
        return float(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"line {lineno}: bad weight {token!r}: {exc}") from None


def parse_edgelist(text: str) -> WeightedGraph:
    n: int | None = None
    edges: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError:
                raise InstanceError(f"line {lineno}: expected vertex count, got {line!r}") from None
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InstanceError(f"line {lineno}: expected 'i j w', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise InstanceError(f"line {lineno}: bad vertex index in {line!r}") from None
        w = _parse_weight(parts[2], lineno)
        edges.append((i, j, w))
    if n is None:
        raise InstanceError("empty instance file")
    try:
        return WeightedGraph(n, tuple(edges))
    except InstanceError as exc:
        raise InstanceError(str(exc)) from None


def load_instance(path: str | Path, fmt: str | None = None) -> WeightedGraph:
    """Read an instance file; format inferred from the suffix unless given."""
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix == ".json" else "edgelist"
    text = path.read_text()
    if fmt == "edgelist":
        return parse_edgelist(text)
    if fmt == "json":
        try:
            obj = json.loads(text)
            return WeightedGraph(int(obj["n"]), tuple((e[0], e[1], e[2]) for e in obj["edges"]))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise InstanceError(f"bad JSON instance: {exc}") from None
    raise InstanceError(f"unknown format {fmt!r}")


def detect_bipartition(g: WeightedGraph) -> Bipartition | None:
    """2-color the support graph by BFS, or None if an odd cycle exists.

    Isolated vertices go to side A.
    """
    color = [-1] * g.n
    adj = g.adjacency()
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    side_a = frozenset(v for v in range(g.n) if color[v] == 0)
    side_b = frozenset(v for v in range(g.n) if color[v] == 1)
    return Bipartition(side_a, side_b)


def qmc_to_epr(g: WeightedGraph, b: Bipartition) -> tuple[WeightedGraph, QubitFrame]:
    """Convert a bipartite singlet-projector instance to the pair form.

    The graph is unchanged; the returned frame marks side A as Y-conjugated.
    """
    for i, j, _ in g.edges:
        in_a = (i in b.side_a) + (j in b.side_a)
        if in_a != 1:
            raise InstanceError(f"edge ({i}, {j}) does not cross the bipartition")
    if not b.side_a.isdisjoint(b.side_b) or b.side_a | b.side_b != set(range(g.n)):
        raise InstanceError("sides must be disjoint and cover all vertices")
    return g, QubitFrame(frozenset(b.side_a))


def generate(family: str, **params) -> WeightedGraph:
    """Deterministic test-family generator.

    Families: cycle(k, weight), complete(n, weight|seed), star(leaves, weight),
    random_gnp(n, p, seed, weights), bipartite_random(na, nb, p, seed, weights).
    Random weights are Uniform(0, 1] drawn from numpy's default generator.
    """
    if family == "cycle":
        k = int(params["k"] if params.get("k") is not None else params["n"])
        w = float(params.get("weight", 1.0))
        if k < 3:
            raise InstanceError("cycle needs k >= 3")
        return WeightedGraph(k, tuple((i, (i + 1) % k, w) for i in range(k)))
    if family == "complete":
        n = int(params["n"])
        if n < 1:
            raise InstanceError("complete needs n >= 1")
        seed = params.get("seed")
        if seed is None:
            w = float(params.get("weight", 1.0))
            edges = [(i, j, w) for i in range(n) for j in range(i + 1, n)]
        else:
            rng = np.random.default_rng(int(seed))
            edges = [(i, j, 1.0 - rng.random()) for i in range(n) for j in range(i + 1, n)]
        return WeightedGraph(n, tuple(edges))
    if family == "star":
        leaves = int(params["leaves"] if params.get("leaves") is not None else params["n"])
        w = float(params.get("weight", 1.0))
        if leaves < 1:
            raise InstanceError("star needs >= 1 leaf")
        return WeightedGraph(leaves + 1, tuple((0, i, w) for i in range(1, leaves + 1)))
    if family == "random_gnp":
        n, p = int(params["n"]), float(params["p"])
        if n < 1 or not 0.0 <= p <= 1.0:
            raise InstanceError(f"bad gnp parameters n={n}, p={p}")
        rng = np.random.default_rng(int(params.get("seed", 0)))
        unit = params.get("weights", "uniform") == "unit"
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    edges.append((i, j, 1.0 if unit else 1.0 - rng.random()))
        return WeightedGraph(n, tuple(edges))
    if family == "bipartite_random":
        na, nb, p = int(params["na"]), int(params["nb"]), float(params["p"])
        if na < 1 or nb < 1 or not 0.0 <= p <= 1.0:
            raise InstanceError(f"bad bipartite parameters na={na}, nb={nb}, p={p}")
        rng = np.random.default_rng(int(params.get("seed", 0)))
        unit = params.get("weights", "uniform") == "unit"
        edges = []
        for i in range(na):
            for j in range(na, na + nb):
                if rng.random() < p:
                    edges.append((i, j, 1.0 if unit else 1.0 - rng.random()))
        return WeightedGraph(na + nb, tuple(edges))
    raise InstanceError(f"unknown family {family!r}")
