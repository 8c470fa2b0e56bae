"""Fractional matching: exact optimum, odd-cycle normal form, energy budgets.

The LP — maximize Σ w_ij x_ij subject to Σ_j x_ij ≤ 1 per vertex, x ≥ 0 —
always has a half-integral optimum. We obtain one from a maximum-weight
assignment on the bipartite double cover (vertices {v'} ∪ {v''}, both
(u',v'') and (v',u'') carrying w_uv, diagonal slots for staying unmatched):
any feasible x embeds as a doubly-substochastic matrix worth 2·Σ w x, and
conversely x_uv = (matched(u',v'') + matched(v',u''))/2 is feasible with
half the assignment value, so the two optima agree.

normalize() reroute s even cycles and paths of half-edges into integral
matchings of no smaller weight, leaving the matching-plus-odd-cycles form
that downstream rounding consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import WeightedGraph
from .matching import max_weight_assignment

HALF = Fraction(1, 2)
STAR_BOUND_SLACK = 1e-9
Edge = tuple[int, int]


def _key(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class HalfIntegralSolution:
    """Feasible half-integral point in matching-plus-odd-cycles form.

    x maps support edges to 1/2 or 1 (absent means 0); matched holds the
    x = 1 edges, cycles the vertex-disjoint odd cycles carrying the 1/2
    values, unmatched the vertices with zero load. lp_value is exact when
    the solver ran its integer route.
    """

    graph: WeightedGraph
    x: dict[Edge, Fraction]
    matched: frozenset[Edge]
    cycles: tuple[tuple[int, ...], ...]
    unmatched: frozenset[int]
    lp_value: Fraction
    exact: bool = True

    def validate(self) -> None:
        load = [Fraction(0)] * self.graph.n
        weight_map = self.graph.weight_map()
        for (i, j), v in self.x.items():
            if v not in (HALF, Fraction(1)):
                raise ValueError(f"x[{i},{j}] = {v} is not half-integral support")
            if (i, j) not in weight_map:
                raise ValueError(f"x places mass on non-edge ({i}, {j})")
            load[i] += v
            load[j] += v
        for v, l in enumerate(load):
            if l > 1:
                raise ValueError(f"vertex {v} load {l} exceeds 1")
        if {e for e, v in self.x.items() if v == 1} != set(self.matched):
            raise ValueError("matched set disagrees with x")
        cyc_edges = set()
        cyc_vertices: set[int] = set()
        for c in self.cycles:
            if len(c) < 3 or len(c) % 2 == 0:
                raise ValueError(f"cycle {c} is not odd with length >= 3")
            if cyc_vertices & set(c):
                raise ValueError("cycles share vertices")
            cyc_vertices |= set(c)
            cyc_edges |= {_key(c[t], c[(t + 1) % len(c)]) for t in range(len(c))}
        if {e for e, v in self.x.items() if v == HALF} != cyc_edges:
            raise ValueError("cycle edges disagree with x")
        matched_vertices = {v for e in self.matched for v in e}
        if matched_vertices & cyc_vertices:
            raise ValueError("matching touches a cycle vertex")
        expect_u = set(range(self.graph.n)) - matched_vertices - cyc_vertices
        if expect_u != set(self.unmatched):
            raise ValueError("unmatched set disagrees with support")
        total = sum((Fraction(weight_map[e]) * v for e, v in self.x.items()), Fraction(0))
        if total != self.lp_value:
            raise ValueError(f"lp_value {self.lp_value} != recomputed {total}")

    def value_float(self) -> float:
        return float(self.lp_value)

    def cycle_lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)


def _half_edge_components(n: int, half_edges: set[Edge]) -> list[tuple[str, list[int]]]:
    """Split the half-edge graph (max degree 2) into ('path'|'cycle', vertices).

    Path vertices are listed end to end; cycle vertices in traversal order.
    """
    adj: dict[int, list[int]] = {}
    for i, j in half_edges:
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    for v, nbrs in adj.items():
        if len(nbrs) > 2:
            raise ValueError(f"vertex {v} carries {len(nbrs)} half-edges")
    seen: set[int] = set()
    out: list[tuple[str, list[int]]] = []
    for start in sorted(adj):
        if start in seen or len(adj[start]) != 1:
            continue
        walk = [start]
        seen.add(start)
        prev, cur = start, adj[start][0]
        while True:
            walk.append(cur)
            seen.add(cur)
            nxt = [u for u in adj[cur] if u != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
        out.append(("path", walk))
    for start in sorted(adj):
        if start in seen:
            continue
        walk = [start]
        seen.add(start)
        prev, cur = start, min(adj[start])
        while cur != start:
            walk.append(cur)
            seen.add(cur)
            nxt = [u for u in adj[cur] if u != prev]
            prev, cur = cur, nxt[0]
        out.append(("cycle", walk))
    return out


def _heavier_alternation_class(edges: list[Edge], weights: dict[Edge, float]) -> list[Edge]:
    """Pick the heavier of the two alternating edge classes along a walk.

    Ties go to the class containing the lexicographically smallest edge.
    """
    class_a = [e for t, e in enumerate(edges) if t % 2 == 0]
    class_b = [e for t, e in enumerate(edges) if t % 2 == 1]
    wa = sum((Fraction(weights[e]) for e in class_a), Fraction(0))
    wb = sum((Fraction(weights[e]) for e in class_b), Fraction(0))
    if wa != wb:
        return class_a if wa > wb else class_b
    if not class_b:
        return class_a
    return class_a if min(class_a) <= min(class_b) else class_b


def normalize(g: WeightedGraph, raw_x: dict[Edge, Fraction], exact: bool = True) -> HalfIntegralSolution:
    """Reroute even cycles and paths of half-edges into matched edges.

    Each such component is replaced by its heavier alternating class at
    x = 1, which never decreases the objective and leaves only odd cycles
    carrying halves. The input must be feasible and half-integral.
    """
    weights = g.weight_map()
    load = [Fraction(0)] * g.n
    matched: set[Edge] = set()
    half_edges: set[Edge] = set()
    for (i, j), v in raw_x.items():
        e = _key(i, j)
        if e not in weights:
            raise ValueError(f"x places mass on non-edge {e}")
        if v == 1:
            matched.add(e)
        elif v == HALF:
            half_edges.add(e)
        elif v != 0:
            raise ValueError(f"x[{e}] = {v} is not in {{0, 1/2, 1}}")
        load[i] += v
        load[j] += v
    if any(l > 1 for l in load):
        raise ValueError("infeasible input: vertex load exceeds 1")

    cycles: list[tuple[int, ...]] = []
    for kind, walk in _half_edge_components(g.n, half_edges):
        if kind == "cycle" and len(walk) % 2 == 1:
            # Canonical orientation: smallest vertex first, smaller neighbor second.
            p = walk.index(min(walk))
            rot = walk[p:] + walk[:p]
            if rot[-1] < rot[1]:
                rot = [rot[0]] + rot[:0:-1]
            cycles.append(tuple(rot))
            continue
        if kind == "cycle":
            edges = [_key(walk[t], walk[(t + 1) % len(walk)]) for t in range(len(walk))]
        else:
            edges = [_key(walk[t], walk[t + 1]) for t in range(len(walk) - 1)]
        matched.update(_heavier_alternation_class(edges, weights))

    x: dict[Edge, Fraction] = {e: Fraction(1) for e in sorted(matched)}
    for c in cycles:
        for t in range(len(c)):
            x[_key(c[t], c[(t + 1) % len(c)])] = HALF
    cycles.sort()
    covered = {v for e in matched for v in e} | {v for c in cycles for v in c}
    lp_value = sum((Fraction(weights[e]) * v for e, v in x.items()), Fraction(0))
    sol = HalfIntegralSolution(
        graph=g,
        x=x,
        matched=frozenset(matched),
        cycles=tuple(cycles),
        unmatched=frozenset(set(range(g.n)) - covered),
        lp_value=lp_value,
        exact=exact,
    )
    sol.validate()
    return sol


def solve_lp(g: WeightedGraph) -> HalfIntegralSolution:
    """Exact LP optimum in matching-plus-odd-cycles form via the double cover."""
    n = g.n
    if n == 0 or not g.edges:
        return normalize(g, {})
    gain = [[0.0] * n for _ in range(n)]
    for i, j, w in g.edges:
        gain[i][j] = w
        gain[j][i] = w
    total, sigma, exact = max_weight_assignment(gain)
    raw: dict[Edge, Fraction] = {}
    for u in range(n):
        v = sigma[u]
        if u != v and gain[u][v] > 0:
            e = _key(u, v)
            raw[e] = raw.get(e, Fraction(0)) + HALF
    sol = normalize(g, raw, exact=exact)
    # Rerouting cannot exceed the LP optimum, so equality certifies both steps.
    if exact and sol.lp_value != Fraction(total) / 2:
        raise AssertionError("normalization changed the optimal value")
    if not exact and abs(float(sol.lp_value) - total / 2) > 1e-6 * max(1.0, abs(total)):
        raise AssertionError("normalization drifted from the solver value")
    return sol


@dataclass(frozen=True)
class LpEnergies:
    """Per-pair energy budgets Ẽ_ij = (1 + x_ij)/2 ∈ {1/2, 3/4, 1}."""

    solution: HalfIntegralSolution

    def value(self, i: int, j: int) -> Fraction:
        return (1 + self.solution.x.get(_key(i, j), Fraction(0))) / 2

    def total(self) -> Fraction:
        return sum(
            (Fraction(w) * self.value(i, j) for i, j, w in self.solution.graph.edges),
            Fraction(0),
        )


def lp_energies(s: HalfIntegralSolution) -> LpEnergies:
    return LpEnergies(s)


def upper_bound(g: WeightedGraph, s: HalfIntegralSolution) -> float:
    """Ground-energy upper bound (Σ w + lp_value)/2 = Σ w_ij Ẽ_ij."""
    return float((g.total_weight_exact() + s.lp_value) / 2)


def star_bound_check(energies: list[float] | tuple[float, ...]) -> bool:
    """True iff Σ max(0, 2e − 1) ≤ 1 + 1e−9 — necessary for realizability."""
    return sum(max(0.0, 2.0 * e - 1.0) for e in energies) <= 1.0 + STAR_BOUND_SLACK
