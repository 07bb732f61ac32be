"""Lattice path counting on square-grid regions.

A lattice vertex is a gate whose matrix entry for two incident grid edges
is the weight of a path turning (or going straight) through them.  Pairs of
turning paths through one vertex are weighted by the Pfaffian of that
matrix, so a crossing of all-ones entries counts once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from ..circuit import Circuit, Evaluator, assemble, finish_value
from ..coefficients import ZZ, Value, common_ring
from ..errors import InvalidRegion, TooLarge
from ..pfaffian import SkewMatrix, _pf_indexed, pf
from ._lattice import JUNCTION, edge_ids, path_circuit

Vertex = tuple[int, int]
GridEdge = tuple[Vertex, Vertex]

DIRECTIONS = {(0, 1): "N", (1, 0): "E", (0, -1): "S", (-1, 0): "W"}


class StepPolicy(enum.Enum):
    GENERAL = "general"
    MONOTONE = "monotone"
    CLOSED_LOOPS = "loops"

    @classmethod
    def parse(cls, text: str) -> "StepPolicy":
        for p in cls:
            if text.lower() in (p.value, p.name.lower()):
                return p
        raise ValueError(f"unknown step policy {text!r}")


def grid_edge(a: Vertex, b: Vertex) -> GridEdge:
    """Canonical unit edge: endpoints sorted, so the second is the N/E head."""
    if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
        raise InvalidRegion(f"{a} and {b} are not lattice neighbours")
    return (a, b) if a < b else (b, a)


def box_edges(box: Vertex) -> list[GridEdge]:
    x, y = box
    return [grid_edge((x, y), (x + 1, y)), grid_edge((x, y + 1), (x + 1, y + 1)),
            grid_edge((x, y), (x, y + 1)), grid_edge((x + 1, y), (x + 1, y + 1))]


@dataclass
class GridRegion:
    """Union of unit boxes (lower-left corners) plus optional bare edges.

    ``extra_edges`` lets a region include unit segments that bound no box,
    such as the first and last steps of a staircase.
    """

    boxes: frozenset[Vertex]
    start: Vertex | None = None
    end: Vertex | None = None
    step_policy: StepPolicy = StepPolicy.GENERAL
    edge_weights: Mapping[GridEdge, Value] = field(default_factory=dict)
    extra_edges: frozenset[GridEdge] = frozenset()

    @classmethod
    def rectangle(cls, m: int, n: int, policy: StepPolicy = StepPolicy.MONOTONE, **kw) -> "GridRegion":
        """m boxes wide and n boxes tall, start (0,0) and end (m,n) unless given."""
        if policy is not StepPolicy.CLOSED_LOOPS:
            kw.setdefault("start", (0, 0))
            kw.setdefault("end", (m, n))
        return cls(frozenset(product(range(m), range(n))), step_policy=policy, **kw)

    def edges(self) -> list[GridEdge]:
        out = set(self.extra_edges)
        for b in self.boxes:
            out.update(box_edges(b))
        return sorted(out)

    def vertices(self) -> list[Vertex]:
        return sorted({v for e in self.edges() for v in e})

    def validate(self) -> None:
        edges = self.edges()
        if not edges:
            raise InvalidRegion("region has no edges")
        for a, b in self.extra_edges:
            grid_edge(a, b)
        verts = set(self.vertices())
        adj: dict[Vertex, list[Vertex]] = {v: [] for v in verts}
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        seen, stack = {edges[0][0]}, [edges[0][0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != verts:
            raise InvalidRegion("region is not connected")
        for e in self.edge_weights:
            if e not in set(edges):
                raise InvalidRegion(f"weighted edge {e} is not in the region")
        if self.step_policy is StepPolicy.CLOSED_LOOPS:
            if self.start is not None or self.end is not None:
                raise InvalidRegion("closed loops take no start or end")
            return
        if self.start is None or self.end is None:
            raise InvalidRegion("start and end are required")
        if self.start == self.end:
            raise InvalidRegion("start and end coincide")
        for v in (self.start, self.end):
            if v not in verts:
                raise InvalidRegion(f"{v} is not a vertex of the region")

    @property
    def terminals(self) -> tuple[Vertex, ...]:
        return () if self.step_policy is StepPolicy.CLOSED_LOOPS else (self.start, self.end)


def _direction(v: Vertex, e: GridEdge) -> str:
    a, b = e
    w = b if a == v else a
    return DIRECTIONS[(w[0] - v[0], w[1] - v[1])]


def turn_weight(policy: StepPolicy, d1: str, d2: str) -> int:
    """Base weight of a path using the slots in directions d1 and d2.

    Monotone paths never use the S and W slots together: that pair is an
    E step followed by an S step or an N step followed by a W step.
    """
    if policy is StepPolicy.MONOTONE and {d1, d2} == {"S", "W"}:
        return 0
    return 1


def _names(r: GridRegion):
    edges = r.edges()
    ename = {e: f"e{e[0][0]}_{e[0][1]}{'h' if e[0][1] == e[1][1] else 'v'}" for e in edges}
    return edges, ename


def gate_name(v: Vertex) -> str:
    return f"v{v[0]}_{v[1]}"


def build_grid_circuit(r: GridRegion) -> Circuit:
    """Gates on lattice vertices, AE2 cogates on grid edges, <1| at the ends.

    At the start and end vertex only pairs containing the junction slot are
    nonzero, so the path must leave through exactly one grid edge there.  A
    weighted edge scales every entry involving its slot at its N/E head.
    """
    r.validate()
    edges, ename = _names(r)
    by_name = {ename[e]: e for e in edges}
    terminals = r.terminals
    points = {v: (float(v[0]), float(v[1])) for v in r.vertices()}

    def weight(v: Vertex, a, b) -> Value:
        if v in terminals:
            if JUNCTION not in (a, b):
                return 0
            w: Value = 1
        else:
            w = turn_weight(r.step_policy, _direction(v, by_name[a]), _direction(v, by_name[b]))
        for s in (a, b):
            if s != JUNCTION and by_name[s][1] == v and by_name[s] in r.edge_weights:
                w = w * r.edge_weights[by_name[s]]
        return w

    return path_circuit(points, {ename[e]: e for e in edges}, gate_name, terminals, weight)


def evaluate_region(r: GridRegion) -> Value:
    return Evaluator(build_grid_circuit(r)).value()


def count_monotone_paths(m: int, n: int) -> Value:
    """N/E lattice paths across an m-by-n box rectangle, via one Pfaffian."""
    if m < 1 or n < 1:
        raise InvalidRegion("m and n must be positive")
    return evaluate_region(GridRegion.rectangle(m, n))


def staircase_region(n: int) -> GridRegion:
    """Lattice points (x, y) of [0, n]^2 with y >= x, from (0,0) to (n,n)."""
    if n < 1:
        raise InvalidRegion("n must be positive")
    boxes = frozenset((i, j) for i in range(n) for j in range(i + 1, n))
    extra = frozenset({grid_edge((0, 0), (0, 1)), grid_edge((n - 1, n), (n, n))})
    return GridRegion(boxes, (0, 0), (n, n), StepPolicy.MONOTONE, extra_edges=extra)


def count_staircase_paths(n: int) -> Value:
    """Monotone paths from (0,0) to (n,n) weakly above the diagonal."""
    return evaluate_region(staircase_region(n))


# oracles

VERTEX_ORACLE_MAX_EDGES = 22


def vertex_weight(r: GridRegion, v: Vertex, used: list[GridEdge]) -> Value:
    """Weight of one vertex given the grid edges used at it.

    Free vertices take 1 for no edges, the turn weight for two, and for
    four the two non-crossing turn pairings minus the straight crossing.
    """
    dirs = {_direction(v, e): e for e in used}
    scale: Value = 1
    for e in used:
        if e[1] == v and e in r.edge_weights:
            scale = scale * r.edge_weights[e]
    if v in r.terminals:
        return scale if len(used) == 1 else 0
    def t(a, b):
        return turn_weight(r.step_policy, a, b)

    if not used:
        return 1
    if len(used) == 2:
        a, b = dirs
        return scale * t(a, b)
    if len(used) == 4:
        return scale * (t("N", "E") * t("S", "W") + t("N", "W") * t("E", "S") - t("N", "S") * t("E", "W"))
    return 0


def grid_oracle(r: GridRegion, max_edges: int = VERTEX_ORACLE_MAX_EDGES) -> Value:
    """Sum over all 0/1 labelings of the grid edges of the vertex weights."""
    r.validate()
    edges = r.edges()
    if len(edges) > max_edges:
        raise TooLarge(f"{len(edges)} grid edges exceeds the oracle bound {max_edges}")
    verts = r.vertices()
    total: Value = 0
    for bits in product((0, 1), repeat=len(edges)):
        at: dict[Vertex, list[GridEdge]] = {v: [] for v in verts}
        for e, b in zip(edges, bits):
            if b:
                at[e[0]].append(e)
                at[e[1]].append(e)
        w: Value = 1
        for v in verts:
            w = w * vertex_weight(r, v, at[v])
            if not w:
                break
        total = total + w
    return total


def monotone_path_oracle(r: GridRegion) -> int:
    """Count N/E paths from start to end along region edges by recursion."""
    edges = set(r.edges())
    ex, ey = r.end

    def walk(v: Vertex, memo: dict) -> int:
        if v == r.end:
            return 1
        if v in memo:
            return memo[v]
        total = 0
        for w in ((v[0], v[1] + 1), (v[0] + 1, v[1])):
            if w[0] <= ex and w[1] <= ey and grid_edge(v, w) in edges:
                total += walk(w, memo)
        memo[v] = total
        return total

    return walk(r.start, {})


class ReweightableGrid:
    """A region circuit assembled once and re-evaluated under edge weights.

    Scaling every entry of a gate matrix that involves slot s by w scales
    the gate's coefficients on sets containing s by w, and the same holds
    for any realization of that gate, before or after moving it to global
    positions.  So a weighted evaluation only rescales the gate entries of
    the assembled matrix; a weight of 0 removes the edge.
    """

    def __init__(self, r: GridRegion):
        if r.edge_weights:
            raise ValueError("the base region must be unweighted")
        self.region = r
        c = build_grid_circuit(r)
        ev = Evaluator(c, fold=False)
        a = assemble(ev.prepared)
        g = a.prepared.graph
        ids = edge_ids(c)
        _, ename = _names(r)
        self.gamma = a.gamma
        self.head_pos = {e: a.order[ids[(gate_name(e[1]), ename[e])]] for e in r.edges()}
        gate_at = {a.order[e]: ends[0] for e, ends in g.ends.items()}
        self.gate_entries = {}
        self.cogate_entries = {}
        for (i, j), v in a.omega.entries.items():
            same_gate = gate_at[i] == gate_at[j]
            (self.gate_entries if same_gate else self.cogate_entries)[(i, j)] = v
        self.n = a.omega.n

    def value(self, weights: Mapping[GridEdge, Value]) -> Value:
        scale = {self.head_pos[e]: w for e, w in weights.items()}
        ents = dict(self.cogate_entries)
        for (i, j), v in self.gate_entries.items():
            if i in scale:
                v = v * scale[i]
            if j in scale:
                v = v * scale[j]
            if v != 0:
                ents[(i, j)] = v
        ring = common_ring(ents.values()) if ents else ZZ
        if ring.name == "poly":
            value = pf(SkewMatrix(tuple(range(1, self.n + 1)), ents, ring))
        else:
            # integer weights are the hot path: skip building a SkewMatrix
            value = _pf_indexed(self.n, {(i - 1, j - 1): v for (i, j), v in ents.items()}, ring)
        return finish_value(self.gamma * value, ring)
