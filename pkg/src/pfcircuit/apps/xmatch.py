"""X-matchings: weighted matchings where an unsaturated right vertex
contributes minus the sum of its edge weights.

Left vertices (degree 2) become junctions <00| + <01| + <10| and right
vertices recognizers -W|0..0> + sum_i w_i |e_i>.  In the standard basis
these are not Pfaffian; after the basis change A|0> = |0>, A|1> = |0> - |1>
on every edge the junction is even and the recognizer is odd, realized
with a one-edge parity switch.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable

import networkx as nx

from ..circuit import Circuit, evaluate
from ..coefficients import Value
from ..errors import CircuitError, NonPlanar, ParseError, TooLarge
from ..tensor import COGATE, GATE, XMATCH, Predicate

XMATCH_ORACLE_MAX_EDGES = 24


@dataclass
class XGraph:
    """Bipartite graph; ``edges`` are (left, right, weight) triples."""

    left: list[Hashable]
    right: list[Hashable]
    edges: list[tuple[Hashable, Hashable, Value]]

    def validate(self) -> None:
        lset, rset = set(self.left), set(self.right)
        if lset & rset:
            raise CircuitError("a vertex is on both sides")
        deg = {v: 0 for v in self.left}
        for u, v, _ in self.edges:
            if u not in lset or v not in rset:
                raise CircuitError(f"edge {u}-{v} does not join left to right")
            deg[u] += 1
        bad = [v for v, d in deg.items() if d != 2]
        if bad:
            raise CircuitError(f"left vertices {bad} do not have degree 2")
        G = nx.MultiGraph()
        G.add_nodes_from(("L", v) for v in self.left)
        G.add_nodes_from(("R", v) for v in self.right)
        G.add_edges_from((("L", u), ("R", v)) for u, v, _ in self.edges)
        if not nx.check_planarity(nx.Graph(G))[0]:
            raise NonPlanar("graph is not planar")

    @classmethod
    def parse(cls, text: str) -> "XGraph":
        """Lines ``<left> <right>:<weight> <right>:<weight>``; weights default to 1.

        A line ``right <name> ...`` declares right vertices without edges.
        """
        left, right, edges = [], [], []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].split()
            if not line:
                continue
            if line[0] == "right":
                right.extend(v for v in line[1:] if v not in right)
                continue
            u = line[0]
            left.append(u)
            for tok in line[1:]:
                name, _, w = tok.partition(":")
                try:
                    weight = int(w) if w else 1
                except ValueError as exc:
                    raise ParseError(f"bad weight {w!r}") from exc
                if name not in right:
                    right.append(name)
                edges.append((u, name, weight))
        return cls(left, right, edges)


def build_x_matchings_circuit(g: XGraph) -> Circuit:
    """Junction cogates on the left, recognizer gates on the right, basis A everywhere."""
    g.validate()
    c = Circuit()
    incident: dict[Hashable, list[int]] = {v: [] for v in g.right}
    for k, (_, v, _) in enumerate(g.edges):
        incident[v].append(k)
    for v in g.right:
        ks = incident[v]
        if not ks:
            raise CircuitError(f"right vertex {v} is isolated")
        total = sum(g.edges[k][2] for k in ks)
        coeffs = {frozenset(): -total}
        for t, k in enumerate(ks):
            coeffs[frozenset([t + 1])] = g.edges[k][2]
        c.add_gate(f"R{v}", Predicate(GATE, range(1, len(ks) + 1), coeffs))
    for u in g.left:
        c.add_cogate(f"L{u}", Predicate.from_bits(COGATE, (1, 2), {"00": 1, "01": 1, "10": 1}))
    used = {u: 0 for u in g.left}
    for k, (u, v, _) in enumerate(g.edges):
        used[u] += 1
        c.connect(f"R{v}", incident[v].index(k) + 1, f"L{u}", used[u], basis=XMATCH)
    return c


def x_matching_value(g: XGraph) -> Value:
    """Product of the circuit values of the connected components."""
    g.validate()
    G = nx.Graph()
    G.add_nodes_from(("L", u) for u in g.left)
    G.add_nodes_from(("R", v) for v in g.right)
    G.add_edges_from((("L", u), ("R", v)) for u, v, _ in g.edges)
    total: Value = 1
    for comp in nx.connected_components(G):
        left = [u for s, u in comp if s == "L"]
        right = [v for s, v in comp if s == "R"]
        if not left:
            return 0  # an isolated right vertex contributes -0
        edges = [e for e in g.edges if e[0] in set(left)]
        total = total * evaluate(build_x_matchings_circuit(XGraph(left, right, edges)))
    return total


def x_matching_oracle(g: XGraph, max_edges: int = XMATCH_ORACLE_MAX_EDGES) -> Value:
    """Sum over matchings of edge weights times -(incident weight) per unsaturated right vertex."""
    if len(g.edges) > max_edges:
        raise TooLarge(f"{len(g.edges)} edges exceeds the oracle bound {max_edges}")
    incident_weight = {v: 0 for v in g.right}
    for _, v, w in g.edges:
        incident_weight[v] += w
    total: Value = 0
    for size in range(len(g.edges) + 1):
        for chosen in combinations(range(len(g.edges)), size):
            us = [g.edges[k][0] for k in chosen]
            vs = [g.edges[k][1] for k in chosen]
            if len(set(us)) < size or len(set(vs)) < size:
                continue
            w: Value = 1
            for k in chosen:
                w = w * g.edges[k][2]
            for v in g.right:
                if v not in vs:
                    w = w * -incident_weight[v]
            total = total + w
    return total
