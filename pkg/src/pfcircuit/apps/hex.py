"""Path counting on regions of the hexagonal (honeycomb) grid.

Hexagons use axial coordinates.  A honeycomb vertex is named by the three
hexagons meeting at it, so regions sharing a vertex agree on its name.
Every vertex is trivalent or less, so no two paths can cross: the circuit
counts simple start-to-end paths together with any disjoint simple loops.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Iterable

from ..circuit import Circuit, Evaluator
from ..coefficients import Value
from ..errors import InvalidRegion, TooLarge
from ._lattice import JUNCTION, path_circuit

Hex = tuple[int, int]
HexVertex = frozenset

# neighbour directions in counterclockwise order
HEX_DIRECTIONS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))


def _shift(h: Hex, d: Hex) -> Hex:
    return (h[0] + d[0], h[1] + d[1])


def hex_corner(h: Hex, i: int) -> HexVertex:
    """Corner i (0..5) of hexagon h, between neighbour directions i and i+1."""
    return frozenset((h, _shift(h, HEX_DIRECTIONS[i % 6]), _shift(h, HEX_DIRECTIONS[(i + 1) % 6])))


def hex_edges(region: Iterable[Hex]) -> dict[frozenset, tuple[HexVertex, HexVertex]]:
    """Boundary edges of the hexagons, keyed by the pair of hexagons they separate."""
    out = {}
    for h in region:
        for i, d in enumerate(HEX_DIRECTIONS):
            out[frozenset((h, _shift(h, d)))] = (hex_corner(h, i - 1), hex_corner(h, i))
    return out


def _centre(h: Hex) -> tuple[float, float]:
    q, r = h
    return (math.sqrt(3) * (q + r / 2), -1.5 * r)


def _position(v: HexVertex) -> tuple[float, float]:
    pts = [_centre(h) for h in v]
    return (sum(p[0] for p in pts) / 3, sum(p[1] for p in pts) / 3)


def _vertex_name(v: HexVertex) -> str:
    return "v" + "|".join(f"{q}_{r}" for q, r in sorted(v))


def _check(region: set[Hex], start: HexVertex, end: HexVertex) -> dict:
    if not region:
        raise InvalidRegion("empty hex region")
    seen, stack = set(), [next(iter(region))]
    while stack:
        h = stack.pop()
        if h in seen:
            continue
        seen.add(h)
        stack.extend(w for w in (_shift(h, d) for d in HEX_DIRECTIONS) if w in region)
    if seen != region:
        raise InvalidRegion("hex region is not connected")
    if start == end:
        raise InvalidRegion("start and end coincide")
    edges = hex_edges(region)
    verts = {v for e in edges.values() for v in e}
    for v in (start, end):
        if v not in verts:
            raise InvalidRegion("start and end must be corners of the region")
    return edges


def build_hex_circuit(region: Iterable[Hex], start: HexVertex, end: HexVertex) -> Circuit:
    """All-ones trivalent gates, AE2 cogates on edges and <1| at start and end."""
    region = set(region)
    edges = _check(region, start, end)
    names = {k: "e" + "|".join(f"{q}_{r}" for q, r in sorted(k)) for k in edges}
    verts = sorted({v for e in edges.values() for v in e}, key=_vertex_name)
    points = {v: _position(v) for v in verts}

    def weight(v, a, b) -> int:
        if v in (start, end):
            return int(JUNCTION in (a, b))
        return 1

    return path_circuit(points, {names[k]: e for k, e in edges.items()}, _vertex_name, (start, end), weight)


def count_hex_paths(region: Iterable[Hex], start: HexVertex, end: HexVertex) -> Value:
    return Evaluator(build_hex_circuit(region, start, end)).value()


def hex_oracle(region: Iterable[Hex], start: HexVertex, end: HexVertex, max_edges: int = 22) -> int:
    """Edge subsets where start and end have degree 1 and every other vertex 0 or 2."""
    region = set(region)
    edges = list(_check(region, start, end).values())
    if len(edges) > max_edges:
        raise TooLarge(f"{len(edges)} edges exceeds the oracle bound {max_edges}")
    total = 0
    for bits in product((0, 1), repeat=len(edges)):
        deg: dict[HexVertex, int] = {}
        for (a, b), on in zip(edges, bits):
            if on:
                deg[a] = deg.get(a, 0) + 1
                deg[b] = deg.get(b, 0) + 1
        if deg.get(start) != 1 or deg.get(end) != 1:
            continue
        if all(d == 2 for v, d in deg.items() if v not in (start, end)):
            total += 1
    return total
