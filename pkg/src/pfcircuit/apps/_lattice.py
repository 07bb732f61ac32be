"""Path-counting circuits on plane graphs drawn with straight edges.

Every vertex becomes an even subPfaffian gate whose matrix entry for a pair
of incident edges is the weight of a path turning through them.  Every
edge is split by an AE2 cogate so the two half-edges agree, and terminals
get an extra slot closed off by a <1| junction.
"""

from __future__ import annotations

import math
from typing import Callable, Hashable, Mapping, Sequence

from ..circuit import Circuit
from ..pfaffian import SkewMatrix, sub_pf_gate
from ..tensor import ae2, one1

JUNCTION = "J"

# pair weight for (vertex, slot key, slot key); slot keys are edge names or JUNCTION
PairWeight = Callable[[Hashable, Hashable, Hashable], object]


def incident_slots(points: Mapping[Hashable, tuple[float, float]],
                   edges: Mapping[str, tuple[Hashable, Hashable]]) -> dict[Hashable, list[str]]:
    """Edge names around each vertex, counterclockwise by angle."""
    around: dict[Hashable, list[tuple[float, str]]] = {v: [] for v in points}
    for name, (u, v) in edges.items():
        for a, b in ((u, v), (v, u)):
            (ax, ay), (bx, by) = points[a], points[b]
            around[a].append((math.atan2(by - ay, bx - ax), name))
    return {v: [n for _, n in sorted(lst)] for v, lst in around.items()}


def path_circuit(points: Mapping[Hashable, tuple[float, float]],
                 edges: Mapping[str, tuple[Hashable, Hashable]],
                 gate_name: Callable[[Hashable], str],
                 terminals: Sequence[Hashable],
                 weight: PairWeight) -> Circuit:
    """Build the circuit; gate slots are numbered in rotation order."""
    slots = incident_slots(points, edges)
    c = Circuit()
    rotation: dict[str, list[int]] = {}
    slot_no: dict[tuple[Hashable, Hashable], int] = {}
    for v in points:
        keys: list[Hashable] = ([JUNCTION] if v in terminals else []) + slots[v]
        ents = {}
        for i, a in enumerate(keys):
            slot_no[(v, a)] = i + 1
            for j in range(i + 1, len(keys)):
                w = weight(v, a, keys[j])
                if w:
                    ents[(i + 1, j + 1)] = w
        Xi = SkewMatrix(tuple(range(1, len(keys) + 1)), ents)
        c.add_gate(gate_name(v), sub_pf_gate(Xi))
    for name, (u, v) in edges.items():
        c.add_cogate(name, ae2())
        for end, s in ((u, 1), (v, 2)):
            e = c.connect(gate_name(end), slot_no[(end, name)], name, s)
            rotation.setdefault(name, []).append(e)
    for t, v in enumerate(terminals):
        jname = ("start", "end")[t] if len(terminals) == 2 else f"terminal{t}"
        c.add_cogate(jname, one1())
        e = c.connect(gate_name(v), slot_no[(v, JUNCTION)], jname, 1)
        rotation[jname] = [e]
    by_slot = {(e.gate, e.gate_slot): e.id for e in c.edges}
    for v in points:
        g = gate_name(v)
        rotation[g] = [by_slot[(g, s)] for s in c.nodes[g].slots]
    c.rotation = rotation
    return c


def edge_ids(c: Circuit) -> dict[tuple[str, str], int]:
    """Circuit edge id for each (gate, cogate) pair."""
    return {(e.gate, e.cogate): e.id for e in c.edges}
