"""Planar bipartite circuits of gates and cogates, and their evaluation.

A circuit is evaluated by realizing every node as a subPfaffian tensor,
numbering the edges along a closed curve built from a spanning tree of the
gate faces graph, and taking one Pfaffian of the assembled matrix.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import networkx as nx

from .coefficients import Ring, Value, common_ring, demote
from .errors import (
    BasisMismatch,
    CircuitError,
    Disconnected,
    FitError,
    InvalidRotationSystem,
    NonPlanar,
    NotPfaffianInGivenBasis,
    OddEdgeCount,
    TooLarge,
    UnfilledSlot,
)
from .pfaffian import SkewMatrix, checkerboard, pf, transport
from .predicate_fit import Realization, fit_even_simple, realize
from .tensor import IDENTITY, BasisChange, Predicate, contract

BRUTE_FORCE_MAX_EDGES = 24


@dataclass
class Node:
    """A gate or cogate; its slots are the labels of ``predicate``."""

    name: str
    predicate: Predicate
    bases: dict[int, BasisChange] = field(default_factory=dict)

    @property
    def is_gate(self) -> bool:
        return self.predicate.is_gate

    @property
    def slots(self) -> tuple[int, ...]:
        return self.predicate.edges


@dataclass
class Edge:
    id: int
    gate: str
    gate_slot: int
    cogate: str
    cogate_slot: int
    basis: BasisChange | None = None
    pos: int | None = None


class Circuit:
    """Mutable builder for a bipartite gate/cogate circuit.

    ``rotation`` optionally fixes the cyclic order of edge ids around each
    node; by default the slot order is tried first.
    """

    def __init__(self):
        self.nodes: dict[str, Node] = {}
        self.edges: list[Edge] = []
        self.rotation: dict[str, list[int]] | None = None

    def add_node(self, name: str, predicate: Predicate, bases: Mapping[int, BasisChange] | None = None) -> str:
        if name in self.nodes:
            raise CircuitError(f"duplicate node {name!r}")
        self.nodes[name] = Node(name, predicate, dict(bases or {}))
        return name

    def add_gate(self, name, predicate, bases=None) -> str:
        if not predicate.is_gate:
            raise CircuitError(f"{name!r} is not a gate")
        return self.add_node(name, predicate, bases)

    def add_cogate(self, name, predicate, bases=None) -> str:
        if predicate.is_gate:
            raise CircuitError(f"{name!r} is not a cogate")
        return self.add_node(name, predicate, bases)

    def connect(self, gate: str, gate_slot: int, cogate: str, cogate_slot: int,
                basis: BasisChange | None = None, pos: int | None = None) -> int:
        eid = len(self.edges)
        self.edges.append(Edge(eid, gate, gate_slot, cogate, cogate_slot, basis, pos))
        return eid

    @property
    def ring(self) -> Ring:
        return common_ring([n.predicate.ring.zero for n in self.nodes.values()])

    def slot_edges(self) -> dict[tuple[str, int], int]:
        out = {}
        for e in self.edges:
            for key in ((e.gate, e.gate_slot), (e.cogate, e.cogate_slot)):
                if key in out:
                    raise CircuitError(f"slot {key[0]}.{key[1]} used twice")
                out[key] = e.id
        return out

    def edge_basis(self, e: Edge) -> BasisChange:
        declared = [b for b in (e.basis,
                                self.nodes[e.gate].bases.get(e.gate_slot),
                                self.nodes[e.cogate].bases.get(e.cogate_slot)) if b is not None]
        if any(b != declared[0] for b in declared):
            raise BasisMismatch(f"edge {e.gate}.{e.gate_slot}-{e.cogate}.{e.cogate_slot} has conflicting bases")
        return declared[0] if declared else IDENTITY

    def node_bases(self, name: str) -> dict[int, BasisChange]:
        """Effective basis per slot of node ``name``."""
        out = {}
        for e in self.edges:
            if e.gate == name:
                out[e.gate_slot] = self.edge_basis(e)
            if e.cogate == name:
                out[e.cogate_slot] = self.edge_basis(e)
        return out

    def copy(self) -> "Circuit":
        c = Circuit()
        for n in self.nodes.values():
            c.add_node(n.name, n.predicate, n.bases)
        for e in self.edges:
            c.edges.append(Edge(e.id, e.gate, e.gate_slot, e.cogate, e.cogate_slot, e.basis, e.pos))
        c.rotation = {k: list(v) for k, v in self.rotation.items()} if self.rotation else None
        return c


# validation and embedding

def _nx_graph(c: Circuit) -> nx.Graph:
    """Simple graph with every circuit edge subdivided, so parallel edges survive."""
    G = nx.Graph()
    for name in c.nodes:
        G.add_node(("n", name))
    for e in c.edges:
        G.add_edge(("n", e.gate), ("e", e.id))
        G.add_edge(("e", e.id), ("n", e.cogate))
    return G


def validate(c: Circuit, planarity: bool = True) -> None:
    """Check slot coverage, basis agreement, connectivity and planarity."""
    if not c.nodes:
        raise CircuitError("empty circuit")
    for e in c.edges:
        for name, slot, want_gate in ((e.gate, e.gate_slot, True), (e.cogate, e.cogate_slot, False)):
            node = c.nodes.get(name)
            if node is None:
                raise CircuitError(f"unknown node {name!r}")
            if node.is_gate != want_gate:
                raise CircuitError(f"{name!r} is on the wrong side of edge {e.id}")
            if slot not in node.slots:
                raise CircuitError(f"{name!r} has no slot {slot}")
    used = c.slot_edges()
    for node in c.nodes.values():
        for s in node.slots:
            if (node.name, s) not in used:
                raise UnfilledSlot(f"slot {node.name}.{s} is not connected")
    for e in c.edges:
        c.edge_basis(e)
    G = _nx_graph(c)
    if not nx.is_connected(G):
        raise Disconnected("circuit graph is not connected")
    if planarity:
        planar, _ = nx.check_planarity(G)
        if not planar:
            raise NonPlanar("circuit graph is not planar")


@dataclass
class Graph:
    """Bare incidence data used for ordering: rotations and edge ends."""

    is_gate: dict[str, bool]
    rot: dict[str, list[int]]
    ends: dict[int, tuple[str, str]]  # edge -> (gate, cogate)

    def other(self, e: int, v: str) -> str:
        g, c = self.ends[e]
        return c if v == g else g


def trace_faces(g: Graph) -> list[list[tuple[int, str]]]:
    """Faces as lists of darts (edge, tail node).

    After arriving at w along e, a face continues along the edge following
    e in w's rotation.
    """
    index = {v: {e: t for t, e in enumerate(r)} for v, r in g.rot.items()}
    seen: set[tuple[int, str]] = set()
    faces = []
    for v in g.rot:
        for e in g.rot[v]:
            if (e, v) in seen:
                continue
            face = []
            dart = (e, v)
            while dart not in seen:
                seen.add(dart)
                face.append(dart)
                de, dv = dart
                w = g.other(de, dv)
                r = g.rot[w]
                dart = (r[(index[w][de] + 1) % len(r)], w)
            faces.append(face)
    return faces


def euler_ok(g: Graph) -> bool:
    V = len(g.rot)
    E = len(g.ends)
    F = len(trace_faces(g)) if E else 1
    return V - E + F == 2


def _graph_with_rotation(c: Circuit, rot: Mapping[str, list[int]]) -> Graph:
    return Graph(
        {n: node.is_gate for n, node in c.nodes.items()},
        {n: list(rot[n]) for n in c.nodes},
        {e.id: (e.gate, e.cogate) for e in c.edges},
    )


def planar_embed(c: Circuit) -> dict[str, list[int]]:
    """A rotation system for ``c``.

    A user rotation is checked with Euler's formula.  Otherwise the slot
    order is used when it is planar, and a networkx embedding when not.
    """
    validate(c, planarity=False)  # settled below
    incident: dict[str, list[int]] = {n: [] for n in c.nodes}
    for e in c.edges:
        incident[e.gate].append(e.id)
        incident[e.cogate].append(e.id)
    if c.rotation is not None:
        rot = {n: list(c.rotation.get(n, [])) for n in c.nodes}
        for n in c.nodes:
            if sorted(rot[n]) != sorted(incident[n]):
                raise InvalidRotationSystem(f"rotation at {n!r} does not list its edges")
        if not euler_ok(_graph_with_rotation(c, rot)):
            raise InvalidRotationSystem("rotation system is not planar (Euler check failed)")
        return rot
    slot_of = c.slot_edges()
    rot = {n: [slot_of[(n, s)] for s in node.slots] for n, node in c.nodes.items()}
    if euler_ok(_graph_with_rotation(c, rot)):
        return rot
    planar, emb = nx.check_planarity(_nx_graph(c))
    if not planar:
        raise NonPlanar("circuit graph is not planar")
    return {n: [w[1] for w in emb.neighbors_cw_order(("n", n))] for n in c.nodes}


# the spanning-tree curve order

def spanning_tree_order(g: Graph, rng: random.Random | None = None) -> dict[int, int]:
    """Number the edges 1..n along a curve around a spanning tree of gate faces.

    Gates that follow each other around a face are joined in the faces graph;
    a spanning tree of it, thickened, has a boundary curve that crosses
    every circuit edge once and keeps gates on one side.  With ``rng`` the
    outer face, root and tree are chosen at random instead of
    deterministically.
    """
    gates = [v for v in g.rot if g.is_gate[v]]
    if not gates:
        raise CircuitError("circuit has no gates")
    if not g.ends:
        return {}
    faces = trace_faces(g)
    # wedge (v, e_in): the corner of v following e_in in rotation order
    appearances = []
    for f_id, face in enumerate(faces):
        apps = []
        for de, dv in face:
            w = g.other(de, dv)
            if g.is_gate[w]:
                apps.append((w, de))
        appearances.append(apps)

    # faces-graph edges: (id, wedge_a, wedge_b) joining NEXT of a to PREV of b
    links = []
    for apps in appearances:
        m = len(apps)
        if m < 2:
            continue
        for t in range(m):
            a, b = apps[t], apps[(t + 1) % m]
            if a[0] != b[0]:
                links.append((len(links), a, b))

    if rng is None:
        root = gates[0]
        outer = next(f for f, apps in enumerate(appearances) if any(w == root for w, _ in apps))
        root_wedge = next(a for a in appearances[outer] if a[0] == root)
    else:
        root = rng.choice(gates)
        choices = [a for apps in appearances for a in apps if a[0] == root]
        root_wedge = rng.choice(choices)

    adj: dict[str, list[tuple[int, str]]] = {v: [] for v in gates}
    for lid, a, b in links:
        adj[a[0]].append((lid, b[0]))
        adj[b[0]].append((lid, a[0]))
    tree: set[int] = set()
    seen = {root}
    if rng is None:
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for lid, w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    tree.add(lid)
                    queue.append(w)
    else:
        frontier = [(lid, w) for lid, w in adj[root]]
        while frontier:
            lid, w = frontier.pop(rng.randrange(len(frontier)))
            if w in seen:
                continue
            seen.add(w)
            tree.add(lid)
            frontier.extend(adj[w])
    if len(seen) != len(gates):
        raise Disconnected("faces graph of the gates is not connected")

    # cyclic item lists per gate
    wedge_items: dict[tuple[str, int], list] = {}
    for lid, a, b in links:
        if lid in tree:
            wedge_items.setdefault(a, [None, None, None])[2] = ("T", lid)
            wedge_items.setdefault(b, [None, None, None])[0] = ("T", lid)
    wedge_items.setdefault(root_wedge, [None, None, None])[1] = ("X", None)
    items: dict[str, list] = {}
    where: dict[tuple[str, int], int] = {}
    for v in gates:
        lst = []
        for e in g.rot[v]:
            lst.append(("E", e))
            for it in wedge_items.get((v, e), ()):
                if it is not None:
                    if it[0] == "T":
                        where[(v, it[1])] = len(lst)
                    lst.append(it)
        items[v] = lst
    link_ends = {lid: (a[0], b[0]) for lid, a, b in links}

    order: dict[int, int] = {}
    entry = items[root].index(("X", None))
    stack = [(root, entry, 1)]
    while stack:
        v, start, t = stack.pop()
        lst = items[v]
        L = len(lst)
        while t < L:
            kind, val = lst[(start + t) % L]
            t += 1
            if kind == "E":
                order[val] = len(order) + 1
            elif kind == "T":
                a, b = link_ends[val]
                w = b if a == v else a
                stack.append((v, start, t))
                stack.append((w, where[(w, val)], 1))
                break
    if len(order) != len(g.ends):
        raise CircuitError("curve order missed some edges")
    return order


def is_noncrossing(order: Mapping[int, int], ends: Mapping[int, tuple[str, str]]) -> bool:
    """True when both the gate and the cogate blocks of the order are noncrossing."""
    seq = sorted(order, key=order.get)
    for side in (0, 1):
        blocks = [ends[e][side] for e in seq]
        last = {b: i for i, b in enumerate(blocks)}
        stack: list[str] = []
        opened: set[str] = set()
        for i, b in enumerate(blocks):
            if b not in opened:
                opened.add(b)
                stack.append(b)
            elif stack[-1] != b:
                return False
            if last[b] == i:
                if stack[-1] != b:
                    return False
                stack.pop()
    return True


# assembly

@dataclass
class Prepared:
    """Realized nodes of a circuit with gadgets spliced into the embedding.

    ``fitted`` maps every node (including gadget partners) to its
    realization and the edge id carried by each local matrix label.
    """

    graph: Graph
    fitted: dict[str, tuple[Realization, dict[int, int]]]
    original_edges: list[int]
    gadget_edges: list[int]

    @property
    def n_edges(self) -> int:
        return len(self.graph.ends)


@dataclass
class Assembly:
    gamma: Value
    omega: SkewMatrix
    order: dict[int, int]
    prepared: Prepared


def _local_predicate(node: Node, rot: list[int], slot_of_edge: Mapping[int, int]):
    """Relabel the node's slots to 1..d following its rotation."""
    local = {slot_of_edge[e]: t + 1 for t, e in enumerate(rot)}
    return node.predicate.relabel(local), local


def _place(r: Realization, local_to_edge: Mapping[int, int], order: Mapping[int, int]) -> SkewMatrix:
    """Move a realized matrix from local labels to global positions."""
    phi = {a: order[local_to_edge[a]] for a in r.matrix.labels}
    moved = transport(r.matrix, phi)
    if moved is not None:
        return moved
    # the rotation was reordered non-dihedrally: refit the simple tensor
    t = r.simple_tensor().relabel(phi)
    try:
        refit = fit_even_simple(t)
    except FitError as exc:
        raise NotPfaffianInGivenBasis("not Pfaffian in the chosen edge order", [exc]) from exc
    return refit.matrix


def prepare(c: Circuit) -> Prepared:
    """Embed, realize every node in its rotation order and splice gadgets.

    A gadget's star edges are appended to the node's rotation, right before
    its first edge, and the partner node sees them in reverse.
    """
    rot = planar_embed(c)
    slot_maps: dict[str, dict[int, int]] = {n: {} for n in c.nodes}
    for e in c.edges:
        slot_maps[e.gate][e.id] = e.gate_slot
        slot_maps[e.cogate][e.id] = e.cogate_slot
    g = _graph_with_rotation(c, rot)
    next_id = max((e.id for e in c.edges), default=-1) + 1
    fitted: dict[str, tuple[Realization, dict[int, int]]] = {}
    gadget_edges: list[int] = []
    for name, node in c.nodes.items():
        pred, local = _local_predicate(node, rot[name], slot_maps[name])
        bases = {local[s]: b for s, b in c.node_bases(name).items()}
        r = realize(pred, bases)
        local_to_edge = {t + 1: e for t, e in enumerate(rot[name])}
        if r.gadget is not None:
            partner = f"{name}*"
            while partner in c.nodes or partner in g.rot:
                partner += "*"
            star_edges = []
            for s in r.gadget.stars:
                local_to_edge[s] = next_id
                star_edges.append(next_id)
                g.ends[next_id] = (name, partner) if node.is_gate else (partner, name)
                next_id += 1
            gadget_edges.extend(star_edges)
            g.rot[name] = g.rot[name] + star_edges
            g.rot[partner] = list(reversed(star_edges))
            g.is_gate[partner] = not node.is_gate
            k = len(star_edges)
            ploc = {s: k - j for j, s in enumerate(r.gadget.stars)}
            pr = realize(r.gadget.partner.relabel(ploc))
            if pr.gadget is not None:
                raise CircuitError("gadget partner needs its own gadget")
            fitted[partner] = (pr, {k - j: e for j, e in enumerate(star_edges)})
        fitted[name] = (r, local_to_edge)
    return Prepared(g, fitted, [e.id for e in c.edges], gadget_edges)


def assemble(p: Prepared, order: Mapping[int, int] | None = None,
             rng: random.Random | None = None) -> Assembly:
    n = p.n_edges
    if n % 2:
        raise OddEdgeCount(f"{n} edges after gadget splicing")
    g = p.graph
    if order is None:
        pos = spanning_tree_order(g, rng)
    else:
        pos = dict(order)
        for e in p.gadget_edges:
            pos[e] = len(pos) + 1
        if sorted(pos.values()) != list(range(1, n + 1)) or set(pos) != set(g.ends):
            raise CircuitError("edge order is not a bijection onto 1..n")
    ring = common_ring([r.matrix.ring.zero for r, _ in p.fitted.values()])
    gamma: Value = 1
    entries: dict[tuple[int, int], Value] = {}
    for name, (r, l2e) in p.fitted.items():
        gamma = gamma * r.scalar
        M = _place(r, l2e, pos)
        if not g.is_gate[name]:
            M = checkerboard(M)
        for k, v in M.entries.items():
            entries[k] = entries[k] + v if k in entries else v
    omega = SkewMatrix(tuple(range(1, n + 1)), entries, ring)
    return Assembly(gamma, omega, pos, p)


def assemble_omega(c: Circuit, order: Mapping[int, int] | None = None,
                   rng: random.Random | None = None) -> Assembly:
    """Realize every node, splice gadgets, order the edges and build Omega.

    ``order`` maps original edge ids to positions; gadget edges are then
    appended after them.  Without it the spanning-tree curve order is used
    (randomized when ``rng`` is given).  Raises OddEdgeCount when the
    spliced circuit has an odd number of edges.
    """
    return assemble(prepare(c), order, rng)


# evaluation

def fold_leaves(c: Circuit) -> tuple[Circuit, Value]:
    """Contract arity-1 nodes that cannot be realized into their neighbours.

    The contraction happens in the standard basis, so the circuit value is
    unchanged.  Returns the reduced circuit and a scalar factor collected
    from nodes that fold down to arity zero.
    """
    c = c.copy()
    factor: Value = 1
    changed = True
    while changed and len(c.nodes) > 1:
        changed = False
        for name, node in list(c.nodes.items()):
            if node.predicate.arity != 1:
                continue
            try:
                realize(node.predicate, c.node_bases(name))
                continue
            except FitError:
                pass
            (edge,) = [e for e in c.edges if name in (e.gate, e.cogate)]
            if node.is_gate:
                other, oslot, myslot = edge.cogate, edge.cogate_slot, edge.gate_slot
            else:
                other, oslot, myslot = edge.gate, edge.gate_slot, edge.cogate_slot
            onode = c.nodes[other]
            leaf = node.predicate.relabel({myslot: oslot})
            pair = (leaf, onode.predicate) if node.is_gate else (onode.predicate, leaf)
            reduced = contract(*pair)
            c.edges = [e for e in c.edges if e.id != edge.id]
            del c.nodes[name]
            if c.rotation is not None:
                c.rotation.pop(name, None)
                c.rotation = {v: [x for x in r if x != edge.id] for v, r in c.rotation.items()}
            if isinstance(reduced, Predicate):
                bases = {s: b for s, b in onode.bases.items() if s != oslot}
                c.nodes[other] = Node(other, reduced, bases)
            else:
                factor = factor * reduced
                del c.nodes[other]
                if c.rotation is not None:
                    c.rotation.pop(other, None)
            changed = True
            break
    return c, factor


def finish_value(value: Value, ring: Ring) -> Value:
    if ring.name == "integer":
        return demote(value)
    if ring.name == "rational":
        return Fraction(value)
    return value


class Evaluator:
    """Prepared evaluation of one circuit, reusable across edge orders."""

    def __init__(self, c: Circuit, fold: bool = True):
        planar_embed(c)  # validates, and raises unless planar
        self.ring = c.ring
        self.factor: Value = 1
        self.constant: Value | None = None
        self.prepared: Prepared | None = None
        if any(not n.predicate.coeffs for n in c.nodes.values()):
            self.constant = self.ring.zero
            return
        if fold:
            c, self.factor = fold_leaves(c)
            if not c.nodes:
                self.constant = self.factor
                return
            if len(c.nodes) == 1 and not c.edges:
                (node,) = c.nodes.values()
                self.constant = self.factor * node.predicate.coeffs.get(frozenset(), self.ring.zero)
                return
        self.circuit = c
        self.prepared = prepare(c)

    def value(self, order: Mapping[int, int] | None = None, rng: random.Random | None = None) -> Value:
        if self.constant is not None:
            return finish_value(self.constant, self.ring)
        try:
            a = assemble(self.prepared, order, rng)
        except OddEdgeCount:
            return self.ring.zero
        return finish_value(a.gamma * pf(a.omega) * self.factor, self.ring)


def evaluate(c: Circuit, order: Mapping[int, int] | None = None,
             rng: random.Random | None = None, fold: bool = True) -> Value:
    """gamma * Pf(Omega) for a closed circuit.

    Leaves that are not Pfaffian in their basis are first contracted into
    their neighbours (``fold``).  A circuit with an odd number of edges
    after gadget splicing evaluates to zero.
    """
    return Evaluator(c, fold=fold and order is None).value(order, rng)


def brute_force_value(c: Circuit, max_edges: int = BRUTE_FORCE_MAX_EDGES) -> Value:
    """Sum over edge assignments of the product of all node coefficients.

    Nodes are visited one at a time; each contributes only the support terms
    consistent with the edges already fixed, so zero terms are never
    enumerated.  Bases are ignored: the value is that of the predicates as
    given.
    """
    validate(c)
    if len(c.edges) > max_edges:
        raise TooLarge(f"{len(c.edges)} edges exceeds the brute-force bound {max_edges}")
    ring = c.ring
    slot_edge = c.slot_edges()
    # BFS order keeps shared edges close together for pruning
    names = list(c.nodes)
    nbrs: dict[str, list[str]] = {n: [] for n in names}
    for e in c.edges:
        nbrs[e.gate].append(e.cogate)
        nbrs[e.cogate].append(e.gate)
    seq, seen, queue = [], {names[0]}, deque([names[0]])
    while queue:
        v = queue.popleft()
        seq.append(v)
        for w in nbrs[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    terms = []
    for name in seq:
        node = c.nodes[name]
        edges_of = [slot_edge[(name, s)] for s in node.slots]
        t = []
        for k, v in node.predicate.coeffs.items():
            ones = frozenset(slot_edge[(name, s)] for s in k)
            t.append((ones, v))
        terms.append((edges_of, t))

    assign: dict[int, int] = {}

    def rec(i: int) -> Value:
        if i == len(terms):
            return 1
        edges_of, t = terms[i]
        total = 0
        for ones, v in t:
            ok = True
            fresh = []
            for e in edges_of:
                bit = 1 if e in ones else 0
                have = assign.get(e)
                if have is None:
                    fresh.append(e)
                    assign[e] = bit
                elif have != bit:
                    ok = False
                    break
            if ok:
                total = total + v * rec(i + 1)
            for e in fresh:
                del assign[e]
        return total

    return ring.coerce(rec(0))
