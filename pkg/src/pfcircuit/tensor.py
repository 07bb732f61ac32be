"""Sparse edge-labelled gate and cogate tensors.

A predicate maps subsets of its edge labels (the positions of the 1-bits) to
nonzero coefficients.  Gates are kets, cogates are bras; contracting a gate
against a cogate sums over assignments of the shared edges.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .coefficients import QQ, ZZ, Ring, Value, common_ring, ring_of
from .errors import (
    InexactDivision,
    LabelError,
    OrientationMismatch,
    ParseError,
    SingularBasis,
)


class Orientation(enum.Enum):
    GATE = "gate"
    COGATE = "cogate"

    @property
    def dual(self) -> "Orientation":
        return Orientation.COGATE if self is Orientation.GATE else Orientation.GATE


GATE = Orientation.GATE
COGATE = Orientation.COGATE


class Parity(enum.Enum):
    EVEN = "Even"
    ODD = "Odd"
    MIXED = "Mixed"
    ZERO = "ZeroTensor"


@dataclass(frozen=True, eq=False)
class Predicate:
    """A gate or cogate on ``edges`` with sparse coefficients.

    ``coeffs`` keys may be any iterables of labels; they are normalised to
    frozensets, zero values are dropped and the ring is inferred when not
    given.
    """

    orientation: Orientation
    edges: tuple[int, ...]
    coeffs: Mapping[frozenset, Value] = field(default_factory=dict)
    ring: Ring | None = None

    def __post_init__(self):
        edges = tuple(sorted(int(e) for e in self.edges))
        if len(set(edges)) != len(edges):
            raise LabelError(f"duplicate edge labels in {self.edges}")
        ring = self.ring or common_ring(self.coeffs.values())
        eset = set(edges)
        clean = {}
        for key, v in self.coeffs.items():
            k = frozenset(key)
            if not k <= eset:
                raise LabelError(f"subset {sorted(k)} not within edges {list(edges)}")
            v = ring.coerce(v)
            if not ring.is_zero(v):
                clean[k] = clean[k] + v if k in clean else v
                if ring.is_zero(clean[k]):
                    del clean[k]
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "ring", ring)

    @classmethod
    def from_bits(cls, orientation, edges: Iterable[int], terms: Mapping[str, Value], ring: Ring | None = None):
        """Build from bitstrings; bit i belongs to the i-th label of ``edges`` as listed."""
        edges = list(edges)
        coeffs: dict[frozenset, Value] = {}
        for bits, v in terms.items():
            if len(bits) != len(edges) or set(bits) - {"0", "1"}:
                raise ParseError(f"bitstring {bits!r} does not match {len(edges)} edges")
            key = frozenset(e for e, b in zip(edges, bits) if b == "1")
            coeffs[key] = coeffs[key] + v if key in coeffs else v
        return cls(orientation, edges, coeffs, ring)

    @property
    def arity(self) -> int:
        return len(self.edges)

    @property
    def is_gate(self) -> bool:
        return self.orientation is GATE

    def bits(self, subset) -> str:
        return "".join("1" if e in subset else "0" for e in self.edges)

    def items(self):
        """Terms sorted by bitstring for deterministic iteration."""
        return sorted(self.coeffs.items(), key=lambda kv: self.bits(kv[0]))

    def with_ring(self, ring: Ring) -> "Predicate":
        return Predicate(self.orientation, self.edges, {k: ring.coerce(v) for k, v in self.coeffs.items()}, ring)

    def relabel(self, mapping: Mapping[int, int]) -> "Predicate":
        return Predicate(
            self.orientation,
            [mapping[e] for e in self.edges],
            {frozenset(mapping[e] for e in k): v for k, v in self.coeffs.items()},
            self.ring,
        )

    def __eq__(self, other):
        if not isinstance(other, Predicate):
            return NotImplemented
        if self.orientation is not other.orientation or self.edges != other.edges:
            return False
        if self.coeffs.keys() != other.coeffs.keys():
            return False
        ring = self.ring if not self.ring.exact else other.ring
        return all(ring.eq(v, other.coeffs[k]) for k, v in self.coeffs.items())

    def __hash__(self):
        return hash((self.orientation, self.edges, frozenset(self.coeffs)))

    def __repr__(self):
        return f"Predicate({format_ket(self)})"


def format_ket(p: Predicate) -> str:
    if not p.coeffs:
        return "0"
    l, r = ("|", "⟩") if p.is_gate else ("⟨", "|")
    return " + ".join(f"{p.ring.format(v)}{l}{p.bits(k)}{r}" for k, v in p.items())


@dataclass(frozen=True)
class MixedTensor:
    """Result of a contraction that leaves dangling edges on both sides.

    ``coeffs`` maps (gate-side subset, cogate-side subset) to a coefficient,
    i.e. the tensor is a sum of products of a ket on ``gate_edges`` and a bra
    on ``cogate_edges``.
    """

    gate_edges: tuple[int, ...]
    cogate_edges: tuple[int, ...]
    coeffs: Mapping[tuple[frozenset, frozenset], Value]
    ring: Ring

    def pairs(self) -> list[tuple[Predicate, Predicate]]:
        """Decompose into a list of (gate, cogate) product terms."""
        out = []
        for (gk, ck), v in sorted(self.coeffs.items(), key=lambda kv: (sorted(kv[0][0]), sorted(kv[0][1]))):
            out.append((
                Predicate(GATE, self.gate_edges, {gk: v}, self.ring),
                Predicate(COGATE, self.cogate_edges, {ck: self.ring.one}, self.ring),
            ))
        return out


def coefficient(p: Predicate, s) -> Value:
    s = frozenset(s)
    if not s <= set(p.edges):
        raise LabelError(f"unknown labels {sorted(s - set(p.edges))}")
    return p.coeffs.get(s, p.ring.zero)


def _unify(p: Predicate, q: Predicate) -> Ring:
    ring = common_ring([p.ring.zero, q.ring.zero])
    return ring


def tensor_product(p: Predicate, q: Predicate) -> Predicate:
    if p.orientation is not q.orientation:
        raise OrientationMismatch("tensor product of a gate with a cogate")
    if set(p.edges) & set(q.edges):
        raise LabelError(f"overlapping labels {sorted(set(p.edges) & set(q.edges))}")
    ring = _unify(p, q)
    coeffs = {}
    for k1, v1 in p.coeffs.items():
        for k2, v2 in q.coeffs.items():
            coeffs[k1 | k2] = v1 * v2
    return Predicate(p.orientation, p.edges + q.edges, coeffs, ring)


def contract(g: Predicate, c: Predicate):
    """Contract a gate against a cogate over their shared labels.

    Returns a ring value when nothing dangles, a Predicate when only one side
    keeps dangling edges and a :class:`MixedTensor` otherwise.
    """
    if not g.is_gate or c.is_gate:
        raise OrientationMismatch("contract expects (gate, cogate)")
    shared = frozenset(g.edges) & frozenset(c.edges)
    if not shared:
        raise LabelError("no shared labels")
    ring = _unify(g, c)
    by_shared: dict[frozenset, list] = {}
    for k, v in c.coeffs.items():
        by_shared.setdefault(k & shared, []).append((k - shared, v))
    acc: dict[tuple[frozenset, frozenset], Value] = {}
    for k, v in g.coeffs.items():
        for ck, cv in by_shared.get(k & shared, ()):
            key = (k - shared, ck)
            acc[key] = acc[key] + v * cv if key in acc else v * cv
    g_rest = tuple(e for e in g.edges if e not in shared)
    c_rest = tuple(e for e in c.edges if e not in shared)
    if not g_rest and not c_rest:
        return ring.coerce(sum(acc.values(), ring.zero))
    if not c_rest:
        return Predicate(GATE, g_rest, {gk: v for (gk, _), v in acc.items()}, ring)
    if not g_rest:
        return Predicate(COGATE, c_rest, {ck: v for (_, ck), v in acc.items()}, ring)
    return MixedTensor(g_rest, c_rest, {k: v for k, v in acc.items() if not ring.is_zero(v)}, ring)


def support_parity(p: Predicate) -> Parity:
    parities = {len(k) % 2 for k in p.coeffs}
    if not parities:
        return Parity.ZERO
    if len(parities) == 2:
        return Parity.MIXED
    return Parity.EVEN if parities == {0} else Parity.ODD


def scale(p: Predicate, c: Value) -> Predicate:
    ring = common_ring([p.ring.zero, c])
    return Predicate(p.orientation, p.edges, {k: v * c for k, v in p.coeffs.items()}, ring)


@dataclass(frozen=True)
class BasisChange:
    """2x2 change of basis: A|0> = a00|0> + a01|1>, A|1> = a10|0> + a11|1>."""

    a00: Value
    a01: Value
    a10: Value
    a11: Value
    name: str = ""

    def __post_init__(self):
        d = self.det
        if ring_of(d).is_zero(d):
            raise SingularBasis(f"singular basis matrix {self.entries}")

    @property
    def entries(self) -> tuple:
        return (self.a00, self.a01, self.a10, self.a11)

    @property
    def det(self) -> Value:
        return self.a00 * self.a11 - self.a10 * self.a01

    @property
    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1)

    def label(self) -> str:
        return self.name or ",".join(str(v) for v in self.entries)

    @classmethod
    def parse(cls, text: str, ring: Ring = ZZ) -> "BasisChange":
        key = text.strip()
        if key.lower() in NAMED_BASES:
            return NAMED_BASES[key.lower()]
        body = key
        if "=" in body:
            vals = dict(part.split("=") for part in body.split(","))
            try:
                parts = [vals[k] for k in ("a00", "a01", "a10", "a11")]
            except KeyError as exc:
                raise ParseError(f"basis {text!r} needs a00,a01,a10,a11") from exc
        else:
            parts = body.split(",")
        if len(parts) != 4:
            raise ParseError(f"basis {text!r} needs four entries")
        vals = []
        for s in parts:
            try:
                vals.append(ring.parse(s))
            except ParseError:
                vals.append(QQ.parse(s))
        return cls(*vals)

    def __eq__(self, other):
        if not isinstance(other, BasisChange):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)


IDENTITY = BasisChange(1, 0, 0, 1, "identity")
HADAMARD = BasisChange(1, 1, 1, -1, "hadamard")
XMATCH = BasisChange(1, 0, 1, -1, "xmatch")
NAMED_BASES = {
    "identity": IDENTITY, "id": IDENTITY, "i": IDENTITY,
    "hadamard": HADAMARD, "h": HADAMARD,
    "xmatch": XMATCH, "a": XMATCH,
}


def _edge_images(orientation: Orientation, A: BasisChange):
    """Images of the basis vectors |0>,|1> (or <0|,<1|) as (to0, to1) pairs.

    For cogates this is the adjugate form of the dual map; the det^-1 factor
    is applied separately by the caller.
    """
    if orientation is GATE:
        return ((A.a00, A.a01), (A.a10, A.a11))
    return ((A.a11, -A.a10), (-A.a01, A.a00))


def apply_basis(p: Predicate, bases: Mapping[int, BasisChange]) -> tuple[Predicate, Value]:
    """Apply A per gate edge or A-dual per cogate edge.

    Returns ``(q, s)`` with ``s * q`` the transformed tensor.  ``s`` is 1
    unless the determinant factor of a cogate could not be divided out
    exactly in the integers, in which case it is a Fraction.
    """
    missing = [e for e in p.edges if e not in bases]
    if missing:
        raise LabelError(f"no basis given for edges {missing}")
    used = [bases[e] for e in p.edges if not bases[e].is_identity]
    if not used:
        return p, 1
    ring = common_ring([p.ring.zero, *(v for A in used for v in A.entries)])
    coeffs = {k: ring.coerce(v) for k, v in p.coeffs.items()}
    det_total = ring.one
    for e in p.edges:
        A = bases[e]
        if A.is_identity:
            continue
        (z0, z1), (o0, o1) = _edge_images(p.orientation, A)
        nxt: dict[frozenset, Value] = {}
        zero = ring.zero
        for k, v in coeffs.items():
            if e in k:
                c0, c1 = o0, o1
            else:
                c0, c1 = z0, z1
            base = k - {e}
            for key, c in ((base, c0), (base | {e}, c1)):
                if c:
                    nxt[key] = nxt.get(key, zero) + v * c
        coeffs = {k: v for k, v in nxt.items() if not ring.is_zero(v)}
        if not p.is_gate:
            det_total = det_total * A.det
    scalar: Value = 1
    if not p.is_gate and det_total != 1:
        if ring.is_field:
            coeffs = {k: v / det_total for k, v in coeffs.items()}
        else:
            try:
                coeffs = {k: ring.exact_div(v, det_total) for k, v in coeffs.items()}
            except InexactDivision:
                if ring.name != "integer":
                    raise
                scalar = Fraction(1, det_total)
    return Predicate(p.orientation, p.edges, coeffs, ring), scalar


def apply_basis_exact(p: Predicate, bases: Mapping[int, BasisChange]) -> Predicate:
    """apply_basis with the scalar folded in (promoting ZZ to QQ if needed)."""
    q, s = apply_basis(p, bases)
    return q if s == 1 else scale(q.with_ring(QQ), Fraction(s))


# named predicates

def xor21(in1: int, in2: int, out: int) -> Predicate:
    """Gate |x1 x2 (x1 xor x2)> on (in1, in2, out)."""
    return Predicate.from_bits(GATE, (in1, in2, out), {"000": 1, "011": 1, "101": 1, "110": 1})


def and21(in1: int, in2: int, out: int) -> Predicate:
    return Predicate.from_bits(GATE, (in1, in2, out), {"000": 1, "010": 1, "100": 1, "111": 1})


def nae3(edges=(1, 2, 3), orientation=GATE) -> Predicate:
    terms = {b: 1 for b in ("001", "010", "011", "100", "101", "110")}
    return Predicate.from_bits(orientation, edges, terms)


def ae2(edges=(1, 2), orientation=COGATE) -> Predicate:
    return Predicate.from_bits(orientation, edges, {"00": 1, "11": 1})


def one1(edge=1, orientation=COGATE) -> Predicate:
    return Predicate(orientation, (edge,), {frozenset([edge]): 1})


def zero1(edge=1, orientation=COGATE) -> Predicate:
    return Predicate(orientation, (edge,), {frozenset(): 1})


def all_assignments(edges) -> Iterable[frozenset]:
    edges = list(edges)
    for bits in product((0, 1), repeat=len(edges)):
        yield frozenset(e for e, b in zip(edges, bits) if b)


# text format

def format_predicate(p: Predicate, name: str | None = None) -> str:
    head = f"{p.orientation.value}; edges=[{', '.join(map(str, p.edges))}]"
    lines = [head]
    for k, v in p.items():
        lines.append(f"term {p.bits(k) or '-'} {p.ring.format(v)}")
    return "\n".join(lines)


def parse_predicate(text: str, ring: Ring = ZZ) -> Predicate:
    """Parse the predicate text format.

    The header ``gate; edges=[1, 2]`` may carry terms inline separated by
    ``;`` or on following ``term <bits> <coeff>`` lines.
    """
    chunks = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            chunks.extend(c.strip() for c in line.split(";") if c.strip())
    if not chunks:
        raise ParseError("empty predicate")
    orient = chunks[0].lower()
    if orient not in ("gate", "cogate"):
        raise ParseError(f"unknown orientation {chunks[0]!r}")
    edges = None
    terms: dict[str, Value] = {}
    for c in chunks[1:]:
        if c.startswith("edges"):
            inside = c.split("=", 1)[1].strip().strip("[]")
            edges = [int(x) for x in inside.replace(",", " ").split()]
        elif c.startswith("term"):
            parts = c.split(None, 2)
            if len(parts) != 3:
                raise ParseError(f"bad term line {c!r}")
            bits = "" if parts[1] == "-" else parts[1]
            v = ring.parse(parts[2])
            terms[bits] = terms[bits] + v if bits in terms else v
        else:
            raise ParseError(f"unexpected {c!r}")
    if edges is None:
        raise ParseError("missing edges=[...]")
    return Predicate.from_bits(Orientation(orient), edges, terms, ring)
