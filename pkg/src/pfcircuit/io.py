"""Text format for circuits.

    ring integer
    gate g XOR21                   # builtins: AE2 ONE1 ZERO1 NAE3 XOR21
    cogate c0 ONE1
    cogate c1 TERMS 2 00:1 11:1    # arity, then bits:coeff terms
    gate h SPF 2                   # subPfaffian of the following entries
      entry 1 2 -1
    gate k TERMS 2                 # terms may also follow on their own lines
      term 01 1
      term 10 1
    edge g.1 c0.1 basis hadamard pos 1

Edge ids count edge lines from 0.  ``pos`` fixes a user edge order and
must then be given on every edge.  Coefficients use the ring's text form;
a cogate SPF block gives the dual subPfaffian.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .circuit import Circuit
from .coefficients import RINGS, ZZ, Ring, ring_of
from .errors import ParseError
from .pfaffian import SkewMatrix, sub_pf_cogate, sub_pf_gate
from .tensor import GATE, BasisChange, Orientation, Predicate, ae2, nae3, one1, xor21, zero1

BUILTINS = {
    "AE2": lambda o: ae2(orientation=o),
    "ONE1": lambda o: one1(orientation=o),
    "ZERO1": lambda o: zero1(orientation=o),
    "NAE3": lambda o: nae3(orientation=o),
    "XOR21": lambda o: xor21(1, 2, 3) if o is GATE else _flip(xor21(1, 2, 3)),
}


def _flip(p: Predicate) -> Predicate:
    return Predicate(p.orientation.dual, p.edges, p.coeffs, p.ring)


@dataclass
class _Block:
    orientation: Orientation
    name: str
    kind: str
    args: list[str]
    lines: list[str] = field(default_factory=list)
    lineno: int = 0


@dataclass
class CircuitFile:
    circuit: Circuit
    order: dict[int, int] | None


def _node(block: _Block, ring: Ring) -> Predicate:
    kind = block.kind.upper()
    where = f"line {block.lineno}"
    if kind in BUILTINS:
        if block.args or block.lines:
            raise ParseError(f"{where}: builtin {kind} takes no arguments")
        return BUILTINS[kind](block.orientation).with_ring(ring)
    if kind == "SPF":
        if len(block.args) != 1:
            raise ParseError(f"{where}: SPF needs its size")
        n = int(block.args[0])
        ents = {}
        for ln in block.lines:
            parts = ln.split(None, 3)
            if len(parts) != 4 or parts[0] != "entry":
                raise ParseError(f"{where}: bad entry line {ln!r}")
            ents[(int(parts[1]), int(parts[2]))] = ring.parse(parts[3])
        M = SkewMatrix(tuple(range(1, n + 1)), ents, ring)
        return sub_pf_gate(M) if block.orientation is GATE else sub_pf_cogate(M)
    if kind == "TERMS":
        if not block.args:
            raise ParseError(f"{where}: TERMS needs its arity")
        arity = int(block.args[0])
        raw = [tuple(a.split(":", 1)) for a in block.args[1:]]
        for ln in block.lines:
            parts = ln.split(None, 2)
            if len(parts) != 3 or parts[0] != "term":
                raise ParseError(f"{where}: bad term line {ln!r}")
            raw.append((parts[1], parts[2]))
        terms = {}
        for bits, coeff in raw:
            bits = "" if bits == "-" else bits
            if len(bits) != arity or set(bits) - {"0", "1"}:
                raise ParseError(f"{where}: term {bits!r} does not have arity {arity}")
            v = ring.parse(coeff)
            terms[bits] = terms[bits] + v if bits in terms else v
        return Predicate.from_bits(block.orientation, range(1, arity + 1), terms, ring)
    raise ParseError(f"{where}: unknown node kind {block.kind!r}")


def _slot(text: str, lineno: int) -> tuple[str, int]:
    name, dot, slot = text.rpartition(".")
    if not dot or not name:
        raise ParseError(f"line {lineno}: expected <node>.<slot>, got {text!r}")
    try:
        return name, int(slot)
    except ValueError as exc:
        raise ParseError(f"line {lineno}: bad slot in {text!r}") from exc


def parse_circuit(text: str) -> CircuitFile:
    ring: Ring = ZZ
    blocks: list[_Block] = []
    edge_lines: list[tuple[int, list[str]]] = []
    current: _Block | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        indented = body[0].isspace()
        words = body.split()
        if indented:
            if current is None:
                raise ParseError(f"line {lineno}: indented line outside a node block")
            current.lines.append(body.strip())
            continue
        current = None
        head = words[0].lower()
        if head == "ring":
            if len(words) != 2 or words[1] not in RINGS:
                raise ParseError(f"line {lineno}: ring must be one of {sorted(RINGS)}")
            ring = RINGS[words[1]]
        elif head in ("gate", "cogate"):
            if len(words) < 3:
                raise ParseError(f"line {lineno}: expected '{head} <name> <kind> ...'")
            current = _Block(Orientation(head), words[1], words[2], words[3:], lineno=lineno)
            blocks.append(current)
        elif head == "edge":
            edge_lines.append((lineno, words[1:]))
        else:
            raise ParseError(f"line {lineno}: unexpected {words[0]!r}")
    c = Circuit()
    for b in blocks:
        c.add_node(b.name, _node(b, ring))
    order: dict[int, int] = {}
    for lineno, words in edge_lines:
        if len(words) < 2:
            raise ParseError(f"line {lineno}: edge needs two endpoints")
        (a, sa), (b, sb) = _slot(words[0], lineno), _slot(words[1], lineno)
        for name in (a, b):
            if name not in c.nodes:
                raise ParseError(f"line {lineno}: unknown node {name!r}")
        if not c.nodes[a].is_gate:
            (a, sa), (b, sb) = (b, sb), (a, sa)
        basis = None
        pos = None
        rest = words[2:]
        while rest:
            key = rest[0]
            if len(rest) < 2:
                raise ParseError(f"line {lineno}: {key} needs a value")
            if key == "basis":
                basis = BasisChange.parse(rest[1], ring)
            elif key == "pos":
                pos = int(rest[1])
            else:
                raise ParseError(f"line {lineno}: unexpected {key!r}")
            rest = rest[2:]
        eid = c.connect(a, sa, b, sb, basis=basis, pos=pos)
        if pos is not None:
            order[eid] = pos
    if order and len(order) != len(c.edges):
        raise ParseError("pos must be given on every edge or on none")
    return CircuitFile(c, order or None)


def read_circuit(path: str | Path) -> CircuitFile:
    return parse_circuit(Path(path).read_text(encoding="utf-8"))


def format_circuit(c: Circuit) -> str:
    """Every node as TERMS, so the output reads back to an equal circuit."""
    ring = c.ring
    lines = [f"ring {ring.name}"]
    for node in c.nodes.values():
        p = node.predicate
        if p.edges != tuple(range(1, p.arity + 1)):
            raise ValueError(f"node {node.name!r} slots must be 1..arity to be written")
        lines.append(f"{p.orientation.value} {node.name} TERMS {p.arity}")
        for k, v in p.items():
            lines.append(f"  term {p.bits(k) or '-'} {ring.format(ring.coerce(v))}")
    for e in c.edges:
        line = f"edge {e.gate}.{e.gate_slot} {e.cogate}.{e.cogate_slot}"
        basis = c.edge_basis(e)
        if not basis.is_identity:
            line += " basis " + ",".join(ring_of(v).format(v) for v in basis.entries)
        if e.pos is not None:
            line += f" pos {e.pos}"
        lines.append(line)
    return "\n".join(lines) + "\n"
