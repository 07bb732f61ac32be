"""Labelled skew-symmetric matrices, Pfaffians and subPfaffian tensors."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .coefficients import ZZ, Poly, Ring, Value, common_ring
from .errors import LabelError, ParseError
from .tensor import COGATE, GATE, Predicate


@dataclass(frozen=True, eq=False)
class SkewMatrix:
    """Skew-symmetric matrix whose rows and columns are named by edge labels.

    ``entries`` holds the strictly upper triangle keyed by label pairs
    ``(a, b)`` with ``a < b``.  Pairs given the other way round are stored
    negated; zeros are dropped.
    """

    labels: tuple[int, ...]
    entries: Mapping[tuple[int, int], Value] = field(default_factory=dict)
    ring: Ring | None = None

    def __post_init__(self):
        labels = tuple(sorted(int(x) for x in self.labels))
        if len(set(labels)) != len(labels):
            raise LabelError(f"duplicate labels {self.labels}")
        ring = self.ring or common_ring(self.entries.values())
        lset = set(labels)
        clean: dict[tuple[int, int], Value] = {}
        for (a, b), v in self.entries.items():
            if a == b:
                if not ring.is_zero(ring.coerce(v)):
                    raise ValueError("nonzero diagonal entry")
                continue
            if a not in lset or b not in lset:
                raise LabelError(f"entry ({a},{b}) outside labels {labels}")
            v = ring.coerce(v)
            if a > b:
                a, b, v = b, a, -v
            v = clean[(a, b)] + v if (a, b) in clean else v
            clean[(a, b)] = v
        clean = {k: v for k, v in clean.items() if not ring.is_zero(v)}
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "ring", ring)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Value]], labels: Iterable[int] | None = None, ring: Ring | None = None):
        n = len(rows)
        labels = list(labels) if labels is not None else list(range(1, n + 1))
        ents = {}
        for i in range(n):
            if rows[i][i]:
                raise ValueError("nonzero diagonal entry")
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError("matrix is not skew-symmetric")
                ents[(labels[i], labels[j])] = rows[i][j]
        return cls(labels, ents, ring)

    @classmethod
    def zero(cls, labels: Iterable[int], ring: Ring = ZZ):
        return cls(tuple(labels), {}, ring)

    @property
    def n(self) -> int:
        return len(self.labels)

    def get(self, a: int, b: int) -> Value:
        if a < b:
            return self.entries.get((a, b), self.ring.zero)
        if a > b:
            v = self.entries.get((b, a))
            return -v if v is not None else self.ring.zero
        return self.ring.zero

    def dense(self) -> list[list[Value]]:
        return [[self.get(a, b) for b in self.labels] for a in self.labels]

    def restrict(self, subset: Iterable[int]) -> "SkewMatrix":
        s = set(subset)
        if not s <= set(self.labels):
            raise LabelError(f"labels {sorted(s - set(self.labels))} not in matrix")
        return SkewMatrix(tuple(s), {k: v for k, v in self.entries.items() if k[0] in s and k[1] in s}, self.ring)

    def with_ring(self, ring: Ring) -> "SkewMatrix":
        return SkewMatrix(self.labels, {k: ring.coerce(v) for k, v in self.entries.items()}, ring)

    def scale(self, c: Value) -> "SkewMatrix":
        ring = common_ring([self.ring.zero, c])
        return SkewMatrix(self.labels, {k: v * c for k, v in self.entries.items()}, ring)

    def relabel(self, mapping: Mapping[int, int]) -> "SkewMatrix":
        """Rename labels, keeping each entry as a value of the skew function.

        The Pfaffian of a principal submatrix changes by the sign of the
        induced reordering; see :func:`transport` for a sign-corrected move.
        """
        return SkewMatrix(
            tuple(mapping[a] for a in self.labels),
            {(mapping[a], mapping[b]): v for (a, b), v in self.entries.items()},
            self.ring,
        )

    def __add__(self, other: "SkewMatrix") -> "SkewMatrix":
        return add(self, other)

    def __eq__(self, other):
        if not isinstance(other, SkewMatrix):
            return NotImplemented
        if self.labels != other.labels or self.entries.keys() != other.entries.keys():
            return False
        ring = self.ring if not self.ring.exact else other.ring
        return all(ring.eq(v, other.entries[k]) for k, v in self.entries.items())

    def __hash__(self):
        return hash((self.labels, frozenset(self.entries)))

    def __repr__(self):
        body = ", ".join(f"{a},{b}:{self.ring.format(v)}" for (a, b), v in sorted(self.entries.items()))
        return f"SkewMatrix(labels={list(self.labels)}, {{{body}}})"


def add(m1: SkewMatrix, m2: SkewMatrix) -> SkewMatrix:
    if m1.labels != m2.labels:
        raise LabelError(f"label sets differ: {m1.labels} vs {m2.labels}")
    ring = common_ring([m1.ring.zero, m2.ring.zero])
    ents = dict(m1.entries)
    for k, v in m2.entries.items():
        ents[k] = ents[k] + v if k in ents else v
    return SkewMatrix(m1.labels, ents, ring)


def pf_oracle(M: SkewMatrix) -> Value:
    """Pfaffian by expansion along the first row (exponential time)."""
    ring = M.ring
    n = M.n
    if n % 2:
        return ring.zero
    A = M.dense()

    @lru_cache(maxsize=None)
    def rec(idx: tuple[int, ...]):
        if not idx:
            return ring.one
        i = idx[0]
        total = ring.zero
        for t in range(1, len(idx)):
            a = A[i][idx[t]]
            if ring.is_zero(a):
                continue
            rest = idx[1:t] + idx[t + 1:]
            term = a * rec(rest)
            total = total + term if t % 2 else total - term
        return total

    return rec(tuple(range(n)))


def _perm_sign(order: list[int]) -> int:
    seen = [False] * len(order)
    sign = 1
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def pf(M: SkewMatrix) -> Value:
    """Pfaffian; polynomial matrices go through a Kronecker substitution."""
    if M.ring.name == "poly" and M.entries:
        return _pf_kronecker(M)
    return pf_eliminate(M)


def _pf_kronecker(M: SkewMatrix) -> Poly:
    """Evaluate at x = B, y = B^(dx+1), take an integer Pfaffian, read off digits.

    Pf is a polynomial in the entries, so this commutes with evaluation.
    Degrees are bounded by half the sum of per-row maximum degrees, and the
    coefficients by sqrt(prod of row 1-norms) (the squared hafnian of a
    nonnegative matrix is at most its permanent), so balanced base-B digits
    recover every coefficient.
    """
    n = M.n
    idx = {a: i for i, a in enumerate(M.labels)}
    degx, degy, norm = [0] * n, [0] * n, [0] * n
    for (a, b), v in M.entries.items():
        terms = v.terms
        dx = max(i for i, _ in terms)
        dy = max(j for _, j in terms)
        l1 = sum(abs(c) for c in terms.values())
        for t in (idx[a], idx[b]):
            degx[t] = max(degx[t], dx)
            degy[t] = max(degy[t], dy)
            norm[t] += l1
    DX, DY = sum(degx) // 2, sum(degy) // 2
    bound_sq = 1
    for v in norm:
        bound_sq *= max(v, 1)
    bits = (math.isqrt(bound_sq) + 1).bit_length() + 2
    at = _kronecker_point(bits, DX + 1)
    value = _pf_indexed(n, {(idx[a], idx[b]): at(v) for (a, b), v in M.entries.items()}, ZZ)
    return _kronecker_digits(value, bits, DX + 1, DY + 1)


def _kronecker_point(bits: int, stride: int):
    """The map p -> p(B, B^stride) with B = 2^bits."""
    def at(v: Poly) -> int:
        return sum(c << (bits * (i + j * stride)) for (i, j), c in v.terms.items())
    return at


def _kronecker_digits(value: int, bits: int, stride: int, rows: int) -> Poly:
    """Read a polynomial back from its value at (B, B^stride), balanced digits."""
    B = 1 << bits
    half = B >> 1
    out = {}
    for k in range(rows * stride):
        d = value & (B - 1)
        if d >= half:
            d -= B
        value = (value - d) >> bits
        if d:
            out[(k % stride, k // stride)] = d
    if value:
        raise ArithmeticError("Kronecker decoding overflow")
    return Poly(out)


def pf_eliminate(M: SkewMatrix) -> Value:
    """Pfaffian by sparse fraction-free skew elimination.

    Each step picks a pivot pair (r, s) with M[r][s] != 0 and replaces the
    remaining entries by

        M'[i][j] = (p*M[i][j] + M[i][r]*M[s][j] - M[i][s]*M[r][j]) / P

    where p = M[r][s] and P is the previous pivot.  Every intermediate entry
    is the Pfaffian of a principal submatrix, so the divisions are exact and
    the last pivot is the Pfaffian in pivot order.

    Entries away from the pivot rows only get multiplied by p / P, so they
    are stored with the step at which they were last written and brought up
    to date when read: after pivots P_t, ..., P_T the factor is P_T / P_t.
    """
    idx = {a: i for i, a in enumerate(M.labels)}
    return _pf_indexed(M.n, {(idx[a], idx[b]): v for (a, b), v in M.entries.items()}, M.ring)


def _pf_indexed(n: int, entries: Mapping[tuple[int, int], Value], ring: Ring) -> Value:
    """pf_eliminate on rows 0..n-1 given the upper-triangle entries."""
    if n % 2:
        return ring.zero
    if n == 0:
        return ring.one
    rows: list[dict[int, tuple[Value, int]]] = [dict() for _ in range(n)]
    for (i, j), v in entries.items():
        rows[i][j] = (v, 0)
        rows[j][i] = (-v, 0)
    active = set(range(n))
    order: list[int] = []
    # a row with a single entry forces its pairing: peel such pairs off first
    forced: Value = ring.one
    leaves = [i for i in range(n) if len(rows[i]) == 1]
    while leaves:
        r = leaves.pop()
        if r not in active or len(rows[r]) != 1:
            continue
        ((s, (v, _)),) = rows[r].items()
        forced = forced * v
        order += [r, s]
        active.discard(r)
        active.discard(s)
        for j in rows[s]:
            if j != r:
                del rows[j][s]
                if len(rows[j]) == 1:
                    leaves.append(j)
                elif not rows[j]:
                    return ring.zero
        rows[r] = {}
        rows[s] = {}
    if not active:
        return forced if _perm_sign(order) > 0 else -forced
    # lazy min-heap of (row length, row); stale items are skipped on pop
    heap = [(len(rows[i]), i) for i in active]
    heapq.heapify(heap)
    piv = [ring.one]
    if ring.name == "integer":
        # exact by construction, so floor division is the same and cheaper
        def div(a, b):
            return a // b
    elif ring.exact:
        div = ring.exact_div
    else:
        def div(a, b):
            return a / b
    is_zero = ring.is_zero
    zero = ring.zero

    def size(i):
        return len(rows[i])

    while True:
        T = len(piv) - 1
        PT = piv[T]

        def cur(vt):
            v, t = vt
            return v if t == T else div(v * PT, piv[t])

        while True:
            d, r = heapq.heappop(heap)
            if r in active and d == len(rows[r]):
                break
        if not rows[r]:
            return zero
        s = min(rows[r], key=size)
        p = cur(rows[r][s])
        order += [r, s]
        active.discard(r)
        active.discard(s)
        if not active:
            break
        Nr = {j: cur(vt) for j, vt in rows[r].items() if j != s}
        Ns = {j: cur(vt) for j, vt in rows[s].items() if j != r}
        for j in rows[r]:
            rows[j].pop(r, None)
        for j in rows[s]:
            rows[j].pop(s, None)
        rows[r] = {}
        rows[s] = {}
        touched = sorted(set(Nr) | set(Ns))
        t_new = T + 1
        for a_i, i in enumerate(touched):
            ri, si = Nr.get(i, zero), Ns.get(i, zero)
            row_i = rows[i]
            for j in touched[a_i + 1:]:
                rj, sj = Nr.get(j, zero), Ns.get(j, zero)
                old = row_i.get(j)
                v = si * rj - ri * sj
                if old is not None:
                    v = v + p * cur(old)
                v = div(v, PT)
                if is_zero(v):
                    if old is not None:
                        del row_i[j]
                        del rows[j][i]
                else:
                    row_i[j] = (v, t_new)
                    rows[j][i] = (-v, t_new)
        for i in touched:
            heapq.heappush(heap, (len(rows[i]), i))
        piv.append(p)
    p = forced * p
    return p if _perm_sign(order) > 0 else -p


def det(rows: Sequence[Sequence[Value]], ring: Ring) -> Value:
    """Determinant by Bareiss fraction-free elimination.

    Polynomial matrices are evaluated at a Kronecker point first, with the
    coefficients bounded by the product of the row 1-norms.
    """
    if ring.name == "poly" and rows:
        rows = [[ring.coerce(v) for v in r] for r in rows]
        degx = [max((i for v in r for i, _ in v.terms), default=0) for r in rows]
        degy = [max((j for v in r for _, j in v.terms), default=0) for r in rows]
        bound = 1
        for r in rows:
            bound *= max(sum(abs(c) for v in r for c in v.terms.values()), 1)
        bits = bound.bit_length() + 2
        stride = sum(degx) + 1
        at = _kronecker_point(bits, stride)
        value = det([[at(v) for v in r] for r in rows], ZZ)
        return _kronecker_digits(value, bits, stride, sum(degy) + 1)
    A = [list(r) for r in rows]
    n = len(A)
    if n == 0:
        return ring.one
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if ring.is_zero(A[k][k]):
            for i in range(k + 1, n):
                if not ring.is_zero(A[i][k]):
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return ring.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = A[k][k] * A[i][j] - A[i][k] * A[k][j]
                A[i][j] = ring.exact_div(v, prev) if ring.exact else v / prev
        prev = A[k][k]
    d = A[n - 1][n - 1]
    return d if sign > 0 else -d


def _pf_table(M: SkewMatrix) -> dict[int, Value]:
    """Pfaffians of all principal submatrices, keyed by bitmask over M.labels."""
    ring = M.ring
    n = M.n
    A = M.dense()
    table: dict[int, Value] = {0: ring.one}

    def rec(mask: int) -> Value:
        if mask in table:
            return table[mask]
        bits = [t for t in range(n) if mask >> t & 1]
        i = bits[0]
        total = ring.zero
        for pos in range(1, len(bits)):
            j = bits[pos]
            a = A[i][j]
            if ring.is_zero(a):
                continue
            sub = rec(mask & ~(1 << i) & ~(1 << j))
            if ring.is_zero(sub):
                continue
            total = total + a * sub if pos % 2 else total - a * sub
        table[mask] = total
        return total

    for mask in range(1 << n):
        if bin(mask).count("1") % 2 == 0:
            rec(mask)
    return table


def pf_sub(M: SkewMatrix, subset: Iterable[int]) -> Value:
    """Pfaffian of the principal submatrix on ``subset`` (ascending label order)."""
    return pf(M.restrict(subset))


def sub_pf_gate(Xi: SkewMatrix) -> Predicate:
    """sPf: the gate whose coefficient on I is Pf of Xi restricted to I."""
    labels = Xi.labels
    table = _pf_table(Xi)
    coeffs = {}
    for mask, v in table.items():
        if not Xi.ring.is_zero(v):
            coeffs[frozenset(labels[t] for t in range(len(labels)) if mask >> t & 1)] = v
    return Predicate(GATE, labels, coeffs, Xi.ring)


def sub_pf_cogate(Theta: SkewMatrix) -> Predicate:
    """sPf-dual: the cogate whose coefficient on J is Pf of Theta on the complement of J."""
    labels = Theta.labels
    full = (1 << len(labels)) - 1
    table = _pf_table(Theta)
    coeffs = {}
    for mask, v in table.items():
        if not Theta.ring.is_zero(v):
            comp = full & ~mask
            coeffs[frozenset(labels[t] for t in range(len(labels)) if comp >> t & 1)] = v
    return Predicate(COGATE, labels, coeffs, Theta.ring)


def checkerboard(Theta: SkewMatrix, position: Mapping[int, int] | None = None) -> SkewMatrix:
    """Multiply entry (i, j) by (-1)^(i+j+1), with i, j the 1-based positions.

    ``position`` maps labels to positions in the global edge order; by
    default a label is its own position.
    """
    pos = position or {a: a for a in Theta.labels}
    ents = {}
    for (a, b), v in Theta.entries.items():
        ents[(a, b)] = -v if (pos[a] + pos[b]) % 2 == 0 else v
    return SkewMatrix(Theta.labels, ents, Theta.ring)


def direct_sum(parts: Sequence[SkewMatrix]) -> SkewMatrix:
    labels: list[int] = []
    ents: dict[tuple[int, int], Value] = {}
    for m in parts:
        clash = set(labels) & set(m.labels)
        if clash:
            raise LabelError(f"label collision {sorted(clash)}")
        labels.extend(m.labels)
        ents.update(m.entries)
    ring = common_ring([m.ring.zero for m in parts]) if parts else ZZ
    return SkewMatrix(tuple(labels), ents, ring)


def dihedral_signs(labels: Sequence[int], mapping: Mapping[int, int]):
    """Find signs making a relabelling Pfaffian-compatible.

    Returns ``(d, kappa)`` with ``d[a]`` in {0, 1} such that for every pair
    a < b the new order is inverted exactly when d[a] + d[b] + kappa is odd,
    or None when no such signs exist.  Cyclic shifts and reversals always
    admit such signs.
    """
    labels = list(labels)
    n = len(labels)
    if n <= 1:
        return {a: 0 for a in labels}, 0
    inv = {}
    for i in range(n):
        for j in range(i + 1, n):
            inv[(labels[i], labels[j])] = 1 if mapping[labels[i]] > mapping[labels[j]] else 0
    first = labels[0]
    for kappa in (0, 1):
        d = {first: 0}
        for b in labels[1:]:
            d[b] = (inv[(first, b)] + kappa) % 2
        if all((d[a] + d[b] + kappa) % 2 == v for (a, b), v in inv.items()):
            return d, kappa
    return None


def transport(M: SkewMatrix, mapping: Mapping[int, int]) -> SkewMatrix | None:
    """Relabel ``M`` so that every principal sub-Pfaffian keeps its value.

    After transport, Pf of the new matrix on mapping(S) in ascending new-label
    order equals Pf of M on S in ascending old-label order, for every S.
    Returns None when the induced reordering admits no diagonal sign fix.
    """
    found = dihedral_signs(M.labels, mapping)
    if found is None:
        return None
    d, kappa = found
    ents = {}
    for (a, b), v in M.entries.items():
        flip = (d[a] + d[b] + kappa) % 2
        ents[(mapping[a], mapping[b])] = -v if flip else v
    return SkewMatrix(tuple(mapping[a] for a in M.labels), ents, M.ring)


# text format

def format_matrix(M: SkewMatrix) -> str:
    lines = [f"{M.n}; labels=[{', '.join(map(str, M.labels))}]"]
    for (a, b), v in sorted(M.entries.items()):
        lines.append(f"entry {a} {b} {M.ring.format(v)}")
    return "\n".join(lines)


def parse_matrix(text: str, ring: Ring = ZZ) -> SkewMatrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty matrix")
    head = lines[0]
    try:
        n_text, lab_text = head.split(";", 1)
        n = int(n_text)
        inside = lab_text.split("=", 1)[1].strip().strip("[]")
        labels = [int(x) for x in inside.replace(",", " ").split()]
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad matrix header {head!r}") from exc
    if len(labels) != n:
        raise ParseError(f"header says {n} labels, got {len(labels)}")
    ents = {}
    for ln in lines[1:]:
        parts = ln.split(None, 3)
        if len(parts) != 4 or parts[0] != "entry":
            raise ParseError(f"bad entry line {ln!r}")
        ents[(int(parts[1]), int(parts[2]))] = ring.parse(parts[3])
    return SkewMatrix(labels, ents, ring)
