"""Fitting predicates as scalar multiples of subPfaffian tensors.

Every fit here is one instance of a single chart construction.  Let P be a
support set of minimal weight k.  Append k star labels s_1..s_k after the
real edges and fix xi(p_j, s_j) = 1, all other entries touching P zero.  The
gate fragment

    F(S) = alpha * Pf(Xi restricted to S + stars)

contracted against the cogate <1...1| on the stars then has exactly one free
parameter per coefficient of weight k (sets (P - p_j) + a) and weight k+2
(sets P + {a, b}); every other coefficient is implied and is checked.

k = 0 is the plain even fit, k = 1 the parity switch, k = 2 the
homogenizer with theta = 0.  Larger k is needed for tensors such as |111>,
whose support has no set of weight below three.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .coefficients import QQ, Ring, Value
from .errors import (
    ConsistencyViolated,
    FitError,
    FitInexactDivision,
    InexactDivision,
    MixedParity,
    NoSingletonPivot,
    NotEven,
    NotOdd,
    NotPfaffianInGivenBasis,
    OddSupport,
    TemplateUnsolvable,
    ZeroAtOrigin,
    ZeroPredicate,
)
from .pfaffian import SkewMatrix, _pf_table, pf, sub_pf_cogate, sub_pf_gate
from .tensor import (
    COGATE,
    GATE,
    BasisChange,
    Parity,
    Predicate,
    apply_basis,
    contract,
    scale,
    support_parity,
)

PARITY_SWITCH = "parity_switch"
HOMOGENIZER = "homogenizer"
STAR = "star"


@dataclass(frozen=True)
class Gadget:
    """Extra edges ``stars`` joining the realized node to ``partner``."""

    kind: str
    stars: tuple[int, ...]
    partner: Predicate


@dataclass(frozen=True)
class Realization:
    """``scalar * (simple tensor of matrix, contracted against the gadget)``.

    For gates the simple tensor is sPf(matrix); for cogates it is
    sPf-dual(matrix).  ``edges`` are the labels of the realized predicate;
    the matrix carries these plus any gadget star labels.
    """

    orientation: object
    edges: tuple[int, ...]
    scalar: Value
    matrix: SkewMatrix
    gadget: Gadget | None = None

    @property
    def stars(self) -> tuple[int, ...]:
        return self.gadget.stars if self.gadget else ()

    def simple_tensor(self) -> Predicate:
        if self.orientation is GATE:
            return sub_pf_gate(self.matrix)
        return sub_pf_cogate(self.matrix)

    def fragment(self) -> Predicate:
        """The tensor this realization stands for, by brute-force contraction."""
        t = self.simple_tensor()
        if self.gadget is not None:
            g, c = (t, self.gadget.partner) if self.orientation is GATE else (self.gadget.partner, t)
            t = contract(g, c)
            if not isinstance(t, Predicate):
                t = Predicate(self.orientation, (), {frozenset(): t})
        return scale(t, self.scalar)


def _ones_partner(orientation, stars: Sequence[int], ring: Ring) -> Predicate:
    """Partner on the star edges: <1..1| for a gate, |0..0> for a cogate."""
    if orientation is GATE:
        return Predicate(COGATE, stars, {frozenset(stars): 1}, ring)
    return Predicate(GATE, stars, {frozenset(): 1}, ring)


def _kind(k: int) -> str:
    return {1: PARITY_SWITCH, 2: HOMOGENIZER}.get(k, STAR)


def _as_gate_map(p: Predicate) -> dict[frozenset, Value]:
    """Coefficients of the gate whose fit also fits ``p``.

    Cogates are fitted through the complement map J -> E - J, since the dual
    subPfaffian tensor indexes Pfaffians by complements.
    """
    if p.is_gate:
        return dict(p.coeffs)
    full = frozenset(p.edges)
    return {full - k: v for k, v in p.coeffs.items()}


def _divide(ring: Ring, a: Value, b: Value):
    """a / b in ``ring``; returns (value, promoted) where promoted means QQ was needed."""
    if ring.is_field:
        return (Fraction(a) / b if ring.name == "rational" else a / b), False
    try:
        return ring.exact_div(a, b), False
    except InexactDivision:
        if ring.name == "integer":
            return Fraction(a, b), True
        raise FitInexactDivision(f"{ring.format(a)} / {ring.format(b)} is not exact in {ring.name}")


def _template_sign(fixed: dict, labels: Sequence[int], pair: tuple[int, int] | None) -> int:
    """Sign of Pf on ``labels`` with the fixed ones plus a unit entry at ``pair``."""
    ents = {k: 1 for k in fixed if k[0] in labels and k[1] in labels}
    if pair is not None:
        ents[pair] = 1
    v = pf(SkewMatrix(tuple(labels), ents))
    if v not in (1, -1):
        raise TemplateUnsolvable(f"degenerate template on {sorted(labels)}")
    return v


def _fit_chart(p: Predicate, P: Sequence[int]) -> Realization:
    """Fit ``p`` with the chart centred at the support set ``P``."""
    g = _as_gate_map(p)
    ring = p.ring
    edges = p.edges
    P = tuple(sorted(P))
    k = len(P)
    top = max(edges) if edges else 0
    stars = tuple(range(top + 1, top + 1 + k))
    labels = edges + stars
    rest = [e for e in edges if e not in P]
    fixed = {(P[j], stars[j]): 1 for j in range(k)}
    zero = ring.zero

    base_set = sorted(set(P) | set(stars))
    alpha = g.get(frozenset(P), zero) * _template_sign(fixed, base_set, None)
    if ring.is_zero(alpha):
        raise TemplateUnsolvable("chart centre has zero coefficient", witness=frozenset(P))

    promoted = False
    ents: dict[tuple[int, int], Value] = dict(fixed)
    for a in rest:
        for j in range(k):
            S = (set(P) - {P[j]}) | {a}
            val = g.get(frozenset(S), zero)
            if ring.is_zero(val):
                continue
            sign = _template_sign(fixed, sorted(S | set(stars)), (a, stars[j]))
            v, pr = _divide(ring, val, alpha * sign)
            promoted |= pr
            ents[(a, stars[j])] = v
    for a, b in combinations(rest, 2):
        S = set(P) | {a, b}
        val = g.get(frozenset(S), zero)
        if ring.is_zero(val):
            continue
        sign = _template_sign(fixed, sorted(S | set(stars)), (a, b))
        v, pr = _divide(ring, val, alpha * sign)
        promoted |= pr
        ents[(a, b)] = v

    mring = QQ if promoted else ring
    Xi = SkewMatrix(labels, ents, mring)
    _verify(g, Xi, edges, stars, alpha, mring)
    gadget = None
    if k:
        gadget = Gadget(_kind(k), stars, _ones_partner(p.orientation, stars, mring))
    return Realization(p.orientation, edges, alpha, Xi, gadget)


def _verify(g, Xi: SkewMatrix, edges, stars, alpha, ring: Ring):
    """Check alpha * Pf(Xi on S + stars) == g(S) for every S, raising on the first miss."""
    table = _pf_table(Xi)
    pos = {a: t for t, a in enumerate(Xi.labels)}
    star_mask = sum(1 << pos[s] for s in stars)
    n = len(edges)
    for bits in range(1 << n):
        S = frozenset(edges[t] for t in range(n) if bits >> t & 1)
        if (len(S) + len(stars)) % 2:
            got = ring.zero
        else:
            mask = star_mask | sum(1 << pos[e] for e in S)
            got = alpha * table.get(mask, ring.zero)
        want = g.get(S, ring.zero)
        if not ring.eq(ring.coerce(got) if ring.exact else got, want):
            raise ConsistencyViolated(witness=S, expected=want, actual=got)


def _weight_order(p: Predicate, subsets):
    idx = {e: t for t, e in enumerate(p.edges)}
    return sorted(subsets, key=lambda s: (len(s), sorted(idx[e] for e in s)))


def _check_nonzero(p: Predicate):
    if not p.coeffs:
        raise ZeroPredicate("predicate is identically zero")


def fit_even_simple(p: Predicate) -> Realization:
    """alpha = coeff(empty), xi_ab = coeff({a,b}) / alpha, then verify."""
    _check_nonzero(p)
    par = _gate_parity(p)
    if par is Parity.MIXED:
        raise MixedParity("support has both parities")
    g = _as_gate_map(p)
    if par is Parity.ODD:
        raise OddSupport("support is odd; use the parity switch")
    if frozenset() not in g:
        raise ZeroAtOrigin("coefficient of the empty set is zero", witness=frozenset())
    return _fit_chart(p, ())


def _flip(par: Parity, n: int, is_gate: bool) -> Parity:
    """Parity of the complemented map used for cogates."""
    if is_gate or n % 2 == 0 or par in (Parity.MIXED, Parity.ZERO):
        return par
    return Parity.ODD if par is Parity.EVEN else Parity.EVEN


def _gate_parity(p: Predicate) -> Parity:
    return _flip(support_parity(p), p.arity, p.is_gate)


def fit_odd(p: Predicate) -> Realization:
    """Parity switch: pivot on the lowest-index singleton of the support."""
    _check_nonzero(p)
    par = _gate_parity(p)
    if par is Parity.MIXED:
        raise MixedParity("support has both parities")
    if par is not Parity.ODD:
        raise NotOdd("support is not odd")
    g = _as_gate_map(p)
    for e in p.edges:
        if frozenset([e]) in g:
            return _fit_chart(p, (e,))
    raise NoSingletonPivot("no weight-one term to pivot on")


def fit_homogeneous(p: Predicate) -> Realization:
    """Homogenizer: two extra edges to the partner <11| (theta = 0)."""
    _check_nonzero(p)
    par = _gate_parity(p)
    if par is Parity.MIXED:
        raise MixedParity("support has both parities")
    if par is not Parity.EVEN:
        raise NotEven("support is not even")
    g = _as_gate_map(p)
    if frozenset() in g:
        simple = _fit_chart(p, ())
        top = max(p.edges) if p.edges else 0
        stars = (top + 1, top + 2)
        Xi = SkewMatrix(simple.matrix.labels + stars, {**simple.matrix.entries, stars: 1}, simple.matrix.ring)
        gadget = Gadget(HOMOGENIZER, stars, _ones_partner(p.orientation, stars, Xi.ring))
        return Realization(p.orientation, p.edges, simple.scalar, Xi, gadget)
    pairs = [s for s in _weight_order(p, g) if len(s) == 2]
    if not pairs:
        raise TemplateUnsolvable("no weight-two term to centre the homogenizer on")
    return _fit_chart(p, tuple(pairs[0]))


def fit_chart(p: Predicate) -> Realization:
    """General fit centred on the first support set of minimal weight."""
    _check_nonzero(p)
    if _gate_parity(p) is Parity.MIXED:
        raise MixedParity("support has both parities")
    g = _as_gate_map(p)
    centre = _weight_order(p, g)[0]
    return _fit_chart(p, tuple(centre))


FITS = (fit_even_simple, fit_odd, fit_homogeneous, fit_chart)


_REALIZED: dict = {}
_REALIZED_MAX = 4096


def realize(p: Predicate, bases: Mapping[int, BasisChange] | None = None) -> Realization:
    """Apply the bases, then return the first successful fit.

    The basis-change determinant factor, when it cannot be divided out, is
    folded into the returned scalar.  Results over exact rings are cached,
    since circuits tend to repeat the same few local predicates.
    """
    key = None
    if p.ring.exact:
        key = (p.ring.name, p.orientation, p.edges, frozenset(p.coeffs.items()),
               tuple(sorted((bases or {}).items())))
        hit = _REALIZED.get(key)
        if hit is not None:
            return hit
    r = _realize(p, bases)
    if key is not None:
        if len(_REALIZED) >= _REALIZED_MAX:
            _REALIZED.clear()
        _REALIZED[key] = r
    return r


def _realize(p: Predicate, bases: Mapping[int, BasisChange] | None) -> Realization:
    if bases:
        q, s = apply_basis(p, bases)
    else:
        q, s = p, 1
    diagnostics: list[FitError] = []
    for fit in FITS:
        try:
            r = fit(q)
        except FitError as exc:
            diagnostics.append(exc)
            if isinstance(exc, (MixedParity, ZeroPredicate)):
                break
            continue
        if s != 1:
            r = Realization(r.orientation, r.edges, r.scalar * s, r.matrix, r.gadget)
        return r
    raise NotPfaffianInGivenBasis("no fit succeeded", diagnostics)


def realize_tensor(p: Predicate, bases: Mapping[int, BasisChange] | None = None) -> Predicate:
    """The exact basis-changed tensor that :func:`realize` targets."""
    if not bases:
        return p
    q, s = apply_basis(p, bases)
    return q if s == 1 else scale(q.with_ring(QQ), Fraction(s))


# arity-4 matchgates in operator form

def _operator_index(x1: int, x2: int, x3: int, x4: int) -> tuple[int, int]:
    """Row/column of the gate coefficient at bits x1..x4 in the 4x4 grid.

    Rows enumerate (x4, x3), columns (x1, x2), both as 00, 01, 10, 11.
    """
    return 2 * x4 + x3, 2 * x1 + x2


def matchgate_to_gate(b: Sequence[Sequence[Value]], edges=(1, 2, 3, 4)) -> Predicate:
    """The 4-edge gate whose coefficients are laid out as the grid ``b``."""
    coeffs = {}
    for bits in range(16):
        x = [(bits >> (3 - t)) & 1 for t in range(4)]
        r, c = _operator_index(*x)
        coeffs[frozenset(e for e, xb in zip(edges, x) if xb)] = b[r][c]
    return Predicate(GATE, edges, coeffs)


def check_matchgate_arity4(b: Sequence[Sequence[Value]]) -> bool:
    """True iff the odd-parity entries vanish and det B_even = det B_odd.

    B_even collects the entries of even total weight (rows/cols 00 and 11
    of each parity class), B_odd those of odd weight.
    """
    odd_positions = [(r, c) for r in range(4) for c in range(4) if (bin(r).count("1") + bin(c).count("1")) % 2]
    if any(b[r][c] for r, c in odd_positions):
        return False
    det_even = b[0][0] * b[3][3] - b[0][3] * b[3][0]
    det_odd = b[1][1] * b[2][2] - b[1][2] * b[2][1]
    return det_even == det_odd
