"""Tutte polynomials of lattice path matroids by counting weighted paths.

A basis of the matroid is a monotone path between the lower path P and the
upper path Q.  Its internal activity counts the N steps it shares with Q
and its external activity the E steps it shares with P, so weighting
those grid edges by x and y turns the monotone path count into t(M; x, y).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb

from ..coefficients import Poly
from ..errors import InvalidRegion, TooLarge
from .grid import GridRegion, ReweightableGrid, StepPolicy, Vertex, grid_edge

TUTTE_ORACLE_MAX = 20


def _points(path: str) -> list[Vertex]:
    x = y = 0
    pts = [(0, 0)]
    for s in path:
        if s == "E":
            x += 1
        else:
            y += 1
        pts.append((x, y))
    return pts


def _heights(path: str) -> tuple[list[int], list[int]]:
    """Lowest and highest y of the path on each column x."""
    pts = _points(path)
    m = pts[-1][0]
    lo = [min(y for x, y in pts if x == c) for c in range(m + 1)]
    hi = [max(y for x, y in pts if x == c) for c in range(m + 1)]
    return lo, hi


@dataclass(frozen=True)
class LatticePathMatroid:
    """M[P, Q] for a lower path P and an upper path Q of N/E steps."""

    upper: str
    lower: str

    def __post_init__(self):
        for p in (self.upper, self.lower):
            if set(p) - {"N", "E"}:
                raise InvalidRegion(f"path {p!r} must use only N and E")
        if not self.upper:
            raise InvalidRegion("paths must be nonempty")
        if sorted(self.upper) != sorted(self.lower):
            raise InvalidRegion("paths must have the same N and E counts")
        q, p = _points(self.upper), _points(self.lower)
        # after the same number of steps the lower path is weakly further east
        if any(a[0] < b[0] for a, b in zip(p, q)):
            raise InvalidRegion("lower path goes above the upper path")

    @property
    def m(self) -> int:
        return self.upper.count("E")

    @property
    def r(self) -> int:
        return self.upper.count("N")

    def intervals(self) -> list[tuple[int, int]]:
        """Transversal presentation: N_i = [l_i, u_i] from the i-th N steps of Q and P."""
        ls = [k + 1 for k, s in enumerate(self.upper) if s == "N"]
        us = [k + 1 for k, s in enumerate(self.lower) if s == "N"]
        return list(zip(ls, us))

    def region_edges(self) -> list:
        lo, _ = _heights(self.lower)
        _, hi = _heights(self.upper)
        out = []
        for x in range(self.m + 1):
            for y in range(lo[x], hi[x]):
                out.append(grid_edge((x, y), (x, y + 1)))
            if x < self.m:
                for y in range(lo[x + 1], hi[x] + 1):
                    out.append(grid_edge((x, y), (x + 1, y)))
        return out

    def path_steps(self, path: str) -> list:
        pts = _points(path)
        return [grid_edge(a, b) for a, b in zip(pts, pts[1:])]


def lattice_path_region(M: LatticePathMatroid) -> GridRegion:
    """Monotone region between P and Q with x on the N steps of Q and y on the E steps of P."""
    weights = {}
    for s, e in zip(M.upper, M.path_steps(M.upper)):
        if s == "N":
            weights[e] = Poly.x()
    for s, e in zip(M.lower, M.path_steps(M.lower)):
        if s == "E":
            weights[e] = Poly.y()
    return GridRegion(frozenset(), (0, 0), (M.m, M.r), StepPolicy.MONOTONE,
                      weights, frozenset(M.region_edges()))


@lru_cache(maxsize=64)
def _bounding_grid(m: int, r: int) -> ReweightableGrid:
    boxes = frozenset(product(range(m), range(r)))
    extra = frozenset(grid_edge((x, y), (x + 1, y)) for x in range(m) for y in (0, r))
    extra |= frozenset(grid_edge((x, y), (x, y + 1)) for x in (0, m) for y in range(r))
    return ReweightableGrid(GridRegion(boxes, (0, 0), (m, r), StepPolicy.MONOTONE, extra_edges=extra))


def tutte_lattice_path(M: LatticePathMatroid) -> Poly:
    """Weighted monotone path count of the region between P and Q.

    The circuit is that of the bounding m-by-r rectangle, assembled once
    per shape; edges outside the region get weight 0.  It is evaluated at
    the integer point x = B, y = B^(r+1): the x-degree is at most r and
    every coefficient is at most the number of paths, below B / 2, so the
    balanced base-B digits of the value are the coefficients.
    """
    region = lattice_path_region(M)
    grid = _bounding_grid(M.m, M.r)
    bits = (2 * comb(M.m + M.r, M.r)).bit_length() + 1
    B = 1 << bits
    X, Y = B, B ** (M.r + 1)
    inside = set(region.edges())
    weights = {}
    for e in grid.head_pos:
        w = region.edge_weights.get(e, 1) if e in inside else 0
        weights[e] = w(X, Y) if isinstance(w, Poly) else w
    value = grid.value(weights)
    terms = {}
    half = B >> 1
    for k in range((M.m + 1) * (M.r + 1)):
        d = value & (B - 1)
        if d >= half:
            d -= B
        value = (value - d) >> bits
        if d:
            terms[(k % (M.r + 1), k // (M.r + 1))] = d
    if value:
        raise ArithmeticError("Tutte polynomial out of the decoding range")
    return Poly(terms)


def tutte_brute_oracle(M: LatticePathMatroid) -> Poly:
    """Sum of x^i y^e over the paths of the region, read off step by step.

    Paths are walked one step at a time, never leaving the band between
    the two paths: after k steps the x-coordinate lies between that of Q
    and that of P.
    """
    n = M.m + M.r
    if n > TUTTE_ORACLE_MAX:
        raise TooLarge(f"{n} ground-set elements exceeds the oracle bound {TUTTE_ORACLE_MAX}")
    q_pts, p_pts = _points(M.upper), _points(M.lower)
    q_north = {a for a, s in zip(q_pts, M.upper) if s == "N"}
    p_east = {a for a, s in zip(p_pts, M.lower) if s == "E"}
    terms: dict[tuple[int, int], int] = {}

    def walk(k: int, x: int, y: int, i: int, e: int) -> None:
        if k == n:
            terms[(i, e)] = terms.get((i, e), 0) + 1
            return
        lo, hi = q_pts[k + 1][0], p_pts[k + 1][0]
        if y < M.r and lo <= x <= hi:
            walk(k + 1, x, y + 1, i + ((x, y) in q_north), e)
        if x < M.m and lo <= x + 1 <= hi:
            walk(k + 1, x + 1, y, i, e + ((x, y) in p_east))

    walk(0, 0, 0, 0, 0)
    return Poly(terms)
