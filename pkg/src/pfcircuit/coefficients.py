"""Coefficient rings.

Values are plain Python objects: ``int`` for the integers, ``Fraction`` for
the rationals, :class:`Poly` for integer polynomials in ``x`` and ``y`` and
``complex`` for approximate complex numbers.  All four support the usual
arithmetic operators, so hot loops use ``+``/``*`` directly and consult a
:class:`Ring` object only for zero tests, exact division and text I/O.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import DivisionByZero, InexactDivision, ParseError, RingMismatch


class Poly:
    """Immutable polynomial in ``x`` and ``y`` with integer coefficients.

    Stored as a dict ``{(i, j): c}`` meaning ``c * x^i * y^j``; zero
    coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            if c:
                i, j = mono
                if i < 0 or j < 0:
                    raise ValueError("negative exponent")
                clean[(int(i), int(j))] = int(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "Poly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "Poly":
        return cls({(0, 1): 1})

    @property
    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def monomials(self) -> list[tuple[int, int]]:
        """Monomials in graded lexicographic order, x > y, largest first."""
        return sorted(self._terms, key=lambda m: (m[0] + m[1], m[0]), reverse=True)

    def leading(self) -> tuple[tuple[int, int], int]:
        m = self.monomials()[0]
        return m, self._terms[m]

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self._terms)

    def constant_value(self) -> int:
        return self._terms.get((0, 0), 0)

    def __call__(self, x, y):
        return sum(c * x**i * y**j for (i, j), c in self._terms.items())

    subs = __call__

    @staticmethod
    def _lift(other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = Poly._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = Poly._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = Poly._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = Poly._lift(other)
        if o is None:
            return NotImplemented
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in o._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod_exact(self, other: "Poly") -> "Poly":
        """Quotient ``self / other``; raises InexactDivision on a remainder."""
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        (bi, bj), bc = other.leading()
        rem = self
        quot: dict[tuple[int, int], int] = {}
        while not rem.is_zero():
            (ri, rj), rc = rem.leading()
            if ri < bi or rj < bj or rc % bc:
                raise InexactDivision(f"{self} is not divisible by {other}")
            t = Poly({(ri - bi, rj - bj): rc // bc})
            quot[(ri - bi, rj - bj)] = rc // bc
            rem = rem - t * other
        return Poly(quot)

    def __eq__(self, other):
        o = Poly._lift(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


Value = Union[int, Fraction, Poly, complex]


def _mono_text(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for n, (i, j) in enumerate(p.monomials()):
        c = p._terms[(i, j)]
        mono = _mono_text(i, j)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if n == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TERM_RE = re.compile(r"([+-]?)([^+-]+)")


def parse_poly(text: str) -> Poly:
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    pos, total = 0, Poly()
    for m in _TERM_RE.finditer(s):
        if m.start() != pos:
            raise ParseError(f"bad polynomial {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coeff, i, j = 1, 0, 0
        for factor in m.group(2).split("*"):
            if re.fullmatch(r"\d+", factor):
                coeff *= int(factor)
                continue
            fm = re.fullmatch(r"([xy])(?:\^(\d+))?", factor)
            if not fm:
                raise ParseError(f"bad factor {factor!r} in {text!r}")
            e = int(fm.group(2) or 1)
            if fm.group(1) == "x":
                i += e
            else:
                j += e
        total = total + Poly({(i, j): sign * coeff})
    if pos != len(s):
        raise ParseError(f"bad polynomial {text!r}")
    return total


@dataclass(frozen=True)
class Ring:
    """A coefficient ring: membership, zero test, exact division and text I/O."""

    name: str
    tol: float = 1e-9

    @property
    def zero(self) -> Value:
        return _ZEROS[self.name]

    @property
    def one(self) -> Value:
        return _ONES[self.name]

    @property
    def exact(self) -> bool:
        return self.name != "complex"

    @property
    def is_field(self) -> bool:
        return self.name in ("rational", "complex")

    def contains(self, v) -> bool:
        if isinstance(v, bool):
            return False
        if self.name == "integer":
            return isinstance(v, int)
        if self.name == "rational":
            return isinstance(v, Fraction)
        if self.name == "poly":
            return isinstance(v, Poly)
        return isinstance(v, complex)

    def coerce(self, v) -> Value:
        """Convert an int (or any value embeddable in this ring) into the ring."""
        if self.contains(v):
            return v
        if self.name == "integer":
            if isinstance(v, Fraction) and v.denominator == 1:
                return int(v.numerator)
            if isinstance(v, Poly) and v.is_constant():
                return v.constant_value()
            if isinstance(v, int) and not isinstance(v, bool):
                return v
        elif self.name == "rational":
            if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
                return Fraction(v)
            if isinstance(v, Poly) and v.is_constant():
                return Fraction(v.constant_value())
        elif self.name == "poly":
            if isinstance(v, int) and not isinstance(v, bool):
                return Poly.const(v)
            if isinstance(v, Fraction) and v.denominator == 1:
                return Poly.const(v.numerator)
        else:
            if isinstance(v, (int, float, Fraction)) and not isinstance(v, bool):
                return complex(v)
            if isinstance(v, Poly) and v.is_constant():
                return complex(v.constant_value())
        raise RingMismatch(f"cannot coerce {v!r} into the {self.name} ring")

    def is_zero(self, v) -> bool:
        if self.name == "complex":
            return abs(v) <= self.tol
        return not v

    def eq(self, a, b) -> bool:
        if self.name == "complex":
            return abs(a - b) <= self.tol
        return a == b

    def exact_div(self, a, b) -> Value:
        if self.is_zero(b):
            raise DivisionByZero(f"division of {a} by zero")
        if self.name == "integer":
            q, r = divmod(a, b)
            if r:
                raise InexactDivision(f"{a} is not divisible by {b}")
            return q
        if self.name == "rational":
            return Fraction(a) / b
        if self.name == "poly":
            return a.divmod_exact(b)
        return a / b

    def format(self, v) -> str:
        if self.name == "integer":
            return str(v)
        if self.name == "rational":
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        if self.name == "poly":
            return format_poly(v)
        return format_complex(v)

    def parse(self, text: str) -> Value:
        t = text.strip()
        try:
            if self.name == "integer":
                return int(t)
            if self.name == "rational":
                return Fraction(t)
            if self.name == "poly":
                return parse_poly(t)
            return parse_complex(t)
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"cannot parse {text!r} as {self.name}") from exc


_ZEROS = {"integer": 0, "rational": Fraction(0), "poly": Poly(), "complex": 0j}
_ONES = {"integer": 1, "rational": Fraction(1), "poly": Poly.const(1), "complex": 1 + 0j}

ZZ = Ring("integer")
QQ = Ring("rational")
ZZxy = Ring("poly")
CC = Ring("complex")

RINGS = {"integer": ZZ, "rational": QQ, "poly": ZZxy, "complex": CC}


def format_complex(z: complex) -> str:
    re_, im = z.real, z.imag
    sign = "-" if im < 0 or (im == 0 and str(im).startswith("-")) else "+"
    return f"{_num(re_)}{sign}{_num(abs(im))}i"


def _num(f: float) -> str:
    return str(int(f)) if f == int(f) and abs(f) < 1e15 else repr(f)


def parse_complex(text: str) -> complex:
    t = text.replace(" ", "")
    if t.endswith("i"):
        t = t[:-1] + "j"
    return complex(t)


def ring_of(v) -> Ring:
    if isinstance(v, bool):
        raise RingMismatch("bool is not a coefficient")
    if isinstance(v, int):
        return ZZ
    if isinstance(v, Fraction):
        return QQ
    if isinstance(v, Poly):
        return ZZxy
    if isinstance(v, complex):
        return CC
    raise RingMismatch(f"{v!r} is not a coefficient")


def _same(a, b) -> Ring:
    ra, rb = ring_of(a), ring_of(b)
    if ra != rb:
        raise RingMismatch(f"{ra.name} vs {rb.name}")
    return ra


def add(a, b):
    _same(a, b)
    return a + b


def mul(a, b):
    _same(a, b)
    return a * b


def neg(a):
    ring_of(a)
    return -a


def exact_div(a, b):
    return _same(a, b).exact_div(a, b)


def common_ring(values: Iterable) -> Ring:
    """The smallest of ZZ ⊂ QQ, ZZ ⊂ ZZ[x,y], ZZ ⊂ CC holding every value."""
    names = {ring_of(v).name for v in values}
    names.discard("integer")
    if not names:
        return ZZ
    if len(names) == 1:
        return RINGS[names.pop()]
    if names <= {"rational", "complex"}:
        return CC
    raise RingMismatch(f"no common ring for {sorted(names)}")


def promote(ring: Ring) -> Ring:
    """The fraction field used when exact division fails (ZZ -> QQ)."""
    if ring is ZZ or ring.name == "integer":
        return QQ
    return ring


def demote(v):
    """Turn an integral Fraction back into an int; other values pass through."""
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v.numerator)
    return v
