import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from pfcircuit.errors import LabelError, OrientationMismatch, SingularBasis
from pfcircuit.pfaffian import SkewMatrix, direct_sum, sub_pf_gate
from pfcircuit.tensor import (
    COGATE, GATE, HADAMARD, IDENTITY, XMATCH, BasisChange, Parity, Predicate, all_assignments,
    and21, apply_basis, apply_basis_exact, coefficient, contract, format_predicate, nae3, one1,
    parse_predicate, scale, support_parity, tensor_product, xor21,
)


def ket(edges, terms):
    return Predicate.from_bits(GATE, edges, terms)


def bra(edges, terms):
    return Predicate.from_bits(COGATE, edges, terms)


def test_coefficient_examples():
    assert coefficient(xor21(1, 2, 3), {2, 3}) == 1
    assert coefficient(xor21(1, 2, 3), {3}) == 0
    assert coefficient(and21(1, 2, 3), {1, 2, 3}) == 1
    with pytest.raises(LabelError):
        coefficient(xor21(1, 2, 3), {4})


def test_zero_coefficients_dropped():
    p = ket((1, 2), {"00": 1, "11": 0})
    assert p.coeffs == {frozenset(): 1}


def test_tensor_product_examples():
    p = tensor_product(ket((1,), {"0": 1, "1": 1}), ket((2,), {"1": 1}))
    assert p == ket((1, 2), {"01": 1, "11": 1})
    assert tensor_product(ket((1,), {"1": 2}), ket((2,), {"1": 3})) == ket((1, 2), {"11": 6})
    with pytest.raises(LabelError):
        tensor_product(ket((1,), {"1": 1}), ket((1,), {"1": 1}))
    with pytest.raises(OrientationMismatch):
        tensor_product(ket((1,), {"1": 1}), bra((2,), {"1": 1}))


def test_block_diagonal_product():
    rng = random.Random(3)
    for n1, n2 in [(2, 2), (3, 3), (4, 4), (2, 6), (5, 3)]:
        A = SkewMatrix(range(1, n1 + 1), {(i, j): rng.randint(-3, 3) for i, j in combinations(range(1, n1 + 1), 2)})
        labels = range(n1 + 1, n1 + n2 + 1)
        B = SkewMatrix(labels, {(i, j): rng.randint(-3, 3) for i, j in combinations(labels, 2)})
        assert tensor_product(sub_pf_gate(A), sub_pf_gate(B)) == sub_pf_gate(direct_sum([A, B]))


def test_contract_examples(xor_value=2):
    assert contract(ket((1,), {"0": 1, "1": 1}), one1(1)) == 1
    g = ket((1, 2), {"00": 1, "11": 5})
    assert contract(g, one1(2)) == ket((1,), {"1": 5})
    with pytest.raises(LabelError):
        contract(g, one1(3))


def test_contract_odd_gadget():
    # <1| on edge 4 against sPf of a 4x4 matrix leaves the odd arity-3 tensor
    vals = {(1, 2): 2, (1, 3): 3, (1, 4): 5, (2, 3): 7, (2, 4): 11, (3, 4): 13}
    X = SkewMatrix(range(1, 5), vals)
    t = contract(sub_pf_gate(X), one1(4))
    pf4 = 2 * 13 - 3 * 11 + 7 * 5
    assert t == ket((1, 2, 3), {"001": 13, "010": 11, "100": 5, "111": pf4})


def test_support_parity():
    assert support_parity(nae3()) is Parity.MIXED
    q, s = apply_basis(nae3(), {e: HADAMARD for e in (1, 2, 3)})
    assert s == 1
    assert q == ket((1, 2, 3), {"000": 6, "011": -2, "101": -2, "110": -2})
    assert support_parity(q) is Parity.EVEN
    assert support_parity(Predicate(GATE, (1,), {})) is Parity.ZERO


def test_apply_basis_examples():
    p = nae3()
    assert apply_basis(p, {e: IDENTITY for e in p.edges}) == (p, 1)
    J = bra((1, 2), {"00": 1, "01": 1, "10": 1})
    q, s = apply_basis(J, {1: XMATCH, 2: XMATCH})
    assert s == 1 and q == bra((1, 2), {"00": 1, "11": -1})
    with pytest.raises(SingularBasis):
        BasisChange(1, 1, 1, 1)
    with pytest.raises(LabelError):
        apply_basis(p, {1: HADAMARD})


def test_dual_hadamard_scalar():
    # the dual Hadamard is H/2, so over the integers the 1/2 is returned separately
    q, s = apply_basis(one1(1), {1: HADAMARD})
    assert s == Fraction(-1, 2)
    half = Fraction(1, 2)
    assert apply_basis_exact(one1(1), {1: HADAMARD}) == bra((1,), {"0": half, "1": -half})


def test_scale_examples():
    assert scale(ket((1,), {"0": 1}), 3) == ket((1,), {"0": 3})
    p = nae3()
    assert scale(p, 1) == p
    assert scale(p, 0).coeffs == {}
    h = apply_basis_exact(nae3(), {e: HADAMARD for e in (1, 2, 3)})
    assert scale(scale(h, Fraction(1, 6)), 6) == h


def test_predicate_text_roundtrip():
    p = ket((1, 4, 7), {"010": 3, "111": -2})
    assert parse_predicate(format_predicate(p)) == p
    assert parse_predicate("gate; edges=[1, 2]; term 00 1; term 11 2") == ket((1, 2), {"00": 1, "11": 2})


def _random_predicate(rng, orientation, edges, density=0.6):
    return Predicate(orientation, edges, {
        s: rng.randint(-3, 3) for s in all_assignments(edges) if rng.random() < density
    })


def test_parity_algebra():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 5)
        edges = tuple(range(1, n + 1))
        pg, pc = rng.choice((0, 1)), rng.choice((0, 1))
        g = Predicate(GATE, edges, {s: rng.randint(1, 3) for s in all_assignments(edges) if len(s) % 2 == pg})
        k = rng.randint(1, n)
        shared = edges[:k]
        c = Predicate(COGATE, shared, {s: rng.randint(1, 3) for s in all_assignments(shared) if len(s) % 2 == pc})
        out = contract(g, c)
        if isinstance(out, Predicate):
            expect = Parity.EVEN if pg == pc else Parity.ODD
            assert support_parity(out) in (expect, Parity.ZERO)


def _random_basis(rng):
    while True:
        e = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(4)]
        if e[0] * e[3] - e[1] * e[2]:
            return BasisChange(*e)


def test_pairing_invariance():
    rng = random.Random(9)
    for _ in range(100):
        n = rng.randint(1, 4)
        edges = tuple(range(1, n + 1))
        g = _random_predicate(rng, GATE, edges)
        c = _random_predicate(rng, COGATE, edges)
        if not g.coeffs or not c.coeffs:
            continue
        bases = {e: _random_basis(rng) for e in edges}
        assert contract(apply_basis_exact(g, bases), apply_basis_exact(c, bases)) == contract(g, c)


@settings(max_examples=60)
@given(st.randoms(use_true_random=False), st.integers(1, 4), st.integers(1, 4))
def test_tensor_product_coefficients(rng, n1, n2):
    p = _random_predicate(rng, GATE, tuple(range(1, n1 + 1)))
    q = _random_predicate(rng, GATE, tuple(range(n1 + 1, n1 + n2 + 1)))
    r = tensor_product(p, q)
    for s in all_assignments(r.edges):
        assert coefficient(r, s) == coefficient(p, s & set(p.edges)) * coefficient(q, s & set(q.edges))
    assert tensor_product(q, p) == r


@settings(max_examples=40)
@given(st.randoms(use_true_random=False))
def test_tensor_product_associative(rng):
    a = _random_predicate(rng, GATE, (1, 2))
    b = _random_predicate(rng, GATE, (3,))
    c = _random_predicate(rng, GATE, (4, 5))
    assert tensor_product(tensor_product(a, b), c) == tensor_product(a, tensor_product(b, c))
