import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from pfcircuit.coefficients import QQ, ZZ, ZZxy, Poly
from pfcircuit.errors import LabelError
from pfcircuit.pfaffian import (
    SkewMatrix, checkerboard, det, direct_sum, format_matrix, parse_matrix, pf, pf_eliminate,
    pf_oracle, sub_pf_cogate, sub_pf_gate,
)
from pfcircuit.tensor import COGATE, GATE, Predicate, contract

x, y = Poly.x(), Poly.y()


def random_skew(rng, n, values=range(-3, 4), labels=None):
    labels = list(labels or range(1, n + 1))
    return SkewMatrix(labels, {(a, b): rng.choice(values) for a, b in combinations(labels, 2)})


def random_poly(rng):
    return Poly({(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(rng.randint(0, 3))})


def test_pf_oracle_examples():
    assert pf_oracle(SkewMatrix.zero(())) == 1
    assert pf_oracle(SkewMatrix((1, 2), {(1, 2): 5})) == 5
    ones = SkewMatrix(range(1, 5), {(i, j): 1 for i, j in combinations(range(1, 5), 2)})
    assert pf_oracle(ones) == 1
    assert pf_oracle(random_skew(random.Random(0), 5)) == 0


def test_pf_examples():
    assert pf(random_skew(random.Random(1), 7)) == 0
    M = random_skew(random.Random(2), 6)
    assert pf(M) == pf_oracle(M)
    assert pf(SkewMatrix(range(1, 5), {(1, 2): x, (3, 4): y})) == x * y
    assert pf(SkewMatrix.zero(())) == 1


def test_skew_invariants():
    M = random_skew(random.Random(4), 5)
    d = M.dense()
    for i in range(5):
        assert d[i][i] == 0
        for j in range(5):
            assert d[i][j] == -d[j][i]
    with pytest.raises(LabelError):
        SkewMatrix((1, 1), {})


def test_pf_matches_oracle_integers():
    rng = random.Random(11)
    for _ in range(150):
        M = random_skew(rng, rng.randint(0, 10), values=range(-9, 10))
        assert pf(M) == pf_oracle(M)
        assert pf_eliminate(M) == pf_oracle(M)


def test_pf_matches_oracle_polynomials():
    rng = random.Random(12)
    for _ in range(60):
        n = rng.randint(0, 8)
        M = SkewMatrix(range(1, n + 1), {(a, b): random_poly(rng) for a, b in combinations(range(1, n + 1), 2)}, ZZxy)
        assert pf(M) == pf_oracle(M)
        assert pf_eliminate(M) == pf_oracle(M)


def test_pf_sparse_and_rational():
    rng = random.Random(13)
    for _ in range(60):
        n = rng.choice((4, 6, 8, 10))
        M = random_skew(rng, n, values=(0, 0, 0, 1, -1, 2))
        assert pf(M) == pf_oracle(M)
        Q = M.with_ring(QQ).scale(QQ.parse("1/3"))
        assert pf(Q) == pf_oracle(Q)


@settings(max_examples=40)
@given(st.randoms(use_true_random=False), st.sampled_from((2, 4, 6, 8)))
def test_pf_squared_is_det(rng, n):
    M = random_skew(rng, n, values=range(-5, 6))
    assert pf(M) ** 2 == det(M.dense(), ZZ)


def test_sub_pf_gate_examples():
    X = SkewMatrix((1, 2, 3), {(1, 2): 2, (1, 3): 3, (2, 3): 5})
    assert sub_pf_gate(X) == Predicate.from_bits(GATE, (1, 2, 3), {"000": 1, "110": 2, "101": 3, "011": 5})
    assert sub_pf_gate(SkewMatrix((1, 2), {(1, 2): 7})) == Predicate.from_bits(GATE, (1, 2), {"00": 1, "11": 7})
    assert sub_pf_gate(SkewMatrix.zero((1,))) == Predicate.from_bits(GATE, (1,), {"0": 1})


def test_sub_pf_cogate_examples():
    t = sub_pf_cogate(SkewMatrix((1, 2), {(1, 2): 7}))
    assert t == Predicate.from_bits(COGATE, (1, 2), {"00": 7, "11": 1})
    assert sub_pf_cogate(SkewMatrix((1, 2), {(1, 2): 1})) == Predicate.from_bits(COGATE, (1, 2), {"00": 1, "11": 1})
    assert sub_pf_cogate(SkewMatrix.zero((1,))) == Predicate.from_bits(COGATE, (1,), {"1": 1})


def test_checkerboard_examples():
    T = SkewMatrix((1, 2), {(1, 2): 7})
    assert checkerboard(T) == T
    S = SkewMatrix(range(1, 5), {(1, 3): 4, (1, 2): 1})
    C = checkerboard(S)
    assert C.get(1, 3) == -4 and C.get(1, 2) == 1
    M = random_skew(random.Random(5), 6)
    assert checkerboard(checkerboard(M)) == M
    # positions, not labels, decide the sign
    assert checkerboard(SkewMatrix((10, 12), {(10, 12): 1}), {10: 1, 12: 2}).get(10, 12) == 1


def test_direct_sum_examples():
    A = SkewMatrix((2, 5, 7), {(2, 5): 1, (2, 7): 2, (5, 7): 3})
    B = SkewMatrix((3, 4, 9), {(3, 4): 4, (3, 9): 5, (4, 9): 6})
    D = direct_sum([A, B])
    assert D.labels == (2, 3, 4, 5, 7, 9)
    assert D.dense() == [
        [0, 0, 0, 1, 2, 0],
        [0, 0, 4, 0, 0, 5],
        [0, -4, 0, 0, 0, 6],
        [-1, 0, 0, 0, 3, 0],
        [-2, 0, 0, -3, 0, 0],
        [0, -5, -6, 0, 0, 0],
    ]
    assert direct_sum([A, SkewMatrix.zero(())]) == A
    with pytest.raises(LabelError):
        direct_sum([A, A])


def test_kernel_identity():
    rng = random.Random(21)
    for _ in range(100):
        n = rng.choice((2, 4, 6, 8))
        X, T = random_skew(rng, n), random_skew(rng, n)
        lhs = contract(sub_pf_gate(X), sub_pf_cogate(T))
        assert lhs == pf(checkerboard(T) + X)


def test_kernel_zero_theta():
    X = random_skew(random.Random(22), 6)
    assert contract(sub_pf_gate(X), sub_pf_cogate(SkewMatrix.zero(X.labels))) == pf(X)


def test_matrix_text_roundtrip():
    M = random_skew(random.Random(6), 4, labels=(2, 3, 8, 9))
    assert parse_matrix(format_matrix(M)) == M


def _cofactor(A):
    if len(A) == 1:
        return A[0][0]
    return sum((-1) ** j * A[0][j] * _cofactor([r[:j] + r[j + 1:] for r in A[1:]]) for j in range(len(A)))


def test_det_polynomial_matches_cofactor():
    rng = random.Random(14)
    for _ in range(100):
        n = rng.randint(1, 5)
        A = [[random_poly(rng) for _ in range(n)] for _ in range(n)]
        assert det(A, ZZxy) == _cofactor(A)
    assert det([[x, y], [1, 1]], ZZxy) == x - y
