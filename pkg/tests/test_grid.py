import random
from math import comb

import pytest

from pfcircuit.apps._lattice import edge_ids
from pfcircuit.apps.grid import (
    GridRegion, ReweightableGrid, StepPolicy, build_grid_circuit, count_monotone_paths,
    count_staircase_paths, evaluate_region, grid_edge, grid_oracle, monotone_path_oracle,
    staircase_region,
)
from pfcircuit.circuit import _graph_with_rotation, brute_force_value, euler_ok, evaluate, planar_embed
from pfcircuit.coefficients import Poly
from pfcircuit.errors import InvalidRegion

# the hand-drawn edge numbering of the 1x2 example, keyed by (vertex gate, edge cogate)
HAND_ORDER = {
    ("v0_0", "start"): 1, ("v0_0", "e0_0v"): 2, ("v0_1", "e0_0v"): 3, ("v0_1", "e0_1h"): 4,
    ("v1_1", "e0_1h"): 5, ("v1_1", "e1_1h"): 6, ("v2_1", "e1_1h"): 7, ("v2_1", "end"): 8,
    ("v2_1", "e2_0v"): 9, ("v2_0", "e2_0v"): 10, ("v2_0", "e1_0h"): 11, ("v1_1", "e1_0v"): 12,
    ("v1_0", "e1_0v"): 13, ("v1_0", "e1_0h"): 14, ("v1_0", "e0_0h"): 15, ("v0_0", "e0_0h"): 16,
}
EXPECTED_1X2 = {StepPolicy.GENERAL: 4, StepPolicy.MONOTONE: 3, StepPolicy.CLOSED_LOOPS: 4}


@pytest.mark.parametrize("policy", list(StepPolicy))
def test_one_by_two(policy):
    r = GridRegion.rectangle(2, 1, policy)
    c = build_grid_circuit(r)
    assert evaluate(c) == EXPECTED_1X2[policy]
    assert brute_force_value(c) == EXPECTED_1X2[policy]
    assert grid_oracle(r) == EXPECTED_1X2[policy]


@pytest.mark.parametrize("policy", list(StepPolicy))
def test_one_by_two_hand_order(policy):
    c = build_grid_circuit(GridRegion.rectangle(2, 1, policy))
    ids = edge_ids(c)
    present = sorted(p for k, p in HAND_ORDER.items() if k in ids)
    rank = {p: t + 1 for t, p in enumerate(present)}
    order = {ids[k]: rank[p] for k, p in HAND_ORDER.items() if k in ids}
    assert evaluate(c, order=order) == EXPECTED_1X2[policy]


def test_embedding_euler():
    c = build_grid_circuit(GridRegion.rectangle(2, 1, StepPolicy.GENERAL))
    assert euler_ok(_graph_with_rotation(c, planar_embed(c)))


def test_region_validation():
    with pytest.raises(InvalidRegion):
        GridRegion.rectangle(2, 2, start=(0, 0), end=(0, 0)).validate()
    with pytest.raises(InvalidRegion):
        GridRegion(frozenset({(0, 0), (3, 3)}), (0, 0), (4, 4)).validate()
    with pytest.raises(InvalidRegion):
        GridRegion.rectangle(1, 1, StepPolicy.CLOSED_LOOPS, start=(0, 0)).validate()
    with pytest.raises(InvalidRegion):
        GridRegion.rectangle(1, 1, start=(0, 0), end=(5, 5)).validate()
    with pytest.raises(InvalidRegion):
        count_monotone_paths(0, 3)
    assert StepPolicy.parse("Monotone") is StepPolicy.MONOTONE
    with pytest.raises(ValueError):
        StepPolicy.parse("diagonal")


def test_monotone_counts():
    for m in range(1, 7):
        for n in range(1, 7):
            assert count_monotone_paths(m, n) == comb(m + n, m)


def test_staircase_counts():
    for n in range(1, 8):
        want = monotone_path_oracle(staircase_region(n))
        assert count_staircase_paths(n) == want
    assert [count_staircase_paths(n) for n in (1, 3, 5)] == [1, 5, 42]


def random_region(rng, max_boxes=3, policy=None):
    boxes = {(0, 0)}
    while len(boxes) < rng.randint(1, max_boxes):
        x, y = rng.choice(sorted(boxes))
        dx, dy = rng.choice(((1, 0), (-1, 0), (0, 1), (0, -1)))
        boxes.add((x + dx, y + dy))
    policy = policy or rng.choice(list(StepPolicy))
    r = GridRegion(frozenset(boxes), step_policy=policy)
    if policy is StepPolicy.CLOSED_LOOPS:
        return r
    verts = r.vertices()
    s, e = rng.sample(verts, 2)
    if policy is StepPolicy.MONOTONE and (e[0] < s[0] or e[1] < s[1]):
        s, e = e, s
    return GridRegion(frozenset(boxes), s, e, policy)


def test_oracle_equivalence_small_regions():
    rng = random.Random(10)
    seen = 0
    while seen < 60:
        r = random_region(rng)
        if len(r.edges()) > 12:
            continue
        assert evaluate_region(r) == grid_oracle(r)
        seen += 1


def test_weighted_regions():
    rng = random.Random(11)
    x, y = Poly.x(), Poly.y()
    for _ in range(25):
        r = random_region(rng, max_boxes=2)
        weights = {e: rng.choice((2, -1, 3, x, y)) for e in r.edges() if rng.random() < 0.5}
        w = GridRegion(r.boxes, r.start, r.end, r.step_policy, weights)
        assert evaluate_region(w) == grid_oracle(w)


def test_reweightable_grid():
    rng = random.Random(12)
    r = GridRegion.rectangle(3, 2, StepPolicy.GENERAL, start=(0, 1), end=(3, 0))
    grid = ReweightableGrid(r)
    assert grid.value({}) == evaluate_region(r)
    for _ in range(10):
        weights = {e: rng.choice((0, 1, 2, -3)) for e in r.edges()}
        w = GridRegion(r.boxes, r.start, r.end, r.step_policy, weights)
        assert grid.value(weights) == evaluate_region(w)


def test_zero_weight_removes_edge():
    r = GridRegion.rectangle(2, 2)
    cut = grid_edge((1, 0), (1, 1))
    w = GridRegion(r.boxes, r.start, r.end, r.step_policy, {cut: 0})
    assert evaluate_region(w) == comb(4, 2) - 1 * 2  # one way into the cut edge, two out of it
