import pytest

from pfcircuit.apps.hex import build_hex_circuit, count_hex_paths, hex_corner, hex_edges, hex_oracle
from pfcircuit.circuit import brute_force_value
from pfcircuit.errors import InvalidRegion


def test_single_hexagon():
    region = {(0, 0)}
    assert len(hex_edges(region)) == 6
    for k in range(1, 6):
        s, e = hex_corner((0, 0), 0), hex_corner((0, 0), k)
        want = hex_oracle(region, s, e)
        assert want == 2  # the two arcs of the hexagon
        assert count_hex_paths(region, s, e) == want


def test_start_equals_end_rejected():
    v = hex_corner((0, 0), 2)
    with pytest.raises(InvalidRegion):
        build_hex_circuit({(0, 0)}, v, v)


def test_disconnected_rejected():
    with pytest.raises(InvalidRegion):
        build_hex_circuit({(0, 0), (5, 5)}, hex_corner((0, 0), 0), hex_corner((0, 0), 1))


@pytest.mark.parametrize("region", [
    {(0, 0), (1, 0)},
    {(0, 0), (0, 1)},
    {(0, 0), (1, 0), (0, 1)},
    {(0, 0), (1, 0), (2, 0)},
    {(0, 0), (1, 0), (1, -1)},
])
def test_regions_match_oracle(region):
    verts = sorted({v for e in hex_edges(region).values() for v in e}, key=sorted)
    pairs = [(verts[0], verts[-1]), (verts[1], verts[len(verts) // 2]), (verts[2], verts[3])]
    for s, e in pairs:
        if s == e:
            continue
        want = hex_oracle(region, s, e)
        assert count_hex_paths(region, s, e) == want


def test_circuit_brute_force_agrees():
    region = {(0, 0), (1, 0)}
    s, e = hex_corner((0, 0), 3), hex_corner((1, 0), 0)
    c = build_hex_circuit(region, s, e)
    assert brute_force_value(c) == hex_oracle(region, s, e)
