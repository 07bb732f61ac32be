import random

import pytest
from circuit_gen import random_circuit
from fixtures import XOR_TEXT

from pfcircuit.circuit import brute_force_value, evaluate
from pfcircuit.errors import ParseError
from pfcircuit.io import format_circuit, parse_circuit


def test_parse_xor():
    f = parse_circuit(XOR_TEXT)
    assert f.order is None
    assert set(f.circuit.nodes) == {"g", "c1", "c2", "c3"}
    assert evaluate(f.circuit) == 2


def test_spf_and_terms_blocks():
    text = """\
ring integer
gate h SPF 2
  entry 1 2 3
cogate c TERMS 2 00:1 11:1
edge c.1 h.1 pos 2
edge h.2 c.2 pos 1
"""
    f = parse_circuit(text)
    assert f.order == {0: 2, 1: 1}
    assert evaluate(f.circuit) == brute_force_value(f.circuit) == 4
    assert evaluate(f.circuit, order=f.order) == 4


def test_rational_ring():
    text = "ring rational\ngate g TERMS 1 0:1/2 1:1/3\ncogate c ONE1\nedge g.1 c.1 basis hadamard\n"
    c = parse_circuit(text).circuit
    assert brute_force_value(c) == parse_circuit(text).circuit.ring.parse("1/3")


@pytest.mark.parametrize("text", [
    "ring octonion\n",
    "gate g\n",
    "gate g FOO\n",
    "  entry 1 2 3\n",
    "gate g TERMS 2 0:1\n",
    "gate g ONE1 7\n",
    "gate g AE2\ncogate c ONE1\nedge g.1 d.1\n",
    "gate g AE2\ncogate c ONE1\nedge g c.1\n",
    "gate g AE2\ncogate c AE2\nedge g.1 c.1 pos 1\nedge g.2 c.2\n",
    "gate g AE2\ncogate c AE2\nedge g.1 c.1 colour red\n",
    "frobnicate\n",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_circuit(text)


def test_format_round_trip():
    rng = random.Random(8)
    for i in range(30):
        c = random_circuit(rng, 10, hadamard=i % 2 == 1, permute_slots=False)
        c.rotation = None
        back = parse_circuit(format_circuit(c)).circuit
        for name, node in c.nodes.items():
            assert back.nodes[name].predicate == node.predicate
        assert brute_force_value(back) == brute_force_value(c)
        assert evaluate(back) == evaluate(c)
