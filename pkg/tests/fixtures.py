"""Small circuits shared by several test files."""

from pfcircuit.io import parse_circuit

# XOR gate closed by three unary cogates, one edge in the basis |0> -> |1>,
# |1> -> |0> - |1>; its value is 2.
XOR_TEXT = """\
ring integer
gate g XOR21
cogate c1 ONE1
cogate c2 TERMS 1 0:1 1:1
cogate c3 TERMS 1 0:1 1:1
edge g.1 c1.1 basis 0,1,1,-1
edge g.2 c2.1
edge g.3 c3.1
"""


def xor_circuit():
    return parse_circuit(XOR_TEXT).circuit
