"""Problem builders on top of the circuit core."""
