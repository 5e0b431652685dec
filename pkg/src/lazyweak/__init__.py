"""Alternating parity, Buchi and co-Buchi automata to weak automata via lazy progress measures."""

__version__ = "0.1.0"
