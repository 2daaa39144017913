"""Symbolic and numerical verification of q-deformed oscillator algebras."""

__version__ = "0.1.0"
