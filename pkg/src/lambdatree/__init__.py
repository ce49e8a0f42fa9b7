"""Exact computations on the tree of balls of a non-archimedean field."""

__version__ = "0.1.0"
