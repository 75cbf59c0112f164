"""Exact-arithmetic workbench for higher inclusion matrices of uniform hypergraphs."""

__version__ = "0.1.0"
