"""Exact symbolic verification of boundary and interior residue computations."""

__version__ = "0.1.0"
