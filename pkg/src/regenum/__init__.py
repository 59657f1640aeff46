"""Exact enumeration of regular combinatorial classes via symmetric-function scalar products."""

__version__ = "0.1.0"
