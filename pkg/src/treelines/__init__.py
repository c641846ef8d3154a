"""Exact-arithmetic toolkit for crossing-free straight-line tree embeddings
on line arrangements."""

__version__ = "0.1.0"
