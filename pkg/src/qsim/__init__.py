"""Lazy, chunked state-vector simulation of phased-permutation circuits."""

__version__ = "0.1.0"
