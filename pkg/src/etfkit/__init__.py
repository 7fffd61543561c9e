"""Equiangular tight frames, Seidel matrices and worst-case erasure analysis."""

__version__ = "0.1.0"
