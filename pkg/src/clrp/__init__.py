"""Constrained linear representability of polymatroids over small finite fields."""

__version__ = "0.1.0"
