"""Solvers for the reduced formulations of two-state mean-field games."""

__version__ = "1.0.0"
