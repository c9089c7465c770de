"""Coding semi-decidable equivalence relations by decidable ones."""

__version__ = "0.1.0"
