"""Desk-scale experiments on the information content of SAT."""

__version__ = "0.1.0"
