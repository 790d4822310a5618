"""Ranks of fundamental groups of function-space components from Sullivan models."""

__version__ = "0.1.0"
