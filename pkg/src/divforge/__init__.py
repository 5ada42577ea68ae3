"""Exact divisor calculus on rational and ruled surfaces and their blow-ups."""

__version__ = "0.1.0"
