"""Pairwise text-complexity assessment."""

__version__ = "0.1.0"
