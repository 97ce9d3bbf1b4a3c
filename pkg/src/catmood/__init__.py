"""Compact Approximate Taylor schemes with a posteriori MOOD limiting."""

__version__ = "0.1.0"
