"""Exact connected-component counting for affine vector variational inequalities."""

__version__ = "0.1.0"
