"""Exact convex-analytic toolkit for heights of toric varieties."""

__version__ = "0.1.0"
