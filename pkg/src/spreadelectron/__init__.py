"""Exact operator algebra for the spread-electron wave equation and its g-2 corrections."""

__version__ = "0.1.0"
