"""Exact-arithmetic toolkit for split Kac-Moody groups over valued fields."""

__version__ = "0.1.0"
