"""Adequacy assessment of distributed-generation systems under hybrid uncertainty."""

__version__ = "0.1.0"
