"""Adelic energy pairings and common preperiodic points for z^2 + c over Q."""

__version__ = "0.1.0"
