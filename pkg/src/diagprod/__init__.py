"""Diagonal products of finite alternating groups: exact arithmetic, characters and desk experiments."""

__version__ = "0.1.0"
