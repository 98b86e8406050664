"""Realizability for constructive set theory over tree-coded sets."""

__version__ = "0.1.0"
