"""Executable Type-Two realizers for jumps, mindchanges and d-open sets."""

__version__ = "0.1.0"
