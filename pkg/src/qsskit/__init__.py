"""Verification and classification tools for pure qubit quantum secret sharing."""

__version__ = "0.1.0"
