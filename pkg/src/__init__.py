"""Quantum-enhanced plasmonic sensing simulation toolkit."""
__version__ = "0.1.0"
