"""Quantum Margulis codes: construction, analysis, and BP-OSD simulation."""

__version__ = "0.1.0"
