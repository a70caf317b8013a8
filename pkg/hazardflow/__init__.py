"""Hazard-target system modeling and accident analysis."""

__version__ = "1.0.0"
