"""Cooperative handheld-to-multi-satellite uplink simulator."""

__version__ = "0.1.0"
