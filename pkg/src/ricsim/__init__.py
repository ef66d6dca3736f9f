"""Simulation and verification of remote quantum information concentration."""

__version__ = "0.1.0"
