"""Detecting organized co-movement in multi-agent trajectories."""

__version__ = "0.1.0"
