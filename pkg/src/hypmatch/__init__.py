"""Distributed hypergraph matching algorithms simulated in the LOCAL model."""

__version__ = "0.1.0"

LOG_BASE = 2
