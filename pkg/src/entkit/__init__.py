"""Toolkit for quantifying bipartite and multipartite entanglement."""

__version__ = "0.1.0"
