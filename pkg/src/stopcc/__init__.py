"""Optimal-stopping experiments on graphs: maximize the expected number of
connected components of the active induced subgraph."""

__version__ = "0.1.0"
