"""Exact H^3(G, U(1)) index of 2d bosonic SPT states"""

__version__ = "1.0.0"
