"""Indeque sets: sets of vertices inducing disjoint cliques.

Constructive half-size extraction for K4-minor-free and subcubic graphs,
with exact oracles and generators for the extremal families.
"""

import sys

from .graph import Graph, verify_indeque

__version__ = "0.1.0"
__all__ = ["Graph", "verify_indeque", "__version__"]

# series-parallel trees are walked recursively in a few places
if sys.getrecursionlimit() < 10000:
    sys.setrecursionlimit(10000)
