"""cutkit: deterministic minimum cut and local low-conductance cuts."""

from .multigraph import CutResult, MultiGraph, VertexInfo

__version__ = "0.1.0"

__all__ = ["MultiGraph", "CutResult", "VertexInfo", "__version__"]
