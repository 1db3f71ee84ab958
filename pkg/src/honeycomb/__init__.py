"""Steiner symmetrization flow of centrally symmetric hexagons towards the honeycomb cell."""

from ._core import BACKEND
from .geometry import Axis, ConvexPolygon, NotInteriorError
from .hexflow import FlowState, Trajectory, lemma_report, run_flow
from .steiner import chord_function, steiner_symmetrize
from .tiling import HexCell, TileClass, classify, lattice_vectors, regular_hexagon, verify_tiling

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "BACKEND",
    "ConvexPolygon",
    "FlowState",
    "HexCell",
    "NotInteriorError",
    "TileClass",
    "Trajectory",
    "chord_function",
    "classify",
    "lattice_vectors",
    "lemma_report",
    "regular_hexagon",
    "run_flow",
    "steiner_symmetrize",
    "verify_tiling",
]
