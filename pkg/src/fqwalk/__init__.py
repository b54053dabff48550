"""
fqwalk - Facial quantum walks on rotation tailed graphs

Traces the faces of an embedded graph, blows it up into a 2-regular
digraph, runs the coined walk with constant tail inflow and reads the
stationary state, scattering matrix and spanning-forest expansion off the
faces.
"""

__version__ = "0.1.0"

from .core.blowup import BlowUpGraph, blow_up
from .core.coin import Coin, make_coin, parse_coin_spec
from .core.rotation_graph import (
    TAIL,
    FacialWalk,
    RotationTailedGraph,
    build_rotation_graph,
    dual_graph,
    genus,
    parse_rotation_graph,
    trace_faces,
)
from .dual.forest_oracle import gram_inverse_combinatorial, pointed_dual
from .errors import FacialWalkError
from .tools.builtin_graphs import load_graph
from .walk.dynamics import evolve, fixed_point_solve
from .walk.scattering import detect_embedding, scattering_matrix
from .walk.stationary import stationary_state

__all__ = [
    "TAIL",
    "RotationTailedGraph",
    "FacialWalk",
    "build_rotation_graph",
    "parse_rotation_graph",
    "trace_faces",
    "genus",
    "dual_graph",
    "BlowUpGraph",
    "blow_up",
    "Coin",
    "make_coin",
    "parse_coin_spec",
    "evolve",
    "fixed_point_solve",
    "scattering_matrix",
    "detect_embedding",
    "stationary_state",
    "pointed_dual",
    "gram_inverse_combinatorial",
    "load_graph",
    "FacialWalkError",
]
