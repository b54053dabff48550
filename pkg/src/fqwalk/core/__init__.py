"""
Core structures for fqwalk - rotation tailed graphs, blow-up graphs and coins.
"""

from .blowup import BlowUpGraph, blow_up, degree_audit, dump_blowup, face_arcs
from .coin import Coin, make_coin, parse_coin_spec, random_coin, validate
from .rotation_graph import (
    TAIL,
    DualGraph,
    FacialWalk,
    RotationTailedGraph,
    attach_tails,
    build_rotation_graph,
    dual_graph,
    format_rotation_graph,
    genus,
    parse_rotation_graph,
    trace_faces,
)

__all__ = [
    "TAIL",
    "RotationTailedGraph",
    "FacialWalk",
    "DualGraph",
    "build_rotation_graph",
    "parse_rotation_graph",
    "format_rotation_graph",
    "trace_faces",
    "genus",
    "dual_graph",
    "attach_tails",
    "BlowUpGraph",
    "blow_up",
    "face_arcs",
    "degree_audit",
    "dump_blowup",
    "Coin",
    "make_coin",
    "validate",
    "random_coin",
    "parse_coin_spec",
]
