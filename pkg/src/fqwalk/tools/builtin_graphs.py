"""
Catalogue of built-in graphs, addressable by name.

Most of them are shipped as ``.rot`` files in ``fqwalk.data.graphs``; the
soccer-ball graph is built from the planar icosahedron by truncation.
"""

from __future__ import annotations

import logging
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List

import networkx as nx

from ..core.rotation_graph import (
    RotationTailedGraph,
    attach_tails,
    build_rotation_graph,
    parse_rotation_graph,
    trace_faces,
)
from ..errors import GraphFormatError, InvariantError

logger = logging.getLogger(__name__)

_DATA_PACKAGE = "fqwalk.data.graphs"


def _from_data(name: str) -> Callable[[], RotationTailedGraph]:
    def load() -> RotationTailedGraph:
        text = resources.files(_DATA_PACKAGE).joinpath(f"{name}.rot").read_text("utf-8")
        return parse_rotation_graph(text)

    return load


def truncated_icosahedron() -> RotationTailedGraph:
    """
    Soccer ball: 12 pentagons and 20 hexagons. Vertex ``"v.w"`` sits on the
    icosahedron edge v-w next to v. The first hexagon in canonical face order
    becomes the external face, with a tail at each of its six vertices.
    """
    ico = nx.icosahedral_graph()
    is_planar, emb = nx.check_planarity(ico)
    if not is_planar:
        raise InvariantError("icosahedron embedding is not planar")
    cw = {v: list(emb.neighbors_cw_order(v)) for v in sorted(ico.nodes)}

    def name(v: int, w: int) -> str:
        return f"{v}.{w}"

    rotation: Dict[str, List[str]] = {}
    for v, nbrs in cw.items():
        k = len(nbrs)
        for i, w in enumerate(nbrs):
            rotation[name(v, w)] = [
                name(w, v),
                name(v, nbrs[(i + 1) % k]),
                name(v, nbrs[(i - 1) % k]),
            ]
    closed = build_rotation_graph(rotation)
    outer = next(f for f in trace_faces(closed) if f.length == 6)
    return attach_tails(closed, outer)


BUILTIN_GRAPHS: Dict[str, Callable[[], RotationTailedGraph]] = {
    "tetrahedron": _from_data("tetrahedron"),
    "k33-10-4-4": _from_data("k33-10-4-4"),
    "k33-6-6-6": _from_data("k33-6-6-6"),
    "k33-18": _from_data("k33-18"),
    "triangle-one-tail": _from_data("triangle-one-tail"),
    "truncated-icosahedron": truncated_icosahedron,
}


def builtin_names() -> List[str]:
    return list(BUILTIN_GRAPHS)


def load_graph(source: str) -> RotationTailedGraph:
    """A built-in name or a path to a graph file."""
    if source in BUILTIN_GRAPHS:
        logger.info("Loading built-in graph %s", source)
        return BUILTIN_GRAPHS[source]()
    path = Path(source)
    if not path.is_file():
        raise GraphFormatError(
            f"{source!r} is neither a built-in graph ({', '.join(BUILTIN_GRAPHS)}) "
            "nor a readable file"
        )
    logger.info("Loading graph file %s", path)
    return parse_rotation_graph(path.read_text(encoding="utf-8"))
