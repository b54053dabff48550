"""
Blow-up graph G^BU of a rotation tailed graph.

Each vertex ``u`` becomes an island: one blow-up vertex ``(u, x)`` per slot
``x`` of its rotation (the tail slot included) joined into a directed cycle
``(u, x) -> (u, rho_u(x))``. Each arc ``u -> v`` of G becomes the bridge
``(u, v) -> (v, u)``. Tails are not materialized; a boundary vertex ``u``
only records its quay, the island arc into ``(u, *)`` (xi_out) and the one
out of it (xi_in).

Global arc indices: island arcs first, grouped by vertex in declaration
order and by rotation position inside an island; then bridges, in the order
of ``graph.arcs``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from ..errors import PreconditionError
from .rotation_graph import TAIL, Arc, FacialWalk, RotationTailedGraph

logger = logging.getLogger(__name__)

BUVertex = Tuple[str, str]

ISLAND = "island"
BRIDGE = "bridge"


@dataclass(frozen=True)
class BlowUpArc:
    kind: str
    index: int  # position within its kind
    tail: BUVertex
    head: BUVertex
    origin: Optional[Arc] = None  # bridges only


@dataclass(frozen=True)
class Quay:
    vertex: str
    xi_out: int
    xi_in: int


@dataclass(frozen=True)
class Junction:
    """Wiring of the coin at a non-tail blow-up vertex (global arc indices)."""

    vertex: BUVertex
    island_in: int
    bridge_in: int
    island_out: int
    bridge_out: int


@dataclass(frozen=True, eq=False)
class BlowUpGraph:
    graph: RotationTailedGraph
    island_offsets: Dict[str, int]
    island_arcs: Tuple[BlowUpArc, ...]
    bridge_arcs: Tuple[BlowUpArc, ...]

    @property
    def num_islands(self) -> int:
        return len(self.island_arcs)

    @property
    def num_arcs(self) -> int:
        return len(self.island_arcs) + len(self.bridge_arcs)

    @cached_property
    def vertices(self) -> Tuple[BUVertex, ...]:
        g = self.graph
        return tuple((u, x) for u in g.vertices for x in g.rotation[u])

    @property
    def boundary_vertices(self) -> Tuple[BUVertex, ...]:
        return tuple((u, TAIL) for u in self.graph.boundary)

    def arc(self, index: int) -> BlowUpArc:
        if index < self.num_islands:
            return self.island_arcs[index]
        return self.bridge_arcs[index - self.num_islands]

    def island_out_of(self, u: str, slot: str) -> int:
        """Global index of the island arc leaving ``(u, slot)``."""
        return self.island_offsets[u] + self.graph.rotation[u].index(slot)

    def island_into(self, u: str, slot: str) -> int:
        rot = self.graph.rotation[u]
        return self.island_offsets[u] + (rot.index(slot) - 1) % len(rot)

    def island(self, u: str) -> range:
        start = self.island_offsets[u]
        return range(start, start + len(self.graph.rotation[u]))

    def bridge(self, arc: Arc) -> int:
        try:
            return self.num_islands + self.graph.arc_index[arc]
        except KeyError:
            raise PreconditionError(f"{arc} is not an arc of the graph") from None

    @cached_property
    def quays(self) -> Tuple[Quay, ...]:
        """One quay per boundary vertex, in boundary order."""
        return tuple(
            Quay(
                vertex=u,
                xi_out=self.island_into(u, TAIL),
                xi_in=self.island_out_of(u, TAIL),
            )
            for u in self.graph.boundary
        )

    @cached_property
    def quay_index(self) -> Dict[str, int]:
        return {q.vertex: i for i, q in enumerate(self.quays)}

    @cached_property
    def junctions(self) -> Tuple[Junction, ...]:
        out = []
        for u, x in self.vertices:
            if x == TAIL:
                continue
            out.append(
                Junction(
                    vertex=(u, x),
                    island_in=self.island_into(u, x),
                    bridge_in=self.bridge((x, u)),
                    island_out=self.island_out_of(u, x),
                    bridge_out=self.bridge((u, x)),
                )
            )
        return tuple(out)

    def is_quay_arc(self, index: int) -> bool:
        return any(index in (q.xi_out, q.xi_in) for q in self.quays)


def blow_up(g: RotationTailedGraph) -> BlowUpGraph:
    offsets: Dict[str, int] = {}
    islands: List[BlowUpArc] = []
    for u in g.vertices:
        offsets[u] = len(islands)
        rot = g.rotation[u]
        for i, x in enumerate(rot):
            islands.append(
                BlowUpArc(
                    kind=ISLAND,
                    index=len(islands),
                    tail=(u, x),
                    head=(u, rot[(i + 1) % len(rot)]),
                )
            )
    bridges = tuple(
        BlowUpArc(kind=BRIDGE, index=i, tail=(u, v), head=(v, u), origin=(u, v))
        for i, (u, v) in enumerate(g.arcs)
    )
    bu = BlowUpGraph(
        graph=g,
        island_offsets=offsets,
        island_arcs=tuple(islands),
        bridge_arcs=bridges,
    )
    logger.info(
        "Blow-up: |V|=%d island arcs=%d bridges=%d quays=%d",
        len(bu.vertices),
        len(islands),
        len(bridges),
        len(bu.quays),
    )
    return bu


def face_arcs(bu: BlowUpGraph, f: FacialWalk) -> List[int]:
    """
    The facial walk as a closed walk in G^BU: each bridge followed by the
    island arc(s) of the turn at its head. A turn through a tail contributes
    the quay pair (xi_out, xi_in).
    """
    g = bu.graph
    quay_turns = set(f.quay_positions)
    out: List[int] = []
    for j, (u, v) in enumerate(f.arcs):
        if (u, v) not in g.arc_index:
            raise PreconditionError(f"face arc {(u, v)} does not belong to this graph")
        out.append(bu.bridge((u, v)))
        if j in quay_turns:
            out.append(bu.island_out_of(v, u))
            out.append(bu.island_out_of(v, TAIL))
        else:
            out.append(bu.island_out_of(v, u))

    for k, idx in enumerate(out):
        nxt = bu.arc(out[(k + 1) % len(out)])
        if bu.arc(idx).head != nxt.tail:
            raise PreconditionError("face does not match the rotation of this graph")
    return out


def degree_audit(bu: BlowUpGraph) -> Dict[BUVertex, Tuple[int, int]]:
    """(in, out) degree of every blow-up vertex, tail attachments included."""
    deg: Dict[BUVertex, List[int]] = {v: [0, 0] for v in bu.vertices}
    for a in bu.island_arcs + bu.bridge_arcs:
        deg[a.tail][1] += 1
        deg[a.head][0] += 1
    for v in bu.boundary_vertices:
        deg[v][0] += 1
        deg[v][1] += 1
    return {v: (d[0], d[1]) for v, d in deg.items()}


def _fmt(v: BUVertex) -> str:
    return f"({v[0]},{v[1]})"


def dump_blowup(bu: BlowUpGraph) -> str:
    lines = []
    for a in bu.island_arcs:
        lines.append(f"island {a.index} : {_fmt(a.tail)} -> {_fmt(a.head)}")
    for a in bu.bridge_arcs:
        lines.append(f"bridge {a.index} : {_fmt(a.tail)} -> {_fmt(a.head)}")
    for q in bu.quays:
        lines.append(f"quay {q.vertex} : out island {q.xi_out} in island {q.xi_in}")
    for v in bu.boundary_vertices:
        lines.append(f"pier {_fmt(v)}")
    return "\n".join(lines) + "\n"


__all__ = [
    "BUVertex",
    "BlowUpArc",
    "BlowUpGraph",
    "Junction",
    "Quay",
    "blow_up",
    "face_arcs",
    "degree_audit",
    "dump_blowup",
]
