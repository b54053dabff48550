"""
Rotation tailed graphs: a connected simple graph, a rotation system and the
placement of boundary tails inside each vertex's cyclic order.

Convention used everywhere: the rotation list at ``u`` is read in its forward
cyclic order ``rho_u``, and the facial successor of the arc ``u -> v`` is
``v -> rho_v(u)``. When ``rho_v(u)`` is the tail slot the walk goes out along
the tail and straight back in, so the successor becomes ``v -> rho_v(TAIL)``
and the turn is recorded as a quay visit.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import networkx as nx
import numpy as np

from ..errors import GraphFormatError, GraphValidationError, InvariantError

logger = logging.getLogger(__name__)

TAIL = "*"

Arc = Tuple[str, str]

_COMMENT = re.compile(r"(^|\s)#.*$")
_VERTEX_LINE = re.compile(r"^vertex\s+(\S+?)\s*:\s*(.*)$")


def reverse(arc: Arc) -> Arc:
    return (arc[1], arc[0])


@dataclass(frozen=True)
class RotationTailedGraph:
    """The triple (G; boundary; rotation). Build it with ``build_rotation_graph``."""

    vertices: Tuple[str, ...]
    rotation: Mapping[str, Tuple[str, ...]]

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def boundary(self) -> Tuple[str, ...]:
        """Vertices carrying a tail, in declaration order."""
        return tuple(v for v in self.vertices if TAIL in self.rotation[v])

    @cached_property
    def arcs(self) -> Tuple[Arc, ...]:
        """All arcs, sorted by (origin, terminus) declaration index."""
        idx = self.vertex_index
        out = [(u, v) for u in self.vertices for v in self.neighbors(u)]
        return tuple(sorted(out, key=lambda a: (idx[a[0]], idx[a[1]])))

    @cached_property
    def arc_index(self) -> Dict[Arc, int]:
        return {a: i for i, a in enumerate(self.arcs)}

    @property
    def num_edges(self) -> int:
        return len(self.arcs) // 2

    @property
    def betti_number(self) -> int:
        return self.num_edges - len(self.vertices) + 1

    def neighbors(self, u: str) -> Tuple[str, ...]:
        return tuple(x for x in self.rotation[u] if x != TAIL)

    def degree(self, u: str) -> int:
        return len(self.rotation[u]) - (1 if TAIL in self.rotation[u] else 0)

    def successor(self, u: str, x: str) -> str:
        """rho_u(x): the slot after ``x`` in the cyclic order at ``u``."""
        rot = self.rotation[u]
        return rot[(rot.index(x) + 1) % len(rot)]

    def predecessor(self, u: str, x: str) -> str:
        rot = self.rotation[u]
        return rot[(rot.index(x) - 1) % len(rot)]

    def tail_free(self) -> "RotationTailedGraph":
        """Same rotation with every TAIL slot removed."""
        return RotationTailedGraph(
            vertices=self.vertices,
            rotation={u: self.neighbors(u) for u in self.vertices},
        )

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((u, v) for u, v in self.arcs)
        return g


@dataclass(frozen=True)
class FacialWalk:
    """
    One orbit of the facial successor map.

    ``arcs`` are the arcs of G in traversal order starting from the smallest
    one. ``quay_positions`` holds every ``j`` such that the turn after
    ``arcs[j]`` passes the tail at the terminus of ``arcs[j]``.
    """

    arcs: Tuple[Arc, ...]
    quay_positions: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def kind(self) -> str:
        return "external" if self.quay_positions else "internal"

    @property
    def is_external(self) -> bool:
        return bool(self.quay_positions)

    @property
    def length(self) -> int:
        """|f|_G, the number of arcs of G in the walk."""
        return len(self.arcs)

    @property
    def kappa(self) -> int:
        return len(self.quay_positions)

    @property
    def quays(self) -> Tuple[str, ...]:
        """Boundary vertices visited, in traversal order."""
        return tuple(self.arcs[j][1] for j in self.quay_positions)

    @property
    def gaps(self) -> Tuple[int, ...]:
        """delta_m: arcs walked from quay m to quay m+1, cyclically."""
        pos, s = self.quay_positions, len(self.arcs)
        k = len(pos)
        if k == 1:
            return (s,)
        return tuple((pos[(m + 1) % k] - pos[m]) % s for m in range(k))

    @property
    def vertex_sequence(self) -> Tuple[str, ...]:
        return tuple(a[0] for a in self.arcs)

    @cached_property
    def arc_set(self) -> frozenset:
        return frozenset(self.arcs)


@dataclass(frozen=True, eq=False)
class DualGraph:
    """Faces as vertices; ``multiplicity[i, j]`` counts arcs e of face i with reversed e in face j."""

    faces: Tuple[FacialWalk, ...]
    multiplicity: np.ndarray

    def degree(self, i: int) -> int:
        return int(self.multiplicity[i].sum())

    def self_multiplicity(self, i: int) -> int:
        return int(self.multiplicity[i, i])

    @property
    def external_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.faces) if f.is_external)

    @property
    def internal_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.faces) if not f.is_external)

    def to_networkx(self) -> nx.MultiGraph:
        """One edge per reversed arc pair; a face meeting itself gets self-loops."""
        g = nx.MultiGraph()
        g.add_nodes_from(range(len(self.faces)))
        p = len(self.faces)
        for i in range(p):
            for j in range(i, p):
                count = self.multiplicity[i, j]
                if i == j:
                    count //= 2
                for _ in range(int(count)):
                    g.add_edge(i, j)
        return g


def build_rotation_graph(rotation: Mapping[str, Sequence[str]]) -> RotationTailedGraph:
    """Validate a rotation mapping (insertion order = vertex order) and freeze it."""
    vertices = tuple(str(v) for v in rotation)
    rot = {str(u): tuple(str(x) for x in rotation[u]) for u in rotation}
    vset = set(vertices)
    if len(vertices) < 2:
        raise GraphValidationError("graph needs at least two vertices")

    for u, slots in rot.items():
        tails = slots.count(TAIL)
        if tails > 1:
            raise GraphValidationError(f"vertex {u} has {tails} tail slots")
        nbrs = [x for x in slots if x != TAIL]
        if not nbrs:
            raise GraphValidationError(f"vertex {u} has no neighbours")
        if u in nbrs:
            raise GraphValidationError(f"self-loop at vertex {u}")
        if len(set(nbrs)) != len(nbrs):
            raise GraphValidationError(f"repeated neighbour at vertex {u}")
        for x in nbrs:
            if x not in vset:
                raise GraphValidationError(f"vertex {u} lists undeclared neighbour {x}")
            if u not in rot[x]:
                raise GraphValidationError(
                    f"edge {u}-{x} is not reciprocated by vertex {x}"
                )

    g = RotationTailedGraph(vertices=vertices, rotation=rot)
    if not nx.is_connected(g.to_networkx()):
        raise GraphValidationError("graph is not connected")
    return g


def parse_rotation_graph(text: str) -> RotationTailedGraph:
    rotation: Dict[str, List[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _COMMENT.sub("", raw).strip()
        if not line:
            continue
        m = _VERTEX_LINE.match(line)
        if not m:
            raise GraphFormatError(f"expected 'vertex <id> : <slots>', got {raw!r}", lineno)
        vid, slots = m.group(1), m.group(2).split()
        if vid == TAIL:
            raise GraphFormatError("'*' is reserved for the tail slot", lineno)
        if vid in rotation:
            raise GraphFormatError(f"vertex {vid} declared twice", lineno)
        rotation[vid] = slots
    if not rotation:
        raise GraphFormatError("no vertex lines found")
    g = build_rotation_graph(rotation)
    logger.info(
        "Parsed graph: |V|=%d |A|=%d |boundary|=%d",
        len(g.vertices),
        len(g.arcs),
        len(g.boundary),
    )
    return g


def format_rotation_graph(g: RotationTailedGraph) -> str:
    return "".join(
        f"vertex {u} : {' '.join(g.rotation[u])}\n" for u in g.vertices
    )


def facial_successor(g: RotationTailedGraph, arc: Arc) -> Tuple[Arc, bool]:
    """Next arc of the facial walk and whether the turn passed a tail."""
    u, v = arc
    nxt = g.successor(v, u)
    if nxt == TAIL:
        return (v, g.successor(v, TAIL)), True
    return (v, nxt), False


def trace_faces(g: RotationTailedGraph) -> List[FacialWalk]:
    """
    Orbit decomposition of the arc set under the facial successor.

    Arcs are scanned in canonical order, so every walk starts at its smallest
    arc and the walks come out sorted by that arc.
    """
    seen = set()
    faces: List[FacialWalk] = []
    for start in g.arcs:
        if start in seen:
            continue
        arcs: List[Arc] = []
        quays: List[int] = []
        arc = start
        while True:
            seen.add(arc)
            arcs.append(arc)
            arc, crossed = facial_successor(g, arc)
            if crossed:
                quays.append(len(arcs) - 1)
            if arc == start:
                break
            if arc in seen:
                raise InvariantError(f"facial successor is not a permutation at {arc}")
        faces.append(FacialWalk(arcs=tuple(arcs), quay_positions=tuple(quays)))
    logger.debug("Traced %d faces with lengths %s", len(faces), [f.length for f in faces])
    return faces


def genus(g: RotationTailedGraph) -> int:
    """Genus of the closed surface, from the tail-free rotation."""
    r = len(trace_faces(g.tail_free()))
    twice = g.betti_number - r + 1
    if twice < 0 or twice % 2:
        raise InvariantError(
            f"b1 - r + 1 = {twice} is not a non-negative even number"
        )
    return twice // 2


def dual_graph(g: RotationTailedGraph, faces: Sequence[FacialWalk]) -> DualGraph:
    face_of: Dict[Arc, int] = {}
    for i, f in enumerate(faces):
        for a in f.arcs:
            face_of[a] = i
    missing = set(g.arcs) - set(face_of)
    if missing:
        raise InvariantError(f"faces do not cover arcs {sorted(missing)[:3]}")
    p = len(faces)
    m = np.zeros((p, p), dtype=int)
    for i, f in enumerate(faces):
        for a in f.arcs:
            m[i, face_of[reverse(a)]] += 1
    return DualGraph(faces=tuple(faces), multiplicity=m)


def attach_tails(g: RotationTailedGraph, face: FacialWalk) -> RotationTailedGraph:
    """
    Put a tail at every vertex the walk turns through, in the slot right
    after the incoming neighbour. The walk becomes external with unit gaps.
    """
    rotation: Dict[str, List[str]] = {u: list(g.rotation[u]) for u in g.vertices}
    visited = set()
    for u, v in face.arcs:
        if v in visited:
            raise GraphValidationError(f"walk visits vertex {v} twice")
        visited.add(v)
        if TAIL in rotation[v]:
            raise GraphValidationError(f"vertex {v} already carries a tail")
        slots = rotation[v]
        slots.insert(slots.index(u) + 1, TAIL)
    return build_rotation_graph(rotation)


def orbit_lengths(faces: Iterable[FacialWalk]) -> List[int]:
    return sorted((f.length for f in faces), reverse=True)
