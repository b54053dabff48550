"""
Pointed dual graph and the spanning-subgraph expansion of the inverse Gram
matrix.

The pointed dual has the internal faces plus the external face f* (the sink)
as vertices, one simple edge per adjacent pair with weight -2d m, and one
potential self-loop of weight 2(1+d) deg(u) at every vertex but the sink.
Then

    M^{-1}[f, g] = iota_2(f, g) / iota_1,

where iota_1 sums edge-weight products over H1 (the sink component is a
tree, every other component is a tree plus exactly one loop) and iota_2
over H2(f, g) (like H1 except that a second loop-free tree holds f and g).

Enumeration is brute force over edge subsets; it does not touch linear
algebra so it can check the Gram matrix independently.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from networkx.utils import UnionFind
from numpy.typing import NDArray

from ..config import MAX_ENUMERATION_EDGES
from ..core.blowup import BlowUpGraph
from ..core.coin import Coin, omega_is_one
from ..core.rotation_graph import DualGraph, FacialWalk
from ..errors import InvariantError, PreconditionError
from ..walk.stationary import external_facial_function, internal_facial_function
from ..walk.scattering import scattering_matrix

logger = logging.getLogger(__name__)

H1 = "H1"
H2 = "H2"


@dataclass(frozen=True)
class DualEdge:
    ends: Tuple[int, int]
    multiplicity: int
    weight: float

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]


@dataclass(frozen=True)
class PointedDual:
    """Vertex ``i`` is face ``face_indices[i]``; the last vertex is the sink."""

    face_indices: Tuple[int, ...]
    edges: Tuple[DualEdge, ...]

    @property
    def num_vertices(self) -> int:
        return len(self.face_indices)

    @property
    def sink(self) -> int:
        return self.num_vertices - 1

    @property
    def ordinary_edges(self) -> Tuple[DualEdge, ...]:
        return tuple(e for e in self.edges if not e.is_loop)

    @property
    def loops(self) -> Tuple[DualEdge, ...]:
        return tuple(e for e in self.edges if e.is_loop)

    def vertex_of_face(self, face_index: int) -> int:
        return self.face_indices.index(face_index)


@dataclass(frozen=True)
class SpanningSubgraph:
    edges: Tuple[int, ...]
    weight: float
    components: Tuple[FrozenSet[int], ...]
    loops: Tuple[int, ...]  # loop count per component

    def loops_in(self, vertex: int) -> int:
        for comp, n in zip(self.components, self.loops):
            if vertex in comp:
                return n
        raise KeyError(vertex)

    def component_of(self, vertex: int) -> FrozenSet[int]:
        for comp in self.components:
            if vertex in comp:
                return comp
        raise KeyError(vertex)


@dataclass(frozen=True)
class SubgraphFamilyWeight:
    family: str
    weight: float
    count: int


def pointed_dual(dual: DualGraph, sink: int, coin: Coin) -> PointedDual:
    if dual.external_indices != (sink,):
        raise PreconditionError(
            "the forest expansion needs exactly one external face, used as the sink; "
            f"external faces are {dual.external_indices}"
        )
    f_star = dual.faces[sink]
    if f_star.kappa != f_star.length:
        logger.warning("sink face does not carry a tail at every vertex")
    if not omega_is_one(coin):
        logger.info("pointed dual weights only use d; the Gram identity assumes omega = 1")

    order = dual.internal_indices + (sink,)
    d = coin.d
    m = dual.multiplicity
    edges: List[DualEdge] = []
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            mult = int(m[order[i], order[j]])
            if mult:
                edges.append(DualEdge((i, j), mult, -2 * d * mult))
    for i, face in enumerate(order[:-1]):
        deg = dual.degree(face)
        if deg != dual.faces[face].length:
            raise InvariantError(f"dual degree {deg} != face length at face {face}")
        edges.append(DualEdge((i, i), 1, 2 * (1 + d) * deg))
    return PointedDual(face_indices=order, edges=tuple(edges))


def _classify(pd: PointedDual, chosen: Sequence[int]) -> Optional[SpanningSubgraph]:
    """Components and loop counts, or None if some component holds an ordinary cycle."""
    uf = UnionFind(range(pd.num_vertices))
    loop_at: List[int] = []
    weight = 1.0
    for idx in chosen:
        e = pd.edges[idx]
        weight *= e.weight
        i, j = e.ends
        if e.is_loop:
            loop_at.append(i)
            continue
        if uf[i] == uf[j]:
            return None
        uf.union(i, j)
    comps = sorted((frozenset(c) for c in uf.to_sets()), key=min)
    counts: Dict[int, int] = {}
    for v in loop_at:
        counts[uf[v]] = counts.get(uf[v], 0) + 1
    return SpanningSubgraph(
        edges=tuple(chosen),
        weight=weight,
        components=tuple(comps),
        loops=tuple(counts.get(uf[min(c)], 0) for c in comps),
    )


def enumerate_subgraphs(pd: PointedDual) -> Iterator[SpanningSubgraph]:
    """Every spanning subgraph whose components are trees or trees plus loops."""
    n = len(pd.edges)
    if n > MAX_ENUMERATION_EDGES:
        raise PreconditionError(
            f"pointed dual has {n} edges; brute force stops at {MAX_ENUMERATION_EDGES}"
        )
    for mask in range(1 << n):
        chosen = [i for i in range(n) if mask >> i & 1]
        sg = _classify(pd, chosen)
        if sg is not None:
            yield sg


def in_h1(pd: PointedDual, sg: SpanningSubgraph) -> bool:
    return all(
        n == (0 if pd.sink in comp else 1) for comp, n in zip(sg.components, sg.loops)
    )


def _second_tree(pd: PointedDual, sg: SpanningSubgraph) -> Optional[FrozenSet[int]]:
    """The loop-free component without the sink, if the rest is H1-shaped."""
    second = None
    for comp, n in zip(sg.components, sg.loops):
        if pd.sink in comp:
            if n:
                return None
        elif n == 0:
            if second is not None:
                return None
            second = comp
        elif n != 1:
            return None
    return second


def in_h2(pd: PointedDual, sg: SpanningSubgraph, f: int, g: int) -> bool:
    tree = _second_tree(pd, sg)
    return tree is not None and f in tree and g in tree


def _check_internal(pd: PointedDual, *vertices: int) -> None:
    for v in vertices:
        if not 0 <= v < pd.sink:
            raise PreconditionError(f"vertex {v} is not an internal face of the pointed dual")


def enumerate_family_h1(pd: PointedDual) -> List[SpanningSubgraph]:
    return [sg for sg in enumerate_subgraphs(pd) if in_h1(pd, sg)]


def enumerate_family_h2(pd: PointedDual, f: int, g: int) -> List[SpanningSubgraph]:
    _check_internal(pd, f, g)
    return [sg for sg in enumerate_subgraphs(pd) if in_h2(pd, sg, f, g)]


def family_weight(
    pd: PointedDual, f: Optional[int] = None, g: Optional[int] = None
) -> SubgraphFamilyWeight:
    if f is None and g is None:
        members = enumerate_family_h1(pd)
        tag = H1
    else:
        f = g if f is None else f
        g = f if g is None else g
        members = enumerate_family_h2(pd, f, g)
        tag = H2
    return SubgraphFamilyWeight(
        family=tag, weight=float(sum(sg.weight for sg in members)), count=len(members)
    )


def iota(pd: PointedDual, f: Optional[int] = None, g: Optional[int] = None) -> float:
    """iota_1 without vertices, iota_2(f, g) with them."""
    return family_weight(pd, f, g).weight


def weight_class(pd: PointedDual, sg: SpanningSubgraph) -> Tuple[int, int]:
    """(ordinary edges, loops) of a subgraph."""
    loops = sum(1 for i in sg.edges if pd.edges[i].is_loop)
    return len(sg.edges) - loops, loops


def gram_inverse_combinatorial(pd: PointedDual) -> NDArray[np.float64]:
    """iota_2 / iota_1 for every pair of internal faces, in one pass."""
    n = pd.sink
    iota1 = 0.0
    iota2 = np.zeros((n, n))
    for sg in enumerate_subgraphs(pd):
        if in_h1(pd, sg):
            iota1 += sg.weight
            continue
        tree = _second_tree(pd, sg)
        if tree is not None:
            idx = sorted(tree)
            iota2[np.ix_(idx, idx)] += sg.weight
    scale = max(1.0, float(np.abs(iota2).max(initial=0.0)))
    if abs(iota1) <= 1e-14 * scale:
        raise PreconditionError("iota_1 vanishes for this coin; the ratio is undefined")
    logger.info("Forest expansion: iota_1 = %.12g", iota1)
    return iota2 / iota1


def stationary_from_forests(
    pd: PointedDual,
    bu: BlowUpGraph,
    faces: Sequence[FacialWalk],
    coin: Coin,
    alpha: Sequence[complex],
) -> NDArray[np.complex128]:
    """psi = (1 - sum_{l,m} (iota_2 / iota_1)[l, m] gamma_l gamma_m^*) gamma^ex."""
    if not omega_is_one(coin):
        raise PreconditionError("the forest expansion of the stationary state needs omega = 1")
    alpha = np.asarray(alpha, dtype=np.complex128)
    beta = scattering_matrix(bu, faces, coin).apply(alpha)
    sink = pd.face_indices[pd.sink]
    psi_ex = external_facial_function(bu, faces[sink], coin, alpha, beta).values
    gammas = np.array(
        [
            internal_facial_function(bu, faces[i], coin).values
            for i in pd.face_indices[:-1]
        ],
        dtype=np.complex128,
    ).reshape(pd.sink, -1)
    if pd.sink == 0:
        return psi_ex
    minv = gram_inverse_combinatorial(pd)
    overlaps = gammas.conj() @ psi_ex
    return psi_ex - gammas.T @ (minv @ overlaps)


__all__ = [
    "DualEdge",
    "PointedDual",
    "SpanningSubgraph",
    "SubgraphFamilyWeight",
    "pointed_dual",
    "enumerate_subgraphs",
    "enumerate_family_h1",
    "enumerate_family_h2",
    "family_weight",
    "iota",
    "weight_class",
    "gram_inverse_combinatorial",
    "stationary_from_forests",
]
