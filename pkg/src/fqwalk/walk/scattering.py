"""
Scattering matrix of the facial walk: a direct sum of one block per external
face. For a face with quays l_0..l_{k-1} and gaps delta_m,

    (P h)(m) = omega^{delta_{m-1}} h(m-1),   S_f = bc P (I - aP)^{-1} + d I.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from ..config import DEFAULT_SUPPORT_THRESHOLD
from ..core.blowup import BlowUpGraph
from ..core.coin import Coin, omega_is_one
from ..core.rotation_graph import FacialWalk
from ..errors import InvariantError, PreconditionError

logger = logging.getLogger(__name__)

_COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class ScatteringBlock:
    face_index: int
    quays: Tuple[str, ...]
    gaps: Tuple[int, ...]
    matrix: NDArray[np.complex128]


@dataclass(frozen=True, eq=False)
class ScatteringMatrix:
    blocks: Tuple[ScatteringBlock, ...]
    quay_order: Tuple[str, ...]

    def dense(self) -> NDArray[np.complex128]:
        """S in the global quay order (boundary declaration order)."""
        pos = {v: i for i, v in enumerate(self.quay_order)}
        k = len(self.quay_order)
        s = np.zeros((k, k), dtype=np.complex128)
        for blk in self.blocks:
            idx = [pos[v] for v in blk.quays]
            s[np.ix_(idx, idx)] = blk.matrix
        return s

    def apply(self, alpha: Sequence[complex]) -> NDArray[np.complex128]:
        alpha = np.asarray(alpha, dtype=np.complex128)
        if alpha.shape != (len(self.quay_order),):
            raise PreconditionError(
                f"inflow has length {alpha.size}, expected {len(self.quay_order)}"
            )
        return self.dense() @ alpha

    def unitarity_residual(self) -> float:
        s = self.dense()
        return float(np.abs(s @ s.conj().T - np.eye(s.shape[0])).max())

    @property
    def block_sizes(self) -> Tuple[int, ...]:
        return tuple(len(b.quays) for b in self.blocks)


def quay_cycle_matrix(gaps: Sequence[int], omega: complex) -> NDArray[np.complex128]:
    """P_f(omega): P[m, m-1] = omega^{delta_{m-1}}."""
    k = len(gaps)
    p = np.zeros((k, k), dtype=np.complex128)
    for m in range(k):
        p[m, (m - 1) % k] = omega ** gaps[(m - 1) % k]
    return p


def _require_external(f: FacialWalk) -> None:
    if not f.is_external:
        raise PreconditionError("scattering needs an external face")


def scattering_block(f: FacialWalk, coin: Coin) -> NDArray[np.complex128]:
    _require_external(f)
    k = f.kappa
    p = quay_cycle_matrix(f.gaps, coin.omega)
    a_mat = np.eye(k) - coin.a * p
    if np.linalg.cond(a_mat) > _COND_LIMIT:
        raise InvariantError("I - aP is numerically singular")
    # P commutes with (I - aP)
    return coin.b * coin.c * np.linalg.solve(a_mat, p) + coin.d * np.eye(k)


def series_block(f: FacialWalk, coin: Coin) -> NDArray[np.complex128]:
    """bc / (1 - a^k Delta) * P * sum_{j<k} (aP)^j + d I, with P^k = Delta I."""
    _require_external(f)
    k = f.kappa
    p = quay_cycle_matrix(f.gaps, coin.omega)
    delta = coin.omega ** f.length
    acc = np.zeros((k, k), dtype=np.complex128)
    term = np.eye(k, dtype=np.complex128)
    for _ in range(k):
        acc += term
        term = coin.a * p @ term
    return coin.b * coin.c / (1 - coin.a**k * delta) * (p @ acc) + coin.d * np.eye(k)


def scattering_matrix(
    bu: BlowUpGraph, faces: Sequence[FacialWalk], coin: Coin
) -> ScatteringMatrix:
    blocks = tuple(
        ScatteringBlock(
            face_index=i,
            quays=f.quays,
            gaps=f.gaps,
            matrix=scattering_block(f, coin),
        )
        for i, f in enumerate(faces)
        if f.is_external
    )
    if not blocks:
        raise PreconditionError("graph has no external face, so no scattering")
    order = tuple(q.vertex for q in bu.quays)
    if sum(len(b.quays) for b in blocks) != len(order):
        raise InvariantError("block sizes do not add up to the number of tails")
    logger.info("Scattering matrix: blocks of sizes %s", [len(b.quays) for b in blocks])
    return ScatteringMatrix(blocks=blocks, quay_order=order)


@dataclass(frozen=True, eq=False)
class DetectionResult:
    """
    Outflow for a unit inflow at ``source``. ``support`` is where the outflow
    is numerically nonzero; ``block`` lists the tails on the source's
    external face, whose count ``n_detected`` identifies the embedding.
    """

    source: str
    outflow: Dict[str, complex]
    support: FrozenSet[str]
    block: Tuple[str, ...]

    @property
    def n_detected(self) -> int:
        return len(self.block)

    @property
    def silent(self) -> FrozenSet[str]:
        """Tails on the source's face whose outflow vanishes anyway."""
        return frozenset(self.block) - self.support


def detect_embedding(
    bu: BlowUpGraph,
    faces: Sequence[FacialWalk],
    coin: Coin,
    source: str,
    threshold: float = DEFAULT_SUPPORT_THRESHOLD,
) -> DetectionResult:
    if source not in bu.quay_index:
        raise PreconditionError(f"vertex {source} does not carry a tail")
    if not omega_is_one(coin):
        logger.warning("detection with omega != 1; the embedding table assumes omega = 1")
    sm = scattering_matrix(bu, faces, coin)
    alpha = np.zeros(len(sm.quay_order), dtype=np.complex128)
    alpha[bu.quay_index[source]] = 1.0
    beta = sm.apply(alpha)
    outflow = {v: complex(beta[i]) for i, v in enumerate(sm.quay_order)}
    block: List[str] = []
    for blk in sm.blocks:
        if source in blk.quays:
            block = list(blk.quays)
    return DetectionResult(
        source=source,
        outflow=outflow,
        support=frozenset(v for v, z in outflow.items() if abs(z) > threshold),
        block=tuple(block),
    )


EMBEDDING_BY_DETECTED = {4: "[10,4,4]", 2: "[6,6,6]", 6: "[18]"}


def k33_verdict(result: DetectionResult) -> str:
    """Embedding type of the K3,3 tail placements from the detected count."""
    return EMBEDDING_BY_DETECTED.get(result.n_detected, "unknown")
