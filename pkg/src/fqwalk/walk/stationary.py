"""
Facial functions and the stationary state.

The stationary state is the sum of the external facial functions minus its
projection onto the span of the internal facial functions that are fixed by
the internal evolution (faces with omega^|f| = 1):

    psi = sum_ex gamma^ex - sum_f c_f gamma_f,   M c = <gamma_f, sum gamma^ex>.

Inner products are conjugate-linear in the first slot.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from ..config import DEFAULT_SUPPORT_THRESHOLD, ROOT_OF_UNITY_TOL
from ..core.blowup import BlowUpGraph
from ..core.coin import Coin, omega_is_one
from ..core.rotation_graph import TAIL, DualGraph, FacialWalk, dual_graph
from ..errors import InvariantError, PreconditionError
from .dynamics import EvolutionOperator
from .scattering import scattering_matrix

logger = logging.getLogger(__name__)

ComplexVector = NDArray[np.complex128]

METHODS = ("project", "gram")


@dataclass(frozen=True, eq=False)
class FacialFunction:
    """A facial function on A^BU; external ones also carry their tail values."""

    face_index: int
    face: FacialWalk
    values: ComplexVector
    inflow: ComplexVector
    outflow: ComplexVector

    @property
    def kind(self) -> str:
        return self.face.kind

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.values))


def _check_alpha(bu: BlowUpGraph, values, name: str) -> ComplexVector:
    arr = np.asarray(values, dtype=np.complex128).reshape(-1)
    if arr.shape[0] != len(bu.quays):
        raise PreconditionError(
            f"{name} has length {arr.shape[0]}, expected {len(bu.quays)}"
        )
    return arr


def internal_facial_function(
    bu: BlowUpGraph, f: FacialWalk, coin: Coin, face_index: int = -1
) -> FacialFunction:
    """Islands b w^j, bridges w^j, reverse bridges d w^j (superposed when shared)."""
    if f.is_external:
        raise PreconditionError("internal facial function needs an internal face")
    w, b, d = coin.omega, coin.b, coin.d
    values = np.zeros(bu.num_arcs, dtype=np.complex128)
    for j, (u, v) in enumerate(f.arcs):
        phase = w**j
        values[bu.bridge((u, v))] += phase
        values[bu.bridge((v, u))] += d * phase
        values[bu.island_out_of(v, u)] = b * phase
    zeros = np.zeros(len(bu.quays), dtype=np.complex128)
    return FacialFunction(face_index, f, values, zeros, zeros)


def external_facial_function(
    bu: BlowUpGraph,
    f: FacialWalk,
    coin: Coin,
    alpha: Sequence[complex],
    beta: Sequence[complex],
    face_index: int = -1,
) -> FacialFunction:
    """
    Pinned by eta_m = w^{-delta_m} (beta(l_{m+1}) - d alpha(l_{m+1})) / (bc):
    xi_in at quay m carries b eta_m, the k-th arc after it w^k eta_m (its
    reverse d w^k eta_m) and the island after it b w^k eta_m.
    """
    if not f.is_external:
        raise PreconditionError("external facial function needs an external face")
    alpha = _check_alpha(bu, alpha, "inflow")
    beta = _check_alpha(bu, beta, "outflow")
    w, b, c, d = coin.omega, coin.b, coin.c, coin.d
    s, k = f.length, f.kappa
    quays, gaps = f.quays, f.gaps
    qidx = [bu.quay_index[v] for v in quays]

    values = np.zeros(bu.num_arcs, dtype=np.complex128)
    for m in range(k):
        nxt = qidx[(m + 1) % k]
        eta = w ** (-gaps[m]) * (beta[nxt] - d * alpha[nxt]) / (b * c)
        values[bu.quays[qidx[m]].xi_in] = b * eta
        start = f.quay_positions[m]
        for step in range(1, gaps[m] + 1):
            u, v = f.arcs[(start + step) % s]
            phase = w**step * eta
            values[bu.bridge((u, v))] += phase
            values[bu.bridge((v, u))] += d * phase
            values[bu.island_out_of(v, u)] = b * phase

    inflow = np.zeros(len(bu.quays), dtype=np.complex128)
    outflow = np.zeros(len(bu.quays), dtype=np.complex128)
    inflow[qidx] = alpha[qidx]
    outflow[qidx] = beta[qidx]
    return FacialFunction(face_index, f, values, inflow, outflow)


def closure_residual(bu: BlowUpGraph, coin: Coin, fn: FacialFunction) -> float:
    """Sup-norm by which one step of the walk moves the function (tails included)."""
    op = EvolutionOperator.build(bu, coin)
    new, beta = op.apply(fn.values, fn.inflow)
    worst = float(np.abs(new - fn.values).max())
    return max(worst, float(np.abs(beta - fn.outflow).max(initial=0.0)))


def is_root_of_unity_face(f: FacialWalk, coin: Coin) -> bool:
    return abs(coin.omega ** f.length - 1.0) < ROOT_OF_UNITY_TOL


def kernel_faces(faces: Sequence[FacialWalk], coin: Coin) -> Tuple[int, ...]:
    """Internal faces whose facial function is fixed by the internal evolution."""
    return tuple(
        i
        for i, f in enumerate(faces)
        if not f.is_external and is_root_of_unity_face(f, coin)
    )


def gram_matrix(
    faces: Sequence[FacialWalk], dual: DualGraph, coin: Coin
) -> NDArray[np.float64]:
    """M[i, j] = 2d m_ij + 2|f_i| delta_ij over the internal faces (omega = 1)."""
    if not omega_is_one(coin):
        raise PreconditionError("the combinatorial Gram matrix needs omega = 1")
    external = [i for i, f in enumerate(faces) if f.is_external]
    if len(external) != 1:
        raise PreconditionError(
            f"the combinatorial Gram matrix needs one external face, got {len(external)}"
        )
    internal = [i for i, f in enumerate(faces) if not f.is_external]
    m = dual.multiplicity[np.ix_(internal, internal)].astype(float)
    lengths = np.array([faces[i].length for i in internal], dtype=float)
    return 2 * coin.d * m + 2 * np.diag(lengths)


def gram_matrix_direct(functions: Sequence[FacialFunction]) -> NDArray[np.complex128]:
    vecs = np.array([fn.values for fn in functions], dtype=np.complex128).reshape(
        len(functions), -1
    )
    return vecs.conj() @ vecs.T


@dataclass(frozen=True, eq=False)
class StationaryDecomposition:
    psi: ComplexVector
    faces: Tuple[FacialWalk, ...]
    external_parts: Tuple[FacialFunction, ...]
    kernel_parts: Tuple[FacialFunction, ...]
    coefficients: ComplexVector  # one per face, zero outside the kernel faces
    inflow: ComplexVector
    outflow: ComplexVector
    method: str

    @property
    def kernel(self) -> Tuple[int, ...]:
        return tuple(fn.face_index for fn in self.kernel_parts)

    @property
    def external_sum(self) -> ComplexVector:
        total = np.zeros_like(self.psi)
        for fn in self.external_parts:
            total += fn.values
        return total

    def orthogonality_residuals(self) -> Dict[int, float]:
        return {
            fn.face_index: abs(complex(np.vdot(fn.values, self.psi)))
            for fn in self.kernel_parts
        }


def stationary_state(
    bu: BlowUpGraph,
    faces: Sequence[FacialWalk],
    coin: Coin,
    alpha: Optional[Sequence[complex]] = None,
    method: str = "project",
    dual: Optional[DualGraph] = None,
) -> StationaryDecomposition:
    """
    ``project`` works for any omega and solves the Gram system of the kernel
    faces in the least-squares sense; ``gram`` uses the combinatorial Gram
    matrix and needs omega = 1 and a single external face.
    """
    if method not in METHODS:
        raise PreconditionError(f"unknown method {method!r}; use one of {METHODS}")
    k = len(bu.quays)
    alpha = np.zeros(k, dtype=np.complex128) if alpha is None else _check_alpha(
        bu, alpha, "inflow"
    )
    faces = tuple(faces)

    if any(f.is_external for f in faces):
        beta = scattering_matrix(bu, faces, coin).apply(alpha)
    else:
        beta = np.zeros(k, dtype=np.complex128)
    ext = tuple(
        external_facial_function(bu, f, coin, alpha, beta, face_index=i)
        for i, f in enumerate(faces)
        if f.is_external
    )
    psi_ex = np.zeros(bu.num_arcs, dtype=np.complex128)
    for fn in ext:
        psi_ex += fn.values

    kernel = kernel_faces(faces, coin)
    parts = tuple(internal_facial_function(bu, faces[i], coin, face_index=i) for i in kernel)
    coefficients = np.zeros(len(faces), dtype=np.complex128)
    psi = psi_ex.copy()
    if parts:
        rhs = np.array([np.vdot(fn.values, psi_ex) for fn in parts])
        if method == "gram":
            m = gram_matrix(faces, dual or dual_graph(bu.graph, faces), coin)
            c = np.linalg.solve(m, rhs)
        else:
            m = gram_matrix_direct(parts)
            c, *_ = np.linalg.lstsq(m, rhs, rcond=None)
        for fn, cf in zip(parts, c):
            coefficients[fn.face_index] = cf
            psi -= cf * fn.values
    logger.info(
        "Stationary state (%s): %d external faces, %d kernel faces",
        method,
        len(ext),
        len(parts),
    )
    return StationaryDecomposition(
        psi=psi,
        faces=faces,
        external_parts=ext,
        kernel_parts=parts,
        coefficients=coefficients,
        inflow=alpha,
        outflow=beta,
        method=method,
    )


def luminous_faces(
    dec: StationaryDecomposition, tol: float = DEFAULT_SUPPORT_THRESHOLD
) -> Tuple[int, ...]:
    """External faces plus internal faces with |c_f| > tol."""
    return tuple(
        i
        for i, f in enumerate(dec.faces)
        if f.is_external or abs(dec.coefficients[i]) > tol
    )


def face_islands(bu: BlowUpGraph, f: FacialWalk) -> Tuple[int, ...]:
    """Island arcs of the face, quay arcs excluded."""
    return tuple(bu.island_out_of(v, u) for u, v in f.arcs if bu.graph.successor(v, u) != TAIL)


def luminous_faces_from_support(
    bu: BlowUpGraph,
    dec: StationaryDecomposition,
    tol: float = DEFAULT_SUPPORT_THRESHOLD,
) -> Tuple[int, ...]:
    """External faces plus internal faces whose island arcs carry amplitude."""
    out = []
    for i, f in enumerate(dec.faces):
        if f.is_external:
            out.append(i)
            continue
        islands = list(face_islands(bu, f))
        if np.abs(dec.psi[islands]).max() > tol:
            out.append(i)
    return tuple(out)


def check_decomposition(
    dec: StationaryDecomposition, tol: float = 1e-8
) -> None:
    """Raise if psi is not orthogonal to the kernel faces."""
    worst = max(dec.orthogonality_residuals().values(), default=0.0)
    if worst > tol:
        raise InvariantError(f"stationary state not orthogonal to the kernel ({worst:.3e})")


__all__ = [
    "FacialFunction",
    "StationaryDecomposition",
    "internal_facial_function",
    "external_facial_function",
    "closure_residual",
    "kernel_faces",
    "gram_matrix",
    "gram_matrix_direct",
    "stationary_state",
    "luminous_faces",
    "luminous_faces_from_support",
    "face_islands",
    "check_decomposition",
]
