"""
Time evolution of the facial quantum walk with constant inflow.

Tails are eliminated: a tail carries a constant amplitude ``alpha(u)`` into
its quay every step and takes away whatever leaves, so the internal state
obeys the affine iteration ``psi' = E psi + s`` with ``E`` the internal
evolution and ``s`` injecting ``b * alpha`` on the ``xi_in`` arcs. The
outflow is ``beta = c * psi(xi_out) + d * alpha``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from ..config import (
    DEFAULT_MAX_STEPS,
    DEFAULT_TOL,
    RANK_TOL,
    SOLVE_RESIDUAL_TOL,
)
from ..core.blowup import BlowUpGraph
from ..core.coin import Coin
from ..errors import InvariantError, PreconditionError

logger = logging.getLogger(__name__)

ComplexVector = NDArray[np.complex128]


def _indices(values) -> NDArray[np.intp]:
    return np.array(list(values), dtype=np.intp)


def _frozen(values, length: int, name: str) -> ComplexVector:
    arr = np.array(values, dtype=np.complex128).reshape(-1)
    if arr.shape[0] != length:
        raise PreconditionError(f"{name} has length {arr.shape[0]}, expected {length}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ArcState:
    """Internal amplitudes over A^BU plus tail inflow/outflow in quay order."""

    internal: ComplexVector
    inflow: ComplexVector
    outflow: ComplexVector

    @classmethod
    def create(
        cls,
        bu: BlowUpGraph,
        internal=None,
        inflow=None,
        outflow=None,
    ) -> "ArcState":
        n, k = bu.num_arcs, len(bu.quays)
        return cls(
            internal=_frozen(np.zeros(n) if internal is None else internal, n, "internal"),
            inflow=_frozen(np.zeros(k) if inflow is None else inflow, k, "inflow"),
            outflow=_frozen(np.zeros(k) if outflow is None else outflow, k, "outflow"),
        )

    def sup_diff(self, other: "ArcState") -> float:
        if self.internal.size == 0:
            return 0.0
        return float(np.abs(self.internal - other.internal).max())


@dataclass(frozen=True, eq=False)
class EvolutionOperator:
    """Index wiring of E for one blow-up graph and coin."""

    bu: BlowUpGraph
    coin: Coin
    island_in: NDArray[np.intp]
    bridge_in: NDArray[np.intp]
    island_out: NDArray[np.intp]
    bridge_out: NDArray[np.intp]
    quay_out: NDArray[np.intp]
    quay_in: NDArray[np.intp]

    @classmethod
    def build(cls, bu: BlowUpGraph, coin: Coin) -> "EvolutionOperator":
        js = bu.junctions
        return cls(
            bu=bu,
            coin=coin,
            island_in=_indices(j.island_in for j in js),
            bridge_in=_indices(j.bridge_in for j in js),
            island_out=_indices(j.island_out for j in js),
            bridge_out=_indices(j.bridge_out for j in js),
            quay_out=_indices(q.xi_out for q in bu.quays),
            quay_in=_indices(q.xi_in for q in bu.quays),
        )

    def apply(
        self, psi: ComplexVector, alpha: ComplexVector
    ) -> Tuple[ComplexVector, ComplexVector]:
        """One step: new internal amplitudes and the outflow emitted."""
        a, b, c, d = self.coin.a, self.coin.b, self.coin.c, self.coin.d
        new = np.zeros_like(psi)
        new[self.island_out] = a * psi[self.island_in] + b * psi[self.bridge_in]
        new[self.bridge_out] = c * psi[self.island_in] + d * psi[self.bridge_in]
        new[self.quay_in] = a * psi[self.quay_out] + b * alpha
        beta = c * psi[self.quay_out] + d * alpha
        return new, beta

    def matrix(self) -> NDArray[np.complex128]:
        """Dense E = chi U chi*."""
        a, b, c, d = self.coin.a, self.coin.b, self.coin.c, self.coin.d
        n = self.bu.num_arcs
        e = np.zeros((n, n), dtype=np.complex128)
        e[self.island_out, self.island_in] = a
        e[self.island_out, self.bridge_in] = b
        e[self.bridge_out, self.island_in] = c
        e[self.bridge_out, self.bridge_in] = d
        e[self.quay_in, self.quay_out] = a
        return e

    def source(self, alpha: ComplexVector) -> ComplexVector:
        s = np.zeros(self.bu.num_arcs, dtype=np.complex128)
        s[self.quay_in] = self.coin.b * alpha
        return s

    def outflow(self, psi: ComplexVector, alpha: ComplexVector) -> ComplexVector:
        return self.coin.c * psi[self.quay_out] + self.coin.d * alpha


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    state: ArcState
    steps: int
    converged: bool
    # (step, sup_diff, outflow_norm)
    history: List[Tuple[int, float, float]] = field(default_factory=list)


def _inflow(bu: BlowUpGraph, alpha: Optional[Sequence[complex]]) -> ComplexVector:
    k = len(bu.quays)
    if alpha is None:
        return np.zeros(k, dtype=np.complex128)
    return _frozen(alpha, k, "inflow")


def step(bu: BlowUpGraph, coin: Coin, s: ArcState) -> ArcState:
    op = EvolutionOperator.build(bu, coin)
    if s.internal.shape[0] != bu.num_arcs or s.inflow.shape[0] != len(bu.quays):
        raise PreconditionError("state is not indexed by this blow-up graph")
    new, beta = op.apply(s.internal, s.inflow)
    return ArcState.create(bu, new, s.inflow, beta)


def evolve(
    bu: BlowUpGraph,
    coin: Coin,
    alpha: Optional[Sequence[complex]] = None,
    tol: float = DEFAULT_TOL,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> EvolutionResult:
    """Iterate from the zero internal state until the sup-norm step difference is below ``tol``."""
    if not tol > 0:
        raise PreconditionError(f"tol must be positive, got {tol}")
    alpha = _inflow(bu, alpha)
    op = EvolutionOperator.build(bu, coin)
    psi = np.zeros(bu.num_arcs, dtype=np.complex128)
    beta = np.zeros(len(bu.quays), dtype=np.complex128)
    history: List[Tuple[int, float, float]] = []
    converged = False
    n = 0
    while n < max_steps:
        n += 1
        new, beta = op.apply(psi, alpha)
        diff = float(np.abs(new - psi).max()) if psi.size else 0.0
        psi = new
        history.append((n, diff, float(np.linalg.norm(beta))))
        if n % 1000 == 0:
            logger.debug("step %d: sup diff %.3e", n, diff)
        if diff < tol:
            converged = True
            break
    if converged:
        logger.info("Evolution converged after %d steps", n)
    elif max_steps > 0:
        logger.warning("Evolution did not converge in %d steps (tol=%g)", max_steps, tol)
    state = ArcState.create(bu, psi, alpha, beta)
    return EvolutionResult(state=state, steps=n, converged=converged, history=history)


def fixed_point_solve(
    bu: BlowUpGraph, coin: Coin, alpha: Optional[Sequence[complex]] = None
) -> ArcState:
    """
    Minimum-norm solution of (I - E) psi = s.

    I - E is singular exactly when some internal face f has omega^|f| = 1;
    the minimum-norm solution is orthogonal to that kernel and equals the
    limit of the evolution started from zero.
    """
    alpha = _inflow(bu, alpha)
    op = EvolutionOperator.build(bu, coin)
    n = bu.num_arcs
    a_mat = np.eye(n, dtype=np.complex128) - op.matrix()
    rhs = op.source(alpha)
    psi, _, rank, _ = np.linalg.lstsq(a_mat, rhs, rcond=RANK_TOL)
    residual = float(np.abs(a_mat @ psi - rhs).max()) if n else 0.0
    if residual > SOLVE_RESIDUAL_TOL:
        raise InvariantError(f"fixed-point solve residual {residual:.3e}")
    logger.info("Fixed-point solve: %d arcs, kernel dimension %d", n, n - rank)
    return ArcState.create(bu, psi, alpha, op.outflow(psi, alpha))


def kernel_dimension(bu: BlowUpGraph, coin: Coin) -> int:
    """Numerical dimension of ker(I - E)."""
    n = bu.num_arcs
    a_mat = np.eye(n, dtype=np.complex128) - EvolutionOperator.build(bu, coin).matrix()
    sv = np.linalg.svd(a_mat, compute_uv=False)
    return int(np.sum(sv <= RANK_TOL * max(sv.max(), 1.0)))


def fixed_point_residual(bu: BlowUpGraph, coin: Coin, s: ArcState) -> float:
    return step(bu, coin, s).sup_diff(s)


def key_lemma_residual(bu: BlowUpGraph, coin: Coin, psi: ComplexVector) -> float:
    """
    Largest violation over all bridges e = (u,v) -> (v,u) of

        psi(eps) = omega psi(e'),  psi(eps') = omega psi(e_is),
        psi(e_br) = (omega / b) (psi(e_is) + d psi(e'_is)),

    where e_is / eps are the island arcs into / out of (u, v) and e'_is /
    eps' those into / out of (v, u).
    """
    w, b, d = coin.omega, coin.b, coin.d
    worst = 0.0
    for arc in bu.bridge_arcs:
        u, v = arc.origin
        e_is, eps = bu.island_into(u, v), bu.island_out_of(u, v)
        e2_is, eps2 = bu.island_into(v, u), bu.island_out_of(v, u)
        br = bu.bridge((u, v))
        worst = max(
            worst,
            abs(psi[eps] - w * psi[e2_is]),
            abs(psi[eps2] - w * psi[e_is]),
            abs(psi[br] - (w / b) * (psi[e_is] + d * psi[e2_is])),
        )
    return float(worst)


def flux_residual(state: ArcState) -> float:
    """| ||beta|| - ||alpha|| |."""
    return abs(float(np.linalg.norm(state.outflow)) - float(np.linalg.norm(state.inflow)))
