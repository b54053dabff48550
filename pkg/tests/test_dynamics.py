import cmath
import math

import numpy as np
import pytest

from fqwalk.core.blowup import blow_up
from fqwalk.core.coin import make_coin
from fqwalk.tools.builtin_graphs import builtin_names, load_graph
from fqwalk.walk.dynamics import (
    ArcState,
    EvolutionOperator,
    evolve,
    fixed_point_residual,
    fixed_point_solve,
    flux_residual,
    kernel_dimension,
    key_lemma_residual,
    step,
)
from fqwalk.errors import PreconditionError

from .strategies import seeded_coins


def test_first_step_injects_inflow(tetra_bu, half_coin):
    alpha = np.array([1.0, 2.0, 3.0])
    s = step(tetra_bu, half_coin, ArcState.create(tetra_bu, inflow=alpha))
    expected = np.zeros(tetra_bu.num_arcs, dtype=complex)
    for q, x in zip(tetra_bu.quays, alpha):
        expected[q.xi_in] = half_coin.b * x
    np.testing.assert_allclose(s.internal, expected)
    np.testing.assert_allclose(s.outflow, half_coin.d * alpha)


def test_states_are_read_only(tetra_bu):
    s = ArcState.create(tetra_bu)
    with pytest.raises(ValueError):
        s.internal[0] = 1.0


def test_state_length_is_checked(tetra_bu):
    with pytest.raises(PreconditionError, match="inflow"):
        ArcState.create(tetra_bu, inflow=[1.0])


def test_matrix_matches_apply(tetra_bu):
    rng = np.random.default_rng(3)
    psi = rng.normal(size=tetra_bu.num_arcs) + 1j * rng.normal(size=tetra_bu.num_arcs)
    alpha = np.zeros(3, dtype=complex)
    for coin in seeded_coins(5):
        op = EvolutionOperator.build(tetra_bu, coin)
        new, _ = op.apply(psi, alpha)
        np.testing.assert_allclose(op.matrix() @ psi, new, atol=1e-12)


def test_walk_with_tails_conserves_norm(tetra_bu):
    rng = np.random.default_rng(11)
    psi = rng.normal(size=tetra_bu.num_arcs) + 1j * rng.normal(size=tetra_bu.num_arcs)
    alpha = rng.normal(size=3) + 1j * rng.normal(size=3)
    for coin in seeded_coins(10):
        new, beta = EvolutionOperator.build(tetra_bu, coin).apply(psi, alpha)
        before = np.linalg.norm(psi) ** 2 + np.linalg.norm(alpha) ** 2
        after = np.linalg.norm(new) ** 2 + np.linalg.norm(beta) ** 2
        assert after == pytest.approx(before, rel=1e-12)


def test_evolution_reaches_the_fixed_point(tetra_bu, half_coin):
    alpha = np.ones(3)
    result = evolve(tetra_bu, half_coin, alpha, tol=1e-12)
    assert result.converged
    assert len(result.history) == result.steps
    assert result.history[-1][1] < 1e-12
    solved = fixed_point_solve(tetra_bu, half_coin, alpha)
    np.testing.assert_allclose(result.state.internal, solved.internal, atol=1e-9)
    assert fixed_point_residual(tetra_bu, half_coin, solved) < 1e-10
    assert flux_residual(solved) < 1e-10


def test_evolution_step_limit(tetra_bu, half_coin):
    result = evolve(tetra_bu, half_coin, np.ones(3), max_steps=0)
    assert result.steps == 0
    assert not result.converged
    assert result.history == []

    capped = evolve(tetra_bu, half_coin, np.ones(3), tol=1e-15, max_steps=5)
    assert capped.steps == 5
    assert not capped.converged


def test_evolution_rejects_bad_tolerance(tetra_bu, half_coin):
    with pytest.raises(PreconditionError):
        evolve(tetra_bu, half_coin, tol=0.0)


def test_zero_inflow_stays_zero(tetra_bu, half_coin):
    result = evolve(tetra_bu, half_coin)
    assert result.converged
    assert result.steps == 1
    assert not result.state.internal.any()


@pytest.mark.parametrize(
    "omega, expected",
    [
        (1.0, 3),
        (cmath.exp(2j * math.pi / 3), 3),
        (cmath.exp(1j * math.pi / 3), 0),
    ],
)
def test_kernel_is_spanned_by_resonant_internal_faces(tetra_bu, omega, expected):
    assert kernel_dimension(tetra_bu, make_coin(0.5, omega)) == expected


def test_key_relations_hold_at_the_fixed_point():
    for name in ("tetrahedron", "k33-10-4-4", "k33-6-6-6", "k33-18"):
        bu = blow_up(load_graph(name))
        alpha = np.linspace(1.0, 2.0, len(bu.quays))
        for coin in seeded_coins(4, seed=len(name)):
            s = fixed_point_solve(bu, coin, alpha)
            assert key_lemma_residual(bu, coin, s.internal) < 1e-9
            assert flux_residual(s) < 1e-9


@pytest.mark.parametrize("name", builtin_names())
def test_evolution_agrees_with_the_solver_or_says_it_did_not_converge(name):
    tol = 1e-12
    bu = blow_up(load_graph(name))
    alpha = np.linspace(1.0, 2.0, len(bu.quays)) + 0.25j
    # the soccer ball's slowest decaying mode sits within ~1e-7 of the unit circle
    max_steps = 2_000 if name == "truncated-icosahedron" else 50_000
    for coin in seeded_coins(20, seed=7):
        result = evolve(bu, coin, alpha, tol=tol, max_steps=max_steps)
        solved = fixed_point_solve(bu, coin, alpha)
        if result.converged:
            assert result.history[-1][1] < tol
            np.testing.assert_allclose(result.state.internal, solved.internal, atol=1e-8)
            np.testing.assert_allclose(result.state.outflow, solved.outflow, atol=1e-8)
        else:
            assert result.steps == max_steps
            assert all(diff >= tol for _, diff, _ in result.history)
