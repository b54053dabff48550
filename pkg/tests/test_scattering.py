import cmath
import math

import numpy as np
import pytest

from fqwalk.core.blowup import blow_up
from fqwalk.core.coin import make_coin
from fqwalk.core.rotation_graph import trace_faces
from fqwalk.errors import PreconditionError
from fqwalk.tools.builtin_graphs import builtin_names, load_graph
from fqwalk.walk.dynamics import fixed_point_solve
from fqwalk.walk.scattering import (
    detect_embedding,
    k33_verdict,
    quay_cycle_matrix,
    scattering_block,
    scattering_matrix,
    series_block,
)

from .strategies import seeded_coins


def _setup(name):
    g = load_graph(name)
    return blow_up(g), trace_faces(g)


def test_quay_cycle_matrix_power():
    w = cmath.exp(1j * math.pi / 5)
    gaps = (1, 5, 2)
    p = quay_cycle_matrix(gaps, w)
    np.testing.assert_allclose(
        np.linalg.matrix_power(p, 3), w ** sum(gaps) * np.eye(3), atol=1e-12
    )


def test_tetrahedron_scatters_uniform_inflow_to_itself(half_coin):
    bu, faces = _setup("tetrahedron")
    sm = scattering_matrix(bu, faces, half_coin)
    assert sm.block_sizes == (3,)
    np.testing.assert_allclose(sm.apply(np.ones(3)), np.ones(3), atol=1e-12)
    assert np.all(np.abs(sm.dense()) > 1e-6)


@pytest.mark.parametrize("name", builtin_names())
def test_scattering_is_unitary_and_matches_the_walk(name):
    bu, faces = _setup(name)
    alpha = np.exp(1j * np.arange(len(bu.quays)))
    for coin in seeded_coins(20):
        sm = scattering_matrix(bu, faces, coin)
        assert sm.unitarity_residual() < 1e-10
        beta = fixed_point_solve(bu, coin, alpha).outflow
        np.testing.assert_allclose(sm.apply(alpha), beta, atol=1e-9)


def test_series_form_agrees():
    for name in ("tetrahedron", "k33-6-6-6", "k33-18"):
        for f in (f for f in _setup(name)[1] if f.is_external):
            for coin in seeded_coins(5):
                np.testing.assert_allclose(
                    series_block(f, coin), scattering_block(f, coin), atol=1e-12
                )


def test_two_quay_even_face_has_no_reflection(half_coin):
    bu, faces = _setup("k33-6-6-6")
    for blk in scattering_matrix(bu, faces, half_coin).blocks:
        assert blk.matrix.shape == (2, 2)
        np.testing.assert_allclose(np.diag(blk.matrix), 0, atol=1e-12)


def test_external_face_required(tetrahedron, half_coin):
    closed = tetrahedron.tail_free()
    with pytest.raises(PreconditionError):
        scattering_matrix(blow_up(closed), trace_faces(closed), half_coin)
    with pytest.raises(PreconditionError):
        scattering_block(trace_faces(closed)[0], half_coin)


def test_inflow_length_is_checked(half_coin):
    bu, faces = _setup("tetrahedron")
    with pytest.raises(PreconditionError):
        scattering_matrix(bu, faces, half_coin).apply([1.0])


@pytest.mark.parametrize(
    "name, n, verdict",
    [("k33-10-4-4", 4, "[10,4,4]"), ("k33-6-6-6", 2, "[6,6,6]"), ("k33-18", 6, "[18]")],
)
def test_detection_identifies_the_embedding(name, n, verdict, half_coin):
    bu, faces = _setup(name)
    res = detect_embedding(bu, faces, half_coin, "1")
    assert res.n_detected == n
    assert k33_verdict(res) == verdict
    assert res.support <= set(res.block)


def test_hexagonal_embedding_support(half_coin, hexagon_coin):
    bu, faces = _setup("k33-6-6-6")
    at_one = detect_embedding(bu, faces, half_coin, "1")
    assert set(at_one.block) == {"1", "2'"}
    assert at_one.support == {"2'"}
    assert at_one.silent == {"1"}

    twisted = detect_embedding(bu, faces, hexagon_coin, "1")
    assert twisted.support == {"1", "2'"}
    assert not twisted.silent


def test_detection_needs_a_tail(half_coin):
    bu, faces = _setup("triangle-one-tail")
    with pytest.raises(PreconditionError, match="tail"):
        detect_embedding(bu, faces, half_coin, "b")
