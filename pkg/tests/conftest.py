import cmath
import math

import pytest

from fqwalk.core.blowup import blow_up
from fqwalk.core.coin import make_coin
from fqwalk.core.rotation_graph import trace_faces
from fqwalk.tools.builtin_graphs import load_graph


@pytest.fixture
def tetrahedron():
    return load_graph("tetrahedron")


@pytest.fixture
def tetra_faces(tetrahedron):
    return trace_faces(tetrahedron)


@pytest.fixture
def tetra_bu(tetrahedron):
    return blow_up(tetrahedron)


@pytest.fixture
def half_coin():
    """d = 1/2, omega = 1, phi = 0."""
    return make_coin(0.5, 1.0)


@pytest.fixture
def hexagon_coin():
    return make_coin(0.5, cmath.exp(1j * math.pi / 3))


@pytest.fixture(scope="session")
def soccer_ball():
    return load_graph("truncated-icosahedron")



@pytest.fixture(scope="session")
def soccer_ball_walk(soccer_ball):
    """Blow-up and faces of the soccer ball, shared across modules."""
    return blow_up(soccer_ball), trace_faces(soccer_ball)
