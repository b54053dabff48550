import numpy as np
import pytest

from fqwalk.core.rotation_graph import (
    TAIL,
    attach_tails,
    build_rotation_graph,
    dual_graph,
    format_rotation_graph,
    genus,
    orbit_lengths,
    parse_rotation_graph,
    trace_faces,
)
from fqwalk.errors import GraphFormatError, GraphValidationError
from fqwalk.tools.builtin_graphs import load_graph

TRIANGLE = {"a": ["b", "c"], "b": ["c", "a"], "c": ["a", "b"]}


def test_parse_tetrahedron(tetrahedron):
    assert tetrahedron.vertices == ("0", "1", "2", "3")
    assert tetrahedron.boundary == ("0", "1", "2")
    assert len(tetrahedron.arcs) == 12
    assert tetrahedron.num_edges == 6
    assert tetrahedron.betti_number == 3
    assert tetrahedron.degree("0") == 3
    assert tetrahedron.successor("0", "2") == TAIL
    assert tetrahedron.predecessor("0", "1") == TAIL


def test_parse_ignores_comments_and_blank_lines():
    text = "# header\n\nvertex x : y *  # trailing\nvertex y : x\n"
    g = parse_rotation_graph(text)
    assert g.rotation == {"x": ("y", TAIL), "y": ("x",)}


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("vertex a : b\nvertex a : b\n", "declared twice"),
        ("vertex * : a\n", "reserved"),
        ("node a : b\n", "line 1"),
        ("# nothing\n", "no vertex lines"),
    ],
)
def test_parse_format_errors(text, fragment):
    with pytest.raises(GraphFormatError, match=fragment):
        parse_rotation_graph(text)


@pytest.mark.parametrize(
    "rotation, fragment",
    [
        ({"a": ["b", "*", "*"], "b": ["a"]}, "tail slots"),
        ({"a": ["a", "b"], "b": ["a"]}, "self-loop"),
        ({"a": ["b", "b"], "b": ["a"]}, "repeated"),
        ({"a": ["b", "z"], "b": ["a"]}, "undeclared"),
        ({"a": ["b"], "b": ["c"], "c": ["b"]}, "not reciprocated"),
        ({"a": ["b"], "b": ["a"], "c": ["d"], "d": ["c"]}, "not connected"),
        ({"a": ["*"], "b": ["a"]}, "no neighbours"),
        ({"a": []}, "at least two"),
    ],
)
def test_build_rejects_invalid_rotations(rotation, fragment):
    with pytest.raises(GraphValidationError, match=fragment):
        build_rotation_graph(rotation)


def test_format_then_parse_reproduces_graph(tetrahedron):
    again = parse_rotation_graph(format_rotation_graph(tetrahedron))
    assert again.vertices == tetrahedron.vertices
    assert dict(again.rotation) == dict(tetrahedron.rotation)


def test_tetrahedron_faces(tetra_faces):
    assert len(tetra_faces) == 4
    ext, *internal = tetra_faces
    assert ext.arcs == (("0", "1"), ("1", "2"), ("2", "0"))
    assert ext.quays == ("1", "2", "0")
    assert ext.gaps == (1, 1, 1)
    assert ext.kappa == 3
    assert [f.vertex_sequence for f in internal] == [
        ("0", "2", "3"),
        ("0", "3", "1"),
        ("1", "3", "2"),
    ]
    assert all(f.kind == "internal" for f in internal)


def test_faces_partition_the_arcs(tetrahedron, tetra_faces):
    seen = [a for f in tetra_faces for a in f.arcs]
    assert sorted(seen) == sorted(tetrahedron.arcs)
    assert sum(f.length for f in tetra_faces) == len(tetrahedron.arcs)
    assert sum(f.length + f.kappa for f in tetra_faces) == len(tetrahedron.arcs) + len(
        tetrahedron.boundary
    )


def test_single_tail_face_has_one_gap():
    g = load_graph("triangle-one-tail")
    faces = trace_faces(g)
    ext = [f for f in faces if f.is_external]
    assert len(faces) == 2
    assert len(ext) == 1
    assert ext[0].quays == ("a",)
    assert ext[0].gaps == (3,)


@pytest.mark.parametrize(
    "name, lengths, g",
    [
        ("k33-10-4-4", [10, 4, 4], 1),
        ("k33-6-6-6", [6, 6, 6], 1),
        ("k33-18", [18], 2),
    ],
)
def test_k33_embeddings(name, lengths, g):
    graph = load_graph(name)
    faces = trace_faces(graph)
    assert orbit_lengths(faces) == lengths
    assert sum(f.kappa for f in faces) == 6
    assert genus(graph) == g


def test_k33_hexagons_have_two_quays():
    faces = trace_faces(load_graph("k33-6-6-6"))
    assert all(f.kappa == 2 for f in faces)
    from_one = next(f for f in faces if f.arcs[0] == ("1", "1'"))
    assert from_one.vertex_sequence == ("1", "1'", "3", "3'", "2", "2'")
    assert from_one.quays == ("2'", "1")
    assert from_one.gaps == (1, 5)


def test_genus_of_plane_triangle():
    assert genus(build_rotation_graph(TRIANGLE)) == 0


def test_tetrahedron_dual(tetrahedron, tetra_faces):
    dual = dual_graph(tetrahedron, tetra_faces)
    expected = np.ones((4, 4), dtype=int) - np.eye(4, dtype=int)
    np.testing.assert_array_equal(dual.multiplicity, expected)
    assert [dual.degree(i) for i in range(4)] == [f.length for f in tetra_faces]
    assert dual.external_indices == (0,)
    assert dual.internal_indices == (1, 2, 3)
    assert dual.to_networkx().number_of_edges() == 6


def test_single_face_dual_counts_arcs():
    graph = load_graph("k33-18")
    dual = dual_graph(graph, trace_faces(graph))
    assert dual.self_multiplicity(0) == 18
    assert dual.to_networkx().number_of_edges() == 9


def test_attach_tails_makes_unit_gaps(tetrahedron):
    closed = tetrahedron.tail_free()
    inner = trace_faces(closed)[1]
    g = attach_tails(closed, inner)
    ext = [f for f in trace_faces(g) if f.is_external]
    assert len(ext) == 1
    assert ext[0].kappa == 3
    assert ext[0].gaps == (1, 1, 1)
    assert set(g.boundary) == set(inner.vertex_sequence)


def test_attach_tails_rejects_existing_tail(tetrahedron, tetra_faces):
    with pytest.raises(GraphValidationError, match="already carries a tail"):
        attach_tails(tetrahedron, tetra_faces[1])
