import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reuleaux.errors import InvalidMap
from reuleaux.generator import CandidateGraph, planarity_embed
from reuleaux.planar_map import (
    PlanarMap,
    canonical_form,
    dual,
    from_faces,
    from_rotation,
    graph_canonical_form,
    is_three_connected,
    trace_faces,
)

from conftest import cube, fixture_maps, k4, wheel


def _relabel(m: PlanarMap, perm, mirror=False):
    rot = [None] * m.vertex_count
    for v, nbrs in enumerate(m.rotation_lists()):
        r = [perm[w] for w in nbrs]
        rot[perm[v]] = r[::-1] if mirror else r
    return from_rotation(rot)


def test_k4_has_four_triangles():
    faces = trace_faces(k4())
    assert len(faces) == 4
    assert all(f.size == 3 for f in faces)


def test_five_wheel_faces():
    sizes = sorted(f.size for f in wheel(5).faces)
    assert sizes == [3, 3, 3, 3, 3, 5]


def test_faces_partition_darts():
    m = wheel(7)
    seen = sorted(d for f in m.faces for d in f.darts)
    assert seen == list(range(m.dart_count))
    assert m.vertex_count - m.edge_count + m.face_count == 2


def test_face_boundary_follows_darts():
    m = wheel(5)
    for f in m.faces:
        assert f.boundary_vertices == tuple(m.origin[d] for d in f.darts)


def test_dual_swaps_counts():
    for m in (k4(), wheel(5), cube()):
        d = dual(m)
        assert d.vertex_count == m.face_count
        assert d.face_count == m.vertex_count
        assert d.edge_count == m.edge_count


def test_k4_and_wheel_are_self_dual():
    for m in (k4(), wheel(5), wheel(6)):
        assert canonical_form(dual(m)) == canonical_form(m)


def test_cube_dual_is_octahedron():
    octa = dual(cube())
    assert octa.vertex_count == 6 and octa.face_count == 8
    assert sorted(octa.degrees()) == [4] * 6
    assert all(f.size == 3 for f in octa.faces)


def test_dual_of_dual_is_original():
    for m in fixture_maps("polyhedra_n8.pc"):
        assert canonical_form(dual(dual(m))) == canonical_form(m)


def test_three_connectivity():
    assert is_three_connected(k4())
    assert is_three_connected(cube())
    # two squares glued along an edge: {1, 4} is a 2-cut
    faces = [(0, 1, 4, 3), (1, 2, 5, 4), (3, 4, 5, 2, 1, 0)]
    ladder = from_faces(6, faces)
    assert not is_three_connected(ladder)


def test_small_maps_are_not_three_connected():
    triangle = from_rotation([[1, 2], [2, 0], [0, 1]])
    assert not is_three_connected(triangle)


def test_canonical_form_k4_relabelings():
    m = k4()
    assert canonical_form(_relabel(m, [2, 0, 3, 1])) == canonical_form(m)
    assert canonical_form(_relabel(m, [0, 1, 2, 3], mirror=True)) == canonical_form(m)


def test_canonical_form_separates():
    assert canonical_form(k4()) != canonical_form(wheel(5))
    pool = fixture_maps("polyhedra_n8.pc")
    assert len({canonical_form(m) for m in pool}) == len(pool)


def test_graph_canonical_form_matches_isomorphism():
    path = [[0, 1, 0], [1, 0, 1], [0, 1, 0]]
    other = [[0, 1, 1], [1, 0, 0], [1, 0, 0]]
    triangle = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    assert graph_canonical_form(path) == graph_canonical_form(other)
    assert graph_canonical_form(path) != graph_canonical_form(triangle)


def test_rejects_broken_twin():
    m = k4()
    twin = list(m.twin)
    twin[0], twin[1] = twin[1], twin[0]
    with pytest.raises(InvalidMap):
        PlanarMap(m.vertex_count, tuple(twin), m.next, m.origin)


def test_rejects_non_permutation_next():
    m = k4()
    nxt = list(m.next)
    nxt[0] = nxt[1]
    with pytest.raises(InvalidMap):
        PlanarMap(m.vertex_count, m.twin, tuple(nxt), m.origin)


def test_rejects_torus_rotation():
    # K5 has no sphere embedding, so any rotation system has genus > 0
    rot = [[w for w in range(5) if w != v] for v in range(5)]
    with pytest.raises(InvalidMap):
        from_rotation(rot)


def test_multigraph_needs_flag():
    rot = [[1, 1, 2], [0, 0, 2], [0, 1]]
    with pytest.raises(InvalidMap):
        from_rotation(rot)
    m = from_rotation(rot, simple=False)
    assert m.edge_count == 4 and not m.simple and m.face_count == 3


def test_planarity_embed_matches_rotation_roundtrip():
    m = planarity_embed(CandidateGraph(4, frozenset({(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)})))
    assert m is not None and canonical_form(m) == canonical_form(k4())


_pool9 = fixture_maps("polyhedra_n9.pc")


@settings(max_examples=60, deadline=None)
@given(
    idx=st.integers(0, len(_pool9) - 1),
    perm=st.permutations(range(9)),
    mirror=st.booleans(),
)
def test_canonical_form_invariant_under_relabeling(idx, perm, mirror):
    m = _pool9[idx]
    assert canonical_form(_relabel(m, perm, mirror)) == canonical_form(m)


@settings(max_examples=60, deadline=None)
@given(idx=st.integers(0, len(_pool9) - 1))
def test_euler_and_face_count(idx):
    m = _pool9[idx]
    assert m.vertex_count - m.edge_count + m.face_count == 2
    assert m.edge_count == 2 * m.vertex_count - 2
    assert m.face_count == m.vertex_count
    assert all(f.size >= 3 for f in m.faces)
