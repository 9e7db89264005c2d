from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reuleaux.errors import SizeCap
from reuleaux.generator import (
    CandidateGraph,
    census,
    enumerate_candidates,
    filter_candidate,
    planarity_embed,
)
from reuleaux.planar_map import canonical_form, is_three_connected

from conftest import FIXTURES, fixture_maps


def _nx(g: CandidateGraph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


def test_n4_is_k4():
    (g,) = list(enumerate_candidates(4))
    assert len(g.edges) == 6


def test_size_cap():
    with pytest.raises(SizeCap):
        list(enumerate_candidates(10))


def test_candidates_satisfy_invariants():
    seen = set()
    for g in enumerate_candidates(6):
        assert len(g.edges) == 10
        assert min(g.degrees()) >= 3
        assert all(a < b for a, b in g.edges)
        assert g.edges not in seen
        seen.add(g.edges)


@pytest.mark.parametrize("n", [5, 6])
def test_every_isomorphism_class_is_represented(n):
    """Brute force over all labeled graphs: the degree-sorted stream still
    reaches every unlabeled graph with 2n - 2 edges and min degree 3."""
    pairs = list(combinations(range(n), 2))
    classes: list[nx.Graph] = []
    for es in combinations(pairs, 2 * n - 2):
        G = nx.Graph(es)
        if G.number_of_nodes() < n or min(d for _, d in G.degree) < 3:
            continue
        if not any(nx.is_isomorphic(G, H) for H in classes):
            classes.append(G)
    ours: list[nx.Graph] = []
    for g in enumerate_candidates(n):
        G = _nx(g)
        if not any(nx.is_isomorphic(G, H) for H in ours):
            ours.append(G)
    assert len(ours) == len(classes)


def test_planarity_agrees_with_networkx():
    for g in enumerate_candidates(7):
        planar, _ = nx.check_planarity(_nx(g))
        m = planarity_embed(g)
        assert (m is not None) == planar
        if m is not None:
            assert m.edge_count == len(g.edges)
            assert sorted(m.edges()) == sorted(g.edges)
            assert m.vertex_count - m.edge_count + m.face_count == 2


@st.composite
def connected_graphs(draw):
    n = draw(st.integers(2, 9))
    # a random spanning tree plus random extra edges
    edges = {tuple(sorted((v, draw(st.integers(0, v - 1))))) for v in range(1, n)}
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20))
    edges |= {tuple(sorted(e)) for e in extra if e[0] != e[1]}
    return CandidateGraph(n, frozenset(edges))


@settings(max_examples=300, deadline=None)
@given(connected_graphs())
def test_planarity_random_connected_graphs(g):
    m = planarity_embed(g)
    assert (m is not None) == nx.check_planarity(_nx(g))[0]
    if m is not None:
        assert sorted(m.edges()) == sorted(g.edges)
        assert m.vertex_count - m.edge_count + m.face_count == 2


def test_k5_is_not_planar():
    k5 = CandidateGraph(5, frozenset(combinations(range(5), 2)))
    assert planarity_embed(k5) is None


def test_k33_is_not_planar():
    k33 = CandidateGraph(6, frozenset((a, b) for a in range(3) for b in range(3, 6)))
    assert planarity_embed(k33) is None


def test_filter_matches_networkx_connectivity():
    for g in enumerate_candidates(7):
        m = filter_candidate(g)
        G = _nx(g)
        expect = nx.check_planarity(G)[0] and nx.node_connectivity(G) >= 3
        assert (m is not None) == expect
        if m is not None:
            assert is_three_connected(m)


@pytest.mark.parametrize("n, count", [(4, 1), (5, 1), (6, 2), (7, 8)])
def test_internal_census_matches_fixture(n, count):
    internal = census(n, "internal")
    from_file = census(n, f"file:{FIXTURES / f'polyhedra_n{n}.pc'}")
    assert len(internal) == count
    assert [canonical_form(m) for m in internal] == [canonical_form(m) for m in from_file]


@pytest.mark.slow
def test_internal_census_matches_fixture_n8():
    internal = census(8, "internal")
    from_file = census(8, FIXTURES / "polyhedra_n8.pc")
    assert [canonical_form(m) for m in internal] == [canonical_form(m) for m in from_file]
    assert len(internal) == 42


def test_census_outputs_are_polyhedral_and_sorted():
    maps = census(9, FIXTURES / "polyhedra_n9.pc")
    keys = [canonical_form(m) for m in maps]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    for m in maps:
        assert m.simple and is_three_connected(m)
        assert m.edge_count == 16 and m.face_count == 9


def test_census_drops_other_sizes(tmp_path):
    from reuleaux import codec

    p = tmp_path / "mixed.pc"
    p.write_bytes(codec.write_planar_code(list(fixture_maps("polyhedra_n6.pc")) + list(fixture_maps("polyhedra_n7.pc"))))
    assert len(census(6, f"file:{p}")) == 2
    assert len(census(7, p)) == 8
