"""The two fixture builders against each other and the internal generator."""

import functools

import pytest

from reuleaux import expansion, growth
from reuleaux.planar_map import canonical_form, dual, from_rotation
from reuleaux.selfdual import is_strongly_involutive, search_strong_involutions

from conftest import TABLE1, fixture_maps


def test_wheel_rotation():
    m = from_rotation(growth.wheel(5))
    assert sorted(m.degrees()) == [3, 3, 3, 3, 3, 5]


def test_growth_code_is_isomorphism_invariant():
    rot = growth.wheel(6)
    perm = [3, 0, 5, 1, 6, 2, 4]
    relabeled = [None] * 7
    for v, r in enumerate(rot):
        relabeled[perm[v]] = tuple(perm[w] for w in r)
    assert growth.code(tuple(relabeled)) == growth.code(rot)
    mirrored = tuple(tuple(reversed(r)) for r in rot)
    assert growth.code(mirrored) == growth.code(rot)


def test_growth_pools_small():
    pools = growth.grow(8)
    assert {k: len(v) for k, v in pools.items()} == {4: 1, 5: 1, 6: 2, 7: 8, 8: 42}
    for k, rots in pools.items():
        got = sorted(canonical_form(from_rotation(r)) for r in rots)
        want = sorted(canonical_form(m) for m in fixture_maps(f"polyhedra_n{k}.pc"))
        assert got == want


def test_selfdual_pool_fixtures_are_self_dual():
    for n in (9, 10):
        for m in fixture_maps(f"selfdual_n{n}.pc"):
            assert canonical_form(dual(m)) == canonical_form(m)


def test_selfdual_pool_n9_is_complete():
    full = fixture_maps("polyhedra_n9.pc")
    sd = {canonical_form(m) for m in full if canonical_form(dual(m)) == canonical_form(m)}
    assert sd == {canonical_form(m) for m in fixture_maps("selfdual_n9.pc")}
    assert len(sd) == 50


def test_k4_seed_is_strongly_involutive():
    g = expansion.k4()
    assert expansion.strongly_involutive(g)


def test_expansion_key_ignores_labels():
    g = expansion.k4()
    kids = [c for c in expansion.children(g) if expansion.strongly_involutive(c)]
    assert kids, "K4 must have a degenerate child"
    keys = {expansion.key(c) for c in kids}
    assert len(keys) <= len(kids)


@functools.lru_cache(maxsize=None)
def _exhaustive(max_n):
    return expansion.expand(max_n)


@pytest.mark.slow
def test_expansion_matches_search():
    found = _exhaustive(10)
    for n in range(4, 11):
        graphs = {canonical_form(from_rotation(g.rotation_lists())) for g in found[n]}
        assert len(graphs) == TABLE1[n]
        for g in found[n]:
            m = from_rotation(g.rotation_lists())
            assert search_strong_involutions(m, limit=1)
            # the tau carried along is itself valid on the final map
            tau = [m.dart_face[_dart(m, g, v)] for v in range(n)]
            assert is_strongly_involutive(m, tau)


def _maps(found, n):
    return {canonical_form(from_rotation(g.rotation_lists())) for g in found[n]}


def test_budgeted_expansion_counts():
    found = expansion.expand(11, max_low=1)
    assert {n: len(_maps(found, n)) for n in range(4, 12)} == {n: TABLE1[n] for n in range(4, 12)}


@pytest.mark.slow
def test_budgeted_expansion_matches_exhaustive():
    full = _exhaustive(10)
    budget = expansion.expand(10, max_low=1)
    for n in range(4, 11):
        assert _maps(full, n) == _maps(budget, n)


def _dart(m, g, v):
    """Dart of m matching the carried tau dart of vertex v in g."""
    d = g.tau_dart[v]
    return m.dart_between(g.org[d], g.org[g.twin[d]])
