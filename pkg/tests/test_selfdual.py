from itertools import permutations

from hypothesis import given, settings
from hypothesis import strategies as st

from reuleaux.selfdual import (
    check_strong_involution,
    diameter_graph,
    face_adjacency,
    face_vertex_sets,
    init_domains,
    is_strongly_involutive,
    propagate_arc_consistency,
    search_strong_involutions,
)

from conftest import cube, fixture_maps, k4, sisd_census, wheel


def brute_force_taus(m):
    """Every bijection V -> F checked directly against the definition."""
    n = m.vertex_count
    if m.face_count != n:
        return []
    fsets = face_vertex_sets(m)
    fadj = face_adjacency(m)
    adj = m.adjacency()
    deg = m.degrees()
    out = []
    for tau in permutations(range(n)):
        if any(m.faces[tau[v]].size != deg[v] or v in fsets[tau[v]] for v in range(n)):
            continue
        if any((v in adj[u]) != (tau[v] in fadj[tau[u]]) for u in range(n) for v in range(u + 1, n)):
            continue
        if any((u in fsets[tau[v]]) != (v in fsets[tau[u]]) for u in range(n) for v in range(n)):
            continue
        out.append(tau)
    return sorted(out)


def test_k4_domains_are_singletons():
    m = k4()
    doms = init_domains(m)
    for v, dom in enumerate(doms.domains):
        assert len(dom) == 1
        (f,) = dom
        assert v not in m.faces[f].boundary_vertices
    assert len(doms.worklist) == 2 * m.edge_count
    after = propagate_arc_consistency(doms, m)
    assert after.domains == doms.domains


def test_wheel_hub_domain_is_the_rim():
    m = wheel(5)
    hub = 5
    (f,) = init_domains(m).domains[hub]
    assert m.faces[f].size == 5


def test_no_matching_face_size_empties_a_domain():
    # cube: degree-3 vertices, only square faces
    m = cube()
    assert any(not d for d in init_domains(m).domains)
    assert search_strong_involutions(m) == []


def test_revision_removes_unsupported_face():
    m = wheel(5)
    doms = init_domains(m)
    u, v = 0, 1
    doms.domains[v] = {next(iter(doms.domains[v]))}
    pruned = propagate_arc_consistency(doms, m)
    fadj = face_adjacency(m)
    for f in pruned.domains[u]:
        assert fadj[f] & pruned.domains[v]


def test_search_k4():
    m = k4()
    (tau,) = search_strong_involutions(m)
    D = diameter_graph(m, tau)
    assert len(D.edges) == 6


def test_search_matches_brute_force_small():
    maps = [k4(), wheel(5), wheel(6), wheel(7)]
    for n in (6, 7):
        maps.extend(fixture_maps(f"polyhedra_n{n}.pc"))
    for m in maps:
        got = sorted(tuple(t.tau) for t in search_strong_involutions(m))
        assert got == brute_force_taus(m)


def test_odd_wheel_qualifies_even_does_not():
    assert search_strong_involutions(wheel(5), limit=1)
    assert search_strong_involutions(wheel(7), limit=1)
    assert not search_strong_involutions(wheel(6))


def test_cube_has_none():
    assert search_strong_involutions(cube()) == []


def test_five_wheel_diameter_graph():
    m = wheel(5)
    tau = search_strong_involutions(m, limit=1)[0]
    D = diameter_graph(m, tau)
    assert len(D.edges) == 10
    assert sorted(D.degrees(), reverse=True) == [5, 3, 3, 3, 3, 3]


def test_arc_consistency_keeps_every_solution():
    for n in (6, 7, 8):
        for m in fixture_maps(f"polyhedra_n{n}.pc"):
            doms = propagate_arc_consistency(init_domains(m), m).domains
            for tau in search_strong_involutions(m, domains=init_domains(m)):
                assert all(tau[v] in doms[v] for v in range(m.vertex_count))


def test_arc_consistency_is_order_independent():
    for m in fixture_maps("polyhedra_n8.pc"):
        a = init_domains(m)
        b = init_domains(m)
        b.worklist.reverse()
        assert propagate_arc_consistency(a, m).domains == propagate_arc_consistency(b, m).domains


def test_check_flags_tampering():
    m = wheel(5)
    tau = list(search_strong_involutions(m, limit=1)[0].tau)
    assert check_strong_involution(m, tau) == []
    bad = tau[:]
    bad[0], bad[1] = bad[1], bad[0]
    assert check_strong_involution(m, bad)
    assert not is_strongly_involutive(m, [0] * 6)


def test_limit():
    m = k4()
    assert len(search_strong_involutions(m, limit=1)) == 1


_census = [pair for n in range(4, 11) for pair in sisd_census(n)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(_census))
def test_every_tau_passes_full_recheck(pair):
    m, _ = pair
    for tau in search_strong_involutions(m):
        assert check_strong_involution(m, tau) == []
        D = diameter_graph(m, tau)
        assert D.degrees() == m.degrees()
        assert len(D.edges) == 2 * m.vertex_count - 2
        assert all(a != b for a, b in D.edges)
