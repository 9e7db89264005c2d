"""Strongly involutive self-dualities as a constraint satisfaction problem.

Variables are the vertices of the map, values are its faces.  A solution
``tau`` must be a bijection that sends adjacent vertices to faces sharing
an edge (and non-adjacent vertices to faces that do not), with
``v`` never on ``tau(v)`` and ``u`` on ``tau(v)`` exactly when ``v`` is on
``tau(u)``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .planar_map import PlanarMap

__all__ = [
    "SelfDualIso",
    "DiameterGraph",
    "CandidateDomains",
    "face_adjacency",
    "face_vertex_sets",
    "init_domains",
    "propagate_arc_consistency",
    "search_strong_involutions",
    "is_strongly_involutive",
    "check_strong_involution",
    "diameter_graph",
]


@dataclass(frozen=True)
class SelfDualIso:
    tau: tuple[int, ...]

    def __getitem__(self, v: int) -> int:
        return self.tau[v]

    def __len__(self) -> int:
        return len(self.tau)


@dataclass(frozen=True)
class DiameterGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency()]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@dataclass
class CandidateDomains:
    domains: list[set[int]]
    worklist: deque = field(default_factory=deque)

    def copy(self) -> "CandidateDomains":
        return CandidateDomains([set(d) for d in self.domains], deque(self.worklist))

    def is_empty(self) -> bool:
        return any(not d for d in self.domains)


def face_vertex_sets(m: PlanarMap) -> list[frozenset[int]]:
    return [frozenset(f.boundary_vertices) for f in m.faces]


def face_adjacency(m: PlanarMap) -> list[set[int]]:
    """Faces sharing at least one edge (the dual graph, loops dropped)."""
    df = m.dart_face
    adj: list[set[int]] = [set() for _ in range(m.face_count)]
    for d in range(m.dart_count):
        f, g = df[d], df[m.twin[d]]
        if f != g:
            adj[f].add(g)
    return adj


def init_domains(m: PlanarMap) -> CandidateDomains:
    """Faces of matching size that avoid the vertex; every arc queued."""
    deg = m.degrees()
    fsets = face_vertex_sets(m)
    doms = []
    for v in range(m.vertex_count):
        doms.append(
            {f.id for f in m.faces if f.size == deg[v] and v not in fsets[f.id]}
        )
    work = deque((u, v) for u, v in _arcs(m))
    return CandidateDomains(doms, work)


def _arcs(m: PlanarMap) -> list[tuple[int, int]]:
    out = []
    for a, b in m.edges():
        out.append((a, b))
        out.append((b, a))
    return out


def propagate_arc_consistency(
    domains: CandidateDomains, m: PlanarMap, fadj: list[set[int]] | None = None
) -> CandidateDomains:
    """AC-3 on the isomorphism constraint; returns a new, pruned domain set.

    Revising arc (u, v) drops every f from F_u with no dual neighbour in F_v;
    a drop re-queues every arc (x, u).
    """
    if fadj is None:
        fadj = face_adjacency(m)
    out = domains.copy()
    doms = out.domains
    work = out.worklist
    adj = m.adjacency()
    queued = set(work)
    while work:
        u, v = work.popleft()
        queued.discard((u, v))
        fv = doms[v]
        drop = [f for f in doms[u] if fadj[f].isdisjoint(fv)]
        if not drop:
            continue
        doms[u].difference_update(drop)
        for x in adj[u]:
            if (x, u) not in queued:
                queued.add((x, u))
                work.append((x, u))
    return out


def search_strong_involutions(
    m: PlanarMap, limit: float = math.inf, domains: CandidateDomains | None = None
) -> list[SelfDualIso]:
    """Up to ``limit`` strongly involutive self-dualities, in search order.

    Branches on the unassigned vertex with the smallest domain (ties by
    vertex id), trying faces in increasing id.  After each assignment the
    other domains are filtered by forward checking on all constraints;
    removals are recorded on a trail and undone on backtrack.
    """
    n = m.vertex_count
    if m.face_count != n or m.edge_count != 2 * n - 2:
        return []
    fadj = face_adjacency(m)
    if domains is None:
        domains = propagate_arc_consistency(init_domains(m), m, fadj)
    doms = [set(d) for d in domains.domains]
    if any(not d for d in doms):
        return []
    adj = m.adjacency()
    fsets = face_vertex_sets(m)
    tau = [-1] * n
    results: list[SelfDualIso] = []
    trail: list[tuple[int, int]] = []

    def assign(v: int, f: int) -> bool:
        """Forward-check every unassigned vertex against v -> f."""
        for u in range(n):
            if tau[u] >= 0 or u == v:
                continue
            u_on_f = u in fsets[f]
            adjacent = u in adj[v]
            nbrs = fadj[f]
            dom = doms[u]
            drop = []
            for g in dom:
                if g == f:
                    drop.append(g)
                elif (g in nbrs) != adjacent:
                    drop.append(g)
                elif (v in fsets[g]) != u_on_f:
                    drop.append(g)
            for g in drop:
                dom.discard(g)
                trail.append((u, g))
            if not dom:
                return False
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            u, g = trail.pop()
            doms[u].add(g)

    def rec(assigned: int) -> bool:
        if assigned == n:
            results.append(SelfDualIso(tuple(tau)))
            return len(results) >= limit
        v = min(
            (u for u in range(n) if tau[u] < 0), key=lambda u: (len(doms[u]), u)
        )
        for f in sorted(doms[v]):
            mark = len(trail)
            tau[v] = f
            if assign(v, f) and rec(assigned + 1):
                tau[v] = -1
                undo(mark)
                return True
            tau[v] = -1
            undo(mark)
        return False

    rec(0)
    return results


def check_strong_involution(m: PlanarMap, tau) -> list[str]:
    """Every violated invariant of ``tau``, as human-readable strings.

    Independent of the search: recomputes faces, adjacency and membership
    from the map and checks each property directly.
    """
    t = list(tau.tau if isinstance(tau, SelfDualIso) else tau)
    n = m.vertex_count
    problems: list[str] = []
    faces = m.faces
    if len(t) != n:
        return [f"tau has {len(t)} entries for {n} vertices"]
    if len(faces) != n:
        problems.append(f"face count {len(faces)} != vertex count {n}")
    if sorted(t) != list(range(len(faces))):
        problems.append("tau is not a bijection onto the faces")
        return problems
    fsets = face_vertex_sets(m)
    deg = m.degrees()
    for v in range(n):
        if deg[v] != faces[t[v]].size:
            problems.append(f"degree of {v} is {deg[v]} but face {t[v]} has size {faces[t[v]].size}")
        if v in fsets[t[v]]:
            problems.append(f"vertex {v} lies on its own face {t[v]}")
    shared: dict[tuple[int, int], int] = {}
    df = m.dart_face
    for d in range(m.dart_count):
        if d < m.twin[d]:
            f, g = df[d], df[m.twin[d]]
            key = (min(f, g), max(f, g))
            shared[key] = shared.get(key, 0) + 1
    mult: dict[tuple[int, int], int] = {}
    for e in m.edges():
        mult[e] = mult.get(e, 0) + 1
    for u in range(n):
        for v in range(u + 1, n):
            f, g = t[u], t[v]
            key = (min(f, g), max(f, g))
            if mult.get((u, v), 0) != shared.get(key, 0):
                problems.append(f"edge {u}-{v} does not map to a dual edge {f}-{g}")
            if (u in fsets[t[v]]) != (v in fsets[t[u]]):
                problems.append(f"involution fails for {u}, {v}")
    return problems


def is_strongly_involutive(m: PlanarMap, tau) -> bool:
    return not check_strong_involution(m, tau)


def diameter_graph(m: PlanarMap, tau) -> DiameterGraph:
    t = tau.tau if isinstance(tau, SelfDualIso) else tuple(tau)
    fsets = face_vertex_sets(m)
    edges = set()
    for u in range(m.vertex_count):
        for v in fsets[t[u]]:
            edges.add((min(u, v), max(u, v)))
    return DiameterGraph(m.vertex_count, frozenset(edges))
