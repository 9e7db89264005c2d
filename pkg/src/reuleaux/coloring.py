"""Remove-contract reduction to K4 and the 4-colouring it induces.

One reduction step on a strongly involutive self-dual map (M, tau) picks an
edge ab of M that is not a diameter edge, finds the edge xy shared by the
faces tau(a) and tau(b), contracts ab and deletes xy.  The merged vertex is
sent to the merged face.  Afterwards every degree-2 vertex is smoothed and
every face bounded by two edges is collapsed, until neither remains.

Vertices keep their original ids through the reduction (``labels``), so the
classes of identified vertices can be read off at the end.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import CertificationFailure, NotReducible
from .planar_map import PlanarMap, is_three_connected
from .selfdual import (
    DiameterGraph,
    SelfDualIso,
    check_strong_involution,
    diameter_graph,
    face_vertex_sets,
)

__all__ = [
    "ReductionStep",
    "ReductionState",
    "MergeForest",
    "pick_reducible_edge",
    "reducible_edges",
    "remove_contract",
    "reduce_to_k4",
    "four_coloring",
    "chromatic_oracle",
    "tetra_coords",
    "tetrahedral_mapping",
    "is_proper",
]


@dataclass(frozen=True)
class ReductionStep:
    contracted_edge: tuple[int, int]
    deleted_edge: tuple[int, int]
    cleanup_log: tuple[tuple[str, tuple[int, ...]], ...]
    removed: tuple[int, ...] = ()


@dataclass(frozen=True)
class ReductionState:
    """A certified map with its self-duality and original vertex ids."""

    map: PlanarMap
    tau: tuple[int, ...]
    labels: tuple[int, ...]

    @classmethod
    def initial(cls, m: PlanarMap, tau) -> "ReductionState":
        t = tau.tau if isinstance(tau, SelfDualIso) else tuple(tau)
        return cls(m, tuple(t), tuple(range(m.vertex_count)))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, keep, drop) -> None:
        self.parent[self.find(drop)] = self.find(keep)


@dataclass
class MergeForest:
    """Identifications made by contraction, plus the smoothed vertices.

    ``survivors`` are the original ids of the four K4 vertices, ``removed``
    the original ids of smoothed vertices in removal order.
    """

    uf: _UnionFind
    survivors: tuple[int, ...] = ()
    removed: list[int] = field(default_factory=list)
    steps: list[ReductionStep] = field(default_factory=list)

    def root(self, v: int) -> int:
        return self.uf.find(v)

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v in sorted(self.uf.parent):
            out.setdefault(self.uf.find(v), []).append(v)
        return out


# -- mutable dart structure used inside one reduction step ----------------

class _Work:
    def __init__(self, m: PlanarMap):
        self.twin = dict(enumerate(m.twin))
        self.next = dict(enumerate(m.next))
        self.origin = dict(enumerate(m.origin))
        self.prev = {e: d for d, e in self.next.items()}
        self.vertices = set(range(m.vertex_count))

    def rotation(self, v: int) -> list[int]:
        start = min(d for d, o in self.origin.items() if o == v)
        out = [start]
        d = self.next[start]
        while d != start:
            out.append(d)
            d = self.next[d]
        return out

    def degree(self, v: int) -> int:
        return sum(1 for o in self.origin.values() if o == v)

    def faces(self) -> dict[int, int]:
        """dart -> smallest dart of its face"""
        face: dict[int, int] = {}
        for d in sorted(self.twin):
            if d in face:
                continue
            orb = []
            e = d
            while e not in face:
                face[e] = d
                orb.append(e)
                e = self.next[self.twin[e]]
        return face

    def _remove_dart(self, d: int) -> None:
        p, q = self.prev[d], self.next[d]
        if p == d:
            raise CertificationFailure(f"vertex {self.origin[d]} would become isolated")
        self.next[p] = q
        self.prev[q] = p
        for tbl in (self.twin, self.next, self.prev, self.origin):
            del tbl[d]

    def delete_edge(self, d: int) -> None:
        t = self.twin[d]
        self._remove_dart(d)
        self._remove_dart(t)

    def contract_edge(self, e: int) -> tuple[int, int]:
        """Contract dart e = (a -> b) into a; returns (a, b)."""
        t = self.twin[e]
        a, b = self.origin[e], self.origin[t]
        if a == b:
            raise CertificationFailure("contracting a loop")
        for d, o in self.origin.items():
            if o == a and self.origin[self.twin[d]] == b and d != e:
                raise CertificationFailure(f"contracting {a}-{b} would create a loop")
        p, q = self.prev[e], self.next[e]
        r, s = self.next[t], self.prev[t]
        if r == t:
            raise CertificationFailure(f"vertex {b} has degree 1")
        # p -> e -> q   becomes   p -> r ... s -> q
        self.next[p] = r
        self.prev[r] = p
        self.next[s] = q
        self.prev[q] = s
        if p == e:  # a had degree 1
            raise CertificationFailure(f"vertex {a} has degree 1")
        for d in list(self.origin):
            if self.origin[d] == b:
                self.origin[d] = a
        for tbl in (self.twin, self.next, self.prev, self.origin):
            del tbl[e]
            del tbl[t]
        self.vertices.discard(b)
        return a, b

    def smooth(self, v: int) -> tuple[int, int]:
        d1, d2 = [d for d, o in self.origin.items() if o == v]
        t1, t2 = self.twin[d1], self.twin[d2]
        u, w = self.origin[t1], self.origin[t2]
        if u == w:
            raise CertificationFailure(f"smoothing {v} would create a loop at {u}")
        for d in (d1, d2):
            for tbl in (self.twin, self.next, self.prev, self.origin):
                del tbl[d]
        self.twin[t1] = t2
        self.twin[t2] = t1
        self.vertices.discard(v)
        return u, w

    def freeze(self) -> tuple[PlanarMap, dict[int, int], dict[int, int]]:
        """PlanarMap with compact ids; also old->new vertex and dart maps."""
        vmap = {v: i for i, v in enumerate(sorted(self.vertices))}
        dmap = {d: i for i, d in enumerate(sorted(self.twin))}
        twin = [0] * len(dmap)
        nxt = [0] * len(dmap)
        origin = [0] * len(dmap)
        for d, i in dmap.items():
            twin[i] = dmap[self.twin[d]]
            nxt[i] = dmap[self.next[d]]
            origin[i] = vmap[self.origin[d]]
        m = PlanarMap(len(vmap), tuple(twin), tuple(nxt), tuple(origin), simple=False)
        return m, vmap, dmap


def _is_simple(m: PlanarMap) -> bool:
    seen = set()
    for d in range(m.dart_count):
        a, b = m.origin[d], m.target(d)
        if a == b or (a, b) in seen:
            return False
        seen.add((a, b))
    return True


# -- reduction ---------------------------------------------------------------

def reducible_edges(m: PlanarMap, tau) -> list[tuple[int, int]]:
    """Edges of M (as sorted pairs, ascending) that are not diameter edges."""
    dg = diameter_graph(m, tau)
    return [e for e in m.edges() if e not in dg.edges]


def pick_reducible_edge(m: PlanarMap, tau) -> tuple[int, int] | None:
    """Smallest edge of M (as a sorted pair) that is not a diameter edge."""
    edges = reducible_edges(m, tau)
    return edges[0] if edges else None


def _shared_edge_dart(m: PlanarMap, f: int, g: int) -> int:
    df = m.dart_face
    hits = [d for d in m.faces[f].darts if df[m.twin[d]] == g]
    if len(hits) != 1:
        raise CertificationFailure(f"faces {f} and {g} share {len(hits)} edges, expected 1")
    return hits[0]


def remove_contract(
    state: ReductionState, ab: tuple[int, int], order: str = "fifo"
) -> tuple[ReductionState, ReductionStep]:
    """One remove-contract step with cleanup, on current vertex indices.

    ``order`` picks the cleanup queue discipline ("fifo" or "lifo"); the
    final map is expected not to depend on it.
    """
    m, tau, labels = state.map, list(state.tau), list(state.labels)
    a, b = ab
    if not m.has_edge(a, b):
        raise NotReducible(f"{a}-{b} is not an edge")
    fsets = face_vertex_sets(m)
    if b in fsets[tau[a]]:
        raise NotReducible(f"{a}-{b} is an edge of the diameter graph")
    g = _shared_edge_dart(m, tau[a], tau[b])
    x, y = m.origin[g], m.target(g)
    if {x, y} & {a, b}:
        raise CertificationFailure(f"edges {a}-{b} and {x}-{y} are not disjoint")

    work = _Work(m)
    faces0 = m.faces
    # each live vertex tracks the darts of its face
    rep: dict[int, set[int]] = {v: set(faces0[tau[v]].darts) for v in range(m.vertex_count)}
    merged_face = rep[a] | rep[b]

    work.delete_edge(g)
    e = m.dart_between(a, b)
    work.contract_edge(e)
    del rep[b]
    rep[a] = merged_face
    log: list[tuple[str, tuple[int, ...]]] = []
    removed: list[int] = []
    _cleanup(work, rep, log, removed, order)

    m2, vmap, dmap = work.freeze()
    df = m2.dart_face
    tau2 = [0] * m2.vertex_count
    for v, darts in rep.items():
        alive = [dmap[d] for d in darts if d in dmap]
        if not alive:
            raise CertificationFailure(f"face of vertex {v} vanished during cleanup")
        fs = {df[d] for d in alive}
        if len(fs) != 1:
            raise CertificationFailure(f"face of vertex {v} split during cleanup")
        tau2[vmap[v]] = fs.pop()
    labels2 = [labels[v] for v in sorted(vmap, key=vmap.get)]
    if _is_simple(m2):
        m2 = PlanarMap(m2.vertex_count, m2.twin, m2.next, m2.origin, simple=True)
    _certify(m2, tau2)
    step = ReductionStep(
        contracted_edge=(labels[a], labels[b]),
        deleted_edge=(labels[x], labels[y]),
        cleanup_log=tuple(
            (kind, tuple(labels[i] for i in ids)) for kind, ids in log
        ),
        removed=tuple(labels[v] for v in removed),
    )
    return ReductionState(m2, tuple(tau2), tuple(labels2)), step


def _cleanup(work: _Work, rep, log, removed, order: str) -> None:
    queue: deque = deque()
    queued: set = set()

    def scan() -> None:
        for v in sorted(work.vertices):
            if work.degree(v) == 2 and ("v", v) not in queued:
                queued.add(("v", v))
                queue.append(("v", v))
        face = work.faces()
        sizes: dict[int, int] = {}
        for d, f in face.items():
            sizes[f] = sizes.get(f, 0) + 1
        for f, k in sorted(sizes.items()):
            if k == 2 and ("f", f) not in queued:
                queued.add(("f", f))
                queue.append(("f", f))

    scan()
    while queue:
        kind, key = queue.popleft() if order == "fifo" else queue.pop()
        queued.discard((kind, key))
        if kind == "v":
            if key not in work.vertices or work.degree(key) != 2:
                continue
            u, w = work.smooth(key)
            rep.pop(key, None)
            removed.append(key)
            log.append(("smooth", (key,)))
        else:
            if key not in work.twin:
                continue
            face = work.faces()
            darts = [d for d, f in face.items() if f == face[key]]
            if len(darts) != 2:
                continue
            d1, d2 = sorted(darts)
            if work.twin[d1] == d2:
                raise CertificationFailure("face of size 2 bounded by a single edge")
            xv, yv = work.origin[d1], work.origin[d2]
            work.delete_edge(d1)
            log.append(("collapse", (xv, yv)))
        scan()


def _certify(m: PlanarMap, tau) -> None:
    n = m.vertex_count
    if not m.simple:
        raise CertificationFailure("reduced map is not simple")
    if m.edge_count != 2 * n - 2 or m.face_count != n:
        raise CertificationFailure(
            f"reduced map has n={n}, e={m.edge_count}, f={m.face_count}"
        )
    if not is_three_connected(m):
        raise CertificationFailure("reduced map is not 3-connected")
    problems = check_strong_involution(m, tau)
    if problems:
        raise CertificationFailure("; ".join(problems[:3]))


def reduce_to_k4(m: PlanarMap, tau, order: str = "fifo"):
    """Run remove-contract until K4; yields (state, step) after each step.

    Each step uses the smallest reducible edge whose result certifies as a
    simple 3-connected strongly involutive self-dual map.  Cleanup does not
    always restore 3-connectivity (a few census maps with n >= 12 hit this
    on their smallest reducible edge), so later edges are tried in order;
    CertificationFailure is raised only when no reducible edge certifies.
    """
    state = ReductionState.initial(m, tau)
    while True:
        candidates = reducible_edges(state.map, state.tau)
        if not candidates:
            return
        n_before = state.map.vertex_count
        failures = []
        for ab in candidates:
            try:
                nxt, step = remove_contract(state, ab, order)
            except CertificationFailure as exc:
                failures.append(f"{ab}: {exc}")
                continue
            break
        else:
            raise CertificationFailure(
                f"no reducible edge certifies at n={n_before}: " + "; ".join(failures[:3])
            )
        state = nxt
        if state.map.vertex_count >= n_before:
            raise CertificationFailure("reduction did not decrease the vertex count")
        yield state, step


def four_coloring(m: PlanarMap, tau, order: str = "fifo") -> tuple[list[int], MergeForest]:
    """Proper 4-colouring of the diameter graph read off the reduction.

    Vertices identified by contraction share the colour of the K4 vertex
    they end up in.  Smoothed vertices are not identified with anything;
    they are coloured afterwards, most recently removed first, with the
    smallest colour not used by an already coloured diameter neighbour of
    their class.
    """
    n = m.vertex_count
    D = diameter_graph(m, tau)
    dadj = D.adjacency()
    forest = MergeForest(_UnionFind(range(n)))
    state = ReductionState.initial(m, tau)
    for state, step in reduce_to_k4(m, tau, order):
        a, b = step.contracted_edge
        forest.uf.union(a, b)
        forest.removed.extend(step.removed)
        forest.steps.append(step)
    if state.map.vertex_count != 4:
        raise CertificationFailure(f"reduction stopped at {state.map.vertex_count} vertices")
    forest.survivors = tuple(state.labels)
    classes = forest.classes()
    color = [-1] * n
    for c, v in enumerate(forest.survivors):
        for u in classes[forest.root(v)]:
            color[u] = c
    for v in reversed(forest.removed):
        members = classes[forest.root(v)]
        used = {color[w] for u in members for w in dadj[u] if color[w] >= 0}
        free = [c for c in range(4) if c not in used]
        if not free:
            raise CertificationFailure(f"no colour left for smoothed vertex {v}")
        for u in members:
            color[u] = free[0]
    if not is_proper(D, color):
        raise CertificationFailure("reduction produced an improper colouring")
    return color, forest


def is_proper(D: DiameterGraph, coloring) -> bool:
    return all(coloring[a] != coloring[b] for a, b in D.edges)


def chromatic_oracle(D: DiameterGraph, k: int) -> bool:
    """Exhaustive check for a proper k-colouring (colour symmetry broken)."""
    n = D.n
    adj = D.adjacency()
    order = sorted(range(n), key=lambda v: (-len(adj[v]), v))
    color = [-1] * n

    def rec(i: int, used: int) -> bool:
        if i == n:
            return True
        v = order[i]
        taken = {color[w] for w in adj[v]}
        # a fresh colour is interchangeable with any other fresh one
        for c in range(min(k, used + 1)):
            if c in taken:
                continue
            color[v] = c
            if rec(i + 1, max(used, c + 1)):
                return True
            color[v] = -1
        return False

    return rec(0, 0)


def tetra_coords() -> np.ndarray:
    """Vertices of a regular tetrahedron with unit side, centred at 0."""
    s = 1 / (2 * math.sqrt(2))
    return np.array(
        [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]], dtype=float
    )


def tetrahedral_mapping(coloring) -> np.ndarray:
    """Send each vertex to the tetrahedron vertex of its colour."""
    return tetra_coords()[np.asarray(coloring, dtype=int)]


