"""Strongly involutive self-dual maps grown from K4 by inverse remove-contract.

A remove-contract step contracts an edge ab, deletes the edge xy shared by
tau(a) and tau(b) and sends the merged vertex to the merged face.  The
cleanup that follows (smooth a degree-2 vertex v, collapse its 2-gon face
tau(v)) is itself such a step on the edge from v to a neighbour.  So every
strongly involutive self-dual map is reached from K4 by the inverse
elementary step

    split a vertex c into adjacent a, b along two arcs of its rotation,
    and cut the face tau(c) by a new edge xy into tau(a) and tau(b),

where the intermediate maps may carry multi-edges and degree-2 vertices.
Intermediates are kept only while they have a degree-2 vertex (otherwise
the forward cleanup would have stopped there).  Maps are deduplicated
together with tau, up to orientation-preserving or -reversing isomorphism.

Used to build planar_code fixtures beyond the reach of the full
polyhedral enumeration in :mod:`reuleaux.growth`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

log = logging.getLogger(__name__)


@dataclass
class GMap:
    """Loopless sphere map with a vertex -> face assignment.

    ``tau_dart[v]`` is some dart on the face assigned to ``v``.
    """

    n: int
    twin: list[int]
    nxt: list[int]
    org: list[int]
    tau_dart: list[int]

    def __post_init__(self) -> None:
        nd = len(self.twin)
        face = [-1] * nd
        faces: list[list[int]] = []
        for d in range(nd):
            if face[d] >= 0:
                continue
            fid = len(faces)
            cyc = []
            e = d
            while face[e] < 0:
                face[e] = fid
                cyc.append(e)
                e = self.nxt[self.twin[e]]
            faces.append(cyc)
        self.face = face
        self.faces = faces
        deg = [0] * self.n
        for o in self.org:
            deg[o] += 1
        self.deg = deg
        self.tau = [face[d] for d in self.tau_dart]

    def rotation(self, v: int) -> list[int]:
        d0 = next(d for d in range(len(self.org)) if self.org[d] == v)
        out = [d0]
        d = self.nxt[d0]
        while d != d0:
            out.append(d)
            d = self.nxt[d]
        return out

    def rotation_lists(self) -> list[list[int]]:
        return [[self.org[self.twin[d]] for d in self.rotation(v)] for v in range(self.n)]

    def is_simple(self) -> bool:
        seen = set()
        for d in range(len(self.org)):
            a, b = self.org[d], self.org[self.twin[d]]
            if a == b or (a, b) in seen:
                return False
            seen.add((a, b))
        return True

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for d in range(len(self.org)):
            adj[self.org[d]].add(self.org[self.twin[d]])
        return adj


def k4() -> GMap:
    rot = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]]
    return _from_rotation_with_tau(rot, None)


def _from_rotation_with_tau(rot, tau_vertices) -> GMap:
    dart_of = {}
    org, nxt = [], []
    for u, nb in enumerate(rot):
        base = len(org)
        for i, v in enumerate(nb):
            org.append(u)
            nxt.append(base + (i + 1) % len(nb))
            dart_of[(u, v)] = base + i
    twin = [dart_of[(org[d], rot[org[d]][d - _base(rot, org[d])])[::-1]] for d in range(len(org))]
    g = GMap(len(rot), twin, nxt, org, [0] * len(rot))
    if tau_vertices is None:
        # K4: the face avoiding v
        tau_d = []
        for v in range(g.n):
            f = next(i for i, cyc in enumerate(g.faces) if v not in {g.org[d] for d in cyc})
            tau_d.append(g.faces[f][0])
        g = GMap(g.n, twin, nxt, org, tau_d)
    return g


def _base(rot, u: int) -> int:
    return sum(len(r) for r in rot[:u])


def strongly_involutive(g: GMap) -> bool:
    """Vertex-level check: bijection, degree match, no fixed point,
    involution, and edge multiplicities preserved between vertex pairs and
    face pairs."""
    n = g.n
    tau = g.tau
    faces = g.faces
    if len(faces) != n or len(set(tau)) != n:
        return False
    org = g.org
    deg = g.deg
    ton = [0] * n
    for v in range(n):
        cyc = faces[tau[v]]
        if deg[v] != len(cyc):
            return False
        m = 0
        for d in cyc:
            m |= 1 << org[d]
        if m >> v & 1:
            return False
        ton[v] = m
    # u on tau(v)  <=>  v on tau(u): the membership matrix is symmetric
    for v in range(n):
        for d in faces[tau[v]]:
            if not ton[org[d]] >> v & 1:
                return False
    inv = [0] * n
    for v, f in enumerate(tau):
        inv[f] = v
    twin = g.twin
    face = g.face
    count: dict[tuple[int, int], int] = {}
    for d in range(len(org)):
        t = twin[d]
        if d > t:
            continue
        a, b = org[d], org[t]
        k = (a, b) if a < b else (b, a)
        count[k] = count.get(k, 0) + 1
        f, h = inv[face[d]], inv[face[t]]
        k = (f, h) if f < h else (h, f)
        count[k] = count.get(k, 0) - 1
    return not any(count.values())


def key(g: GMap) -> bytes:
    """Canonical code of (map, tau) over both orientations.

    Darts are numbered in breadth-first order from a start dart; each
    emitted entry is (label of target, position of the twin in the
    target's rotation), which pins down multi-edges.  Then each vertex
    contributes the smallest dart number on its face.
    """
    nd = len(g.org)
    n = g.n
    org, twin, deg = g.org, g.twin, g.deg
    fsize = [len(g.faces[g.face[d]]) for d in range(nd)]
    best_sel = None
    starts = []
    for d in range(nd):
        t = twin[d]
        a, b = fsize[d], fsize[t]
        sel = (deg[org[d]], deg[org[t]], max(a, b), min(a, b))
        if best_sel is None or sel > best_sel:
            best_sel, starts = sel, [d]
        elif sel == best_sel:
            starts.append(d)
    prv = [0] * nd
    for d, e in enumerate(g.nxt):
        prv[e] = d
    best = None
    for d0 in starts:
        for step in (g.nxt, prv):
            label = [0] * n
            entry = [-1] * n
            dnum = [0] * nd
            v0 = org[d0]
            label[v0] = 1
            entry[v0] = d0
            order = [v0]
            count = 1
            idx = 0
            code = []
            j = 0
            worse = False
            while j < len(order):
                v = order[j]
                j += 1
                d = entry[v]
                while True:
                    dnum[d] = idx
                    idx += 1
                    t = twin[d]
                    w = org[t]
                    if not label[w]:
                        count += 1
                        label[w] = count
                        entry[w] = t
                        order.append(w)
                    k = 0
                    e = entry[w]
                    while e != t:
                        e = step[e]
                        k += 1
                    code.append(label[w])
                    code.append(k)
                    d = step[d]
                    if d == entry[v]:
                        break
                code.append(0)
                if best is not None and code > best[: len(code)]:
                    worse = True
                    break
            if worse:
                continue
            code.append(255)
            for v in order:
                code.append(min(dnum[e] for e in g.faces[g.tau[v]]))
            if best is None or code < best:
                best = code
    return bytes([n]) + bytes(best)


def children(g: GMap):
    """All maps one inverse elementary step above ``g``.

    The new edge ab must map to the new edge xy and back, so the two faces
    beside ab -- the faces of ``g`` at the two corners where the rotation
    of c is cut -- must be tau(x) and tau(y).  That fixes {x, y} for each
    cut before anything is built; the caller still re-checks every child.
    """
    inv = [0] * g.n
    for v, f in enumerate(g.tau):
        inv[f] = v
    for c in range(g.n):
        rot = g.rotation(c)
        k = len(rot)
        phi = g.faces[g.tau[c]]
        if len(phi) != k:
            continue
        corners: dict[int, list[int]] = {}
        for j, d in enumerate(phi):
            corners.setdefault(g.org[d], []).append(j)
        for i in range(k):
            for la in range(1, k):
                f1, f2 = g.face[rot[i]], g.face[rot[(i + la) % k]]
                if f1 == f2:
                    continue
                x, y = inv[f1], inv[f2]
                if x not in corners or y not in corners:
                    continue
                A = [rot[(i + t) % k] for t in range(la)]
                B = [rot[(i + t) % k] for t in range(la, k)]
                sa, sb = la + 1, k - la + 1
                for i1 in corners[x] + corners[y]:
                    want = y if g.org[phi[i1]] == x else x
                    for s2, owner2 in ((sa, "a"), (sb, "b")):
                        i2 = (i1 + s2 - 1) % k
                        if g.org[phi[i2]] != want:
                            continue
                        yield _build(g, c, A, B, phi, i1, i2, owner2)


def _build(g: GMap, c: int, A, B, phi, i1: int, i2: int, owner2: str) -> GMap:
    nd = len(g.org)
    n = g.n
    twin = g.twin + [nd + 1, nd, nd + 3, nd + 2]
    nxt = g.nxt + [0, 0, 0, 0]
    org = g.org + [c, n, g.org[phi[i1]], g.org[phi[i2]]]
    e, e2, h, h2 = nd, nd + 1, nd + 2, nd + 3
    b = n
    # split c: A stays, B moves to b
    for s, t in zip(A, A[1:]):
        nxt[s] = t
    nxt[A[-1]] = e
    nxt[e] = A[0]
    for s, t in zip(B, B[1:]):
        nxt[s] = t
    nxt[B[-1]] = e2
    nxt[e2] = B[0]
    for d in B:
        org[d] = b
    # cut phi: h at corner i1, h2 at corner i2
    k = len(phi)
    p1 = g.twin[phi[(i1 - 1) % k]]
    p2 = g.twin[phi[(i2 - 1) % k]]
    nxt[p1] = h
    nxt[h] = phi[i1]
    nxt[p2] = h2
    nxt[h2] = phi[i2]
    tau_dart = list(g.tau_dart) + [0]
    # face through h2 holds phi[i1..i2-1]; face through h holds the rest
    if owner2 == "a":
        tau_dart[c], tau_dart[b] = h2, h
    else:
        tau_dart[c], tau_dart[b] = h, h2
    return GMap(n + 1, twin, nxt, org, tau_dart)


def has_degree_two(g: GMap) -> bool:
    return min(g.deg) == 2


def three_connected(g: GMap) -> bool:
    adj = g.adjacency()
    n = g.n
    if n < 4 or min(len(a) for a in adj) < 3:
        return False
    for a, b in combinations(range(n), 2):
        start = next(v for v in range(n) if v not in (a, b))
        seen = {a, b, start}
        stack = [start]
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            return False
    return True


def expand(
    max_n: int, progress: bool = False, max_low: int | None = None
) -> dict[int, list[GMap]]:
    """Simple 3-connected strongly involutive self-dual maps, n = 4..max_n,
    one (map, tau) per isomorphism class of the pair.

    ``max_low`` caps the number of degree-2 vertices on an intermediate map.
    None keeps every intermediate that can still be cleaned up by max_n
    (exhaustive); 1 is much faster and reproduces the exhaustive counts as
    far as those have been checked (n <= 12).
    """
    level: dict[bytes, GMap] = {key(k4()): k4()}
    simple: dict[int, dict[bytes, GMap]] = {4: dict(level)}
    for n in range(4, max_n):
        nxt_level: dict[bytes, GMap] = {}
        out: dict[bytes, GMap] = {}
        for g in level.values():
            for ch in children(g):
                if not strongly_involutive(ch):
                    continue
                low = ch.deg.count(2)
                # one inverse step lifts at most two vertices off degree 2
                if low > 2 * (max_n - n - 1) or (max_low is not None and low > max_low):
                    continue
                good = low == 0 and ch.is_simple() and three_connected(ch)
                if not (good or low):
                    continue
                kk = key(ch)
                if kk in nxt_level:
                    continue
                nxt_level[kk] = ch
                if good:
                    out[kk] = ch
        level = nxt_level
        simple[n + 1] = out
        if progress:
            log.info("n=%d: %d pairs kept, %d simple", n + 1, len(level), len(out))
    return {k: list(v.values()) for k, v in simple.items()}
