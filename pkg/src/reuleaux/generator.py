"""Enumeration of 3-connected planar graphs with n vertices and 2n - 2 edges.

The internal route is a brute-force edge-set backtrack followed by a
planarity embedder and a 3-connectivity filter.  It is meant for small n
only; larger censuses are read from planar_code files.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterator, Sequence

from . import codec
from .errors import SizeCap
from .planar_map import (
    PlanarMap,
    canonical_form,
    from_faces,
    from_rotation,
    is_three_connected,
    three_connected_adjacency,
)

log = logging.getLogger(__name__)

MAX_INTERNAL_N = 9


@dataclass(frozen=True)
class CandidateGraph:
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


def enumerate_candidates(n: int) -> Iterator[CandidateGraph]:
    """Labeled graphs on {0..n-1} with 2n - 2 edges and minimum degree 3.

    Only graphs whose degree sequence is non-increasing in the vertex label
    are produced.  Every unlabeled graph has such a labeling, so each
    isomorphism class is still represented, while the stream shrinks by
    roughly a factor n! / (number of degree-sorted labelings).

    Pairs are decided in lexicographic order.  Vertex ``i`` is complete once
    row ``i`` is done; at that point its degree must not exceed that of
    ``i - 1``.  A partial assignment is cut as soon as some vertex can no
    longer reach degree 3, the edge budget cannot be met, or an open vertex
    already exceeds the final degree of its predecessor.
    """
    if n > MAX_INTERNAL_N:
        raise SizeCap(f"internal enumeration supports n <= {MAX_INTERNAL_N}, got {n}")
    if n < 4:
        return
    m = 2 * n - 2
    pairs = list(combinations(range(n), 2))
    npairs = len(pairs)
    # remaining[k][v]: pairs at index >= k touching v
    remaining = [[0] * n for _ in range(npairs + 1)]
    for k in range(npairs - 1, -1, -1):
        row = remaining[k]
        row[:] = remaining[k + 1]
        a, b = pairs[k]
        row[a] += 1
        row[b] += 1
    # index of the last pair touching v, i.e. when deg(v) becomes final
    last = [0] * n
    for k, (a, b) in enumerate(pairs):
        last[a] = k
        last[b] = k

    deg = [0] * n
    chosen: list[tuple[int, int]] = []

    def feasible(k: int, used: int) -> bool:
        rem = remaining[k]
        need = 0
        for v in range(n):
            short = 3 - deg[v]
            if short > rem[v]:
                return False
            if short > 0:
                need += short
        left = m - used
        # each edge raises two degrees
        if 2 * left < need or left > npairs - k:
            return False
        return True

    def rec(k: int, used: int) -> Iterator[CandidateGraph]:
        if used == m:
            if all(d >= 3 for d in deg) and all(
                deg[v] <= deg[v - 1] for v in range(1, n)
            ):
                yield CandidateGraph(n, frozenset(chosen))
            return
        if k == npairs or not feasible(k, used):
            return
        a, b = pairs[k]
        # include
        deg[a] += 1
        deg[b] += 1
        if _prefix_sorted(deg, last, k):
            chosen.append((a, b))
            yield from rec(k + 1, used + 1)
            chosen.pop()
        deg[a] -= 1
        deg[b] -= 1
        # exclude
        if _prefix_sorted(deg, last, k):
            yield from rec(k + 1, used)

    yield from rec(0, 0)


def _prefix_sorted(deg: list[int], last: list[int], k: int) -> bool:
    """Degrees already final after pair ``k`` must be non-increasing, and no
    open vertex may exceed the final degree of a closed predecessor."""
    n = len(deg)
    for v in range(1, n):
        if last[v - 1] > k:
            break
        if deg[v] > deg[v - 1]:
            return False
    return True


# -- planarity ------------------------------------------------------------

def _find_cycle(adj: Sequence[set[int]]) -> list[int] | None:
    """A cycle through the smallest edge: that edge plus a shortest detour."""
    n = len(adj)
    for u in range(n):
        for w in sorted(adj[u]):
            prev = {u: u}
            frontier = [u]
            while frontier and w not in prev:
                nxt = []
                for x in frontier:
                    for y in sorted(adj[x]):
                        if y in prev or (x == u and y == w):
                            continue
                        prev[y] = x
                        nxt.append(y)
                frontier = nxt
            if w in prev:
                cyc = [w]
                while cyc[-1] != u:
                    cyc.append(prev[cyc[-1]])
                return cyc
    return None


def _fragments(adj, in_h: list[bool], h_edges: set[tuple[int, int]]):
    """Bridges of the graph relative to the embedded subgraph H.

    Yields (attachments, vertices, edges) where vertices are the interior
    vertices of the fragment (empty for a single chord).
    """
    n = len(adj)
    frags = []
    for u in range(n):
        if not in_h[u]:
            continue
        for w in sorted(adj[u]):
            if u < w and in_h[w] and (u, w) not in h_edges:
                frags.append(({u, w}, set(), [(u, w)]))
    seen = [False] * n
    for s in range(n):
        if in_h[s] or seen[s]:
            continue
        comp = {s}
        seen[s] = True
        stack = [s]
        att: set[int] = set()
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if in_h[w]:
                    att.add(w)
                elif not seen[w]:
                    seen[w] = True
                    comp.add(w)
                    stack.append(w)
        frags.append((att, comp, None))
    return frags


def _fragment_path(adj, frag, in_h) -> list[int]:
    att, comp, chord = frag
    if chord is not None:
        return list(chord[0])
    atts = sorted(att)
    a = atts[0]
    # BFS from a through the interior until another attachment is reached
    prev = {a: None}
    frontier = [a]
    found = None
    while frontier and found is None:
        nxt = []
        for x in frontier:
            for w in sorted(adj[x]):
                if w in prev:
                    continue
                if x == a and w not in comp:
                    continue
                if w in comp:
                    prev[w] = x
                    nxt.append(w)
                elif in_h[w] and x != a:
                    prev[w] = x
                    found = w
                    break
            if found is not None:
                break
        frontier = nxt
    assert found is not None, "fragment with fewer than two attachments"
    path = [found]
    while path[-1] != a:
        path.append(prev[path[-1]])
    path.reverse()
    return path


def _embed_biconnected(adj: Sequence[set[int]]) -> list[list[int]] | None:
    """Face cycles of a plane embedding, or None if not planar.

    Path-by-path face insertion: keep an embedded 2-connected subgraph H with
    oriented face cycles, pick a fragment whose attachments all lie on a
    common face (preferring fragments with a single such face), and draw a
    path of it through that face.
    """
    n = len(adj)
    cyc = _find_cycle(adj)
    if cyc is None:
        return None
    in_h = [False] * n
    for v in cyc:
        in_h[v] = True
    h_edges: set[tuple[int, int]] = set()
    for i in range(len(cyc)):
        a, b = cyc[i], cyc[(i + 1) % len(cyc)]
        h_edges.add((min(a, b), max(a, b)))
    faces: list[list[int]] = [list(cyc), list(reversed(cyc))]
    total_edges = sum(len(a) for a in adj) // 2
    while len(h_edges) < total_edges:
        frags = _fragments(adj, in_h, h_edges)
        choice = None
        for frag in frags:
            admissible = [i for i, f in enumerate(faces) if frag[0] <= set(f)]
            if not admissible:
                return None
            if choice is None or len(admissible) < len(choice[1]):
                choice = (frag, admissible)
                if len(admissible) == 1:
                    break
        frag, admissible = choice
        fi = admissible[0]
        path = _fragment_path(adj, frag, in_h)
        face = faces[fi]
        u, v = path[0], path[-1]
        k = len(face)
        iu = face.index(u)
        iv = face.index(v)
        arc_uv = [face[(iu + j) % k] for j in range((iv - iu) % k + 1)]
        arc_vu = [face[(iv + j) % k] for j in range((iu - iv) % k + 1)]
        inner = path[1:-1]
        f1 = arc_uv + list(reversed(inner))
        f2 = arc_vu + inner
        faces[fi] = f1
        faces.append(f2)
        for x in inner:
            in_h[x] = True
        for i in range(len(path) - 1):
            a, b = path[i], path[i + 1]
            h_edges.add((min(a, b), max(a, b)))
    return faces


def _blocks(adj: Sequence[set[int]]) -> list[list[tuple[int, int]]]:
    """Edge sets of the 2-connected components (lowpoint DFS, iterative)."""
    n = len(adj)
    disc = [-1] * n
    low = [0] * n
    blocks: list[list[tuple[int, int]]] = []
    estack: list[tuple[int, int]] = []
    t = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, iter(sorted(adj[root])))]
        while stack:
            v, parent, it = stack[-1]
            w = next(it, None)
            if w is None:
                stack.pop()
                if parent >= 0:
                    low[parent] = min(low[parent], low[v])
                    if low[v] >= disc[parent]:
                        block = []
                        while True:
                            e = estack.pop()
                            block.append(e)
                            if e == (parent, v):
                                break
                        blocks.append(block)
                continue
            if w == parent:
                continue
            if disc[w] < 0:
                estack.append((v, w))
                disc[w] = low[w] = t
                t += 1
                stack.append((w, v, iter(sorted(adj[w]))))
            elif disc[w] < disc[v]:
                estack.append((v, w))
                low[v] = min(low[v], disc[w])
    return blocks


def _connected(adj: Sequence[set[int]]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def planarity_embed(g: CandidateGraph) -> PlanarMap | None:
    """Rotation system of ``g`` on the sphere, or None when ``g`` is not planar.

    ``g`` must be connected.  Each 2-connected block is embedded on its own;
    at a cut vertex the block rotations are concatenated, which places every
    block inside one corner of the others.
    """
    adj = g.adjacency()
    if g.n < 2 or not _connected(adj):
        return None
    if g.n >= 3 and len(g.edges) > 3 * g.n - 6:
        return None
    rotation: list[list[int]] = [[] for _ in range(g.n)]
    for block in _blocks(adj):
        if len(block) == 1:
            u, w = block[0]
            rotation[u].append(w)
            rotation[w].append(u)
            continue
        verts = sorted({x for e in block for x in e})
        local = {v: i for i, v in enumerate(verts)}
        sub: list[set[int]] = [set() for _ in verts]
        for u, w in block:
            sub[local[u]].add(local[w])
            sub[local[w]].add(local[u])
        faces = _embed_biconnected(sub)
        if faces is None:
            return None
        for i, rot in enumerate(from_faces(len(verts), faces).rotation_lists()):
            rotation[verts[i]].extend(verts[j] for j in rot)
    return from_rotation(rotation)


def filter_candidate(g: CandidateGraph) -> PlanarMap | None:
    """3-connected planar embedding of a candidate, else None."""
    if not three_connected_adjacency(g.adjacency()):
        return None
    return planarity_embed(g)


# -- census ---------------------------------------------------------------

def _dedup_sorted(maps) -> list[PlanarMap]:
    keyed: dict[bytes, PlanarMap] = {}
    for m in maps:
        key = canonical_form(m)
        keyed.setdefault(key, m)
    return [keyed[k] for k in sorted(keyed)]


def census(n: int, source: str | Path = "internal") -> list[PlanarMap]:
    """3-connected planar maps with n vertices and 2n - 2 edges, one per
    isomorphism class, sorted by canonical form.

    ``source`` is ``"internal"`` or a planar_code file path (optionally
    spelled ``file:<path>``).  Records in a file with a different vertex or
    edge count, or failing 3-connectivity, are dropped.
    """
    if str(source) == "internal":
        if n > MAX_INTERNAL_N:
            raise SizeCap(f"internal census supports n <= {MAX_INTERNAL_N}")
        maps = (filter_candidate(g) for g in enumerate_candidates(n))
        return _dedup_sorted(m for m in maps if m is not None)
    path = str(source)
    if path.startswith("file:"):
        path = path[5:]
    data = Path(path).read_bytes()
    pool = codec.read_planar_code(data)
    keep = [
        m
        for m in pool
        if m.vertex_count == n and m.edge_count == 2 * n - 2 and is_three_connected(m)
    ]
    if len(keep) != len(pool):
        log.info("census(%d): dropped %d of %d records", n, len(pool) - len(keep), len(pool))
    return _dedup_sorted(keep)
