"""Dart-based combinatorial maps on the sphere.

A map is stored as three arrays over darts (directed half-edges):

    twin[d]    the opposite dart of the same edge
    next[d]    the next dart counter-clockwise around origin[d]
    origin[d]  the vertex the dart leaves from

Faces are the orbits of ``d -> next[twin[d]]``.  Edge ``k`` owns darts
``2k`` and ``2k + 1`` whenever a map is built through :func:`from_rotation`,
but nothing below relies on that pairing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InvalidMap

__all__ = [
    "Face",
    "PlanarMap",
    "from_rotation",
    "from_faces",
    "trace_faces",
    "dual",
    "is_three_connected",
    "canonical_form",
    "graph_canonical_form",
    "three_connected_adjacency",
]


@dataclass(frozen=True)
class Face:
    id: int
    darts: tuple[int, ...]
    boundary_vertices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.darts)


@dataclass(frozen=True, eq=False)
class PlanarMap:
    """Immutable rotation system of a connected planar multigraph."""

    vertex_count: int
    twin: tuple[int, ...]
    next: tuple[int, ...]
    origin: tuple[int, ...]
    simple: bool = field(default=True)

    def __post_init__(self) -> None:
        _validate(self)

    # -- basic counts -------------------------------------------------
    @property
    def dart_count(self) -> int:
        return len(self.twin)

    @property
    def edge_count(self) -> int:
        return len(self.twin) // 2

    @property
    def face_count(self) -> int:
        return len(self.faces)

    # -- derived structure (cached) ----------------------------------
    @cached_property
    def faces(self) -> tuple[Face, ...]:
        return tuple(trace_faces(self))

    @cached_property
    def dart_face(self) -> tuple[int, ...]:
        out = [0] * self.dart_count
        for f in self.faces:
            for d in f.darts:
                out[d] = f.id
        return tuple(out)

    @cached_property
    def rotations(self) -> tuple[tuple[int, ...], ...]:
        """Darts around each vertex in counter-clockwise order."""
        first = [-1] * self.vertex_count
        for d in range(self.dart_count):
            v = self.origin[d]
            if first[v] < 0 or d < first[v]:
                first[v] = d
        rots = []
        for v in range(self.vertex_count):
            d = first[v]
            cyc = [d]
            e = self.next[d]
            while e != d:
                cyc.append(e)
                e = self.next[e]
            rots.append(tuple(cyc))
        return tuple(rots)

    def target(self, d: int) -> int:
        return self.origin[self.twin[d]]

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def degrees(self) -> list[int]:
        return [len(r) for r in self.rotations]

    def neighbors(self, v: int) -> list[int]:
        """Neighbours of ``v`` in rotation order (repeats for multi-edges)."""
        return [self.target(d) for d in self.rotations[v]]

    def edges(self) -> list[tuple[int, int]]:
        """Underlying edges as sorted vertex pairs, one per edge, sorted."""
        out = []
        for d in range(self.dart_count):
            if d < self.twin[d]:
                a, b = self.origin[d], self.target(d)
                out.append((a, b) if a <= b else (b, a))
        out.sort()
        return out

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges())

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u <= v else (v, u)) in self.edge_set

    def dart_between(self, u: int, v: int) -> int:
        for d in self.rotations[u]:
            if self.target(d) == v:
                return d
        raise KeyError((u, v))

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for a, b in self.edge_set:
            if a != b:
                adj[a].add(b)
                adj[b].add(a)
        return adj

    def rotation_lists(self) -> list[list[int]]:
        """Neighbour lists in rotation order, the shape planar_code stores."""
        return [self.neighbors(v) for v in range(self.vertex_count)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlanarMap):
            return NotImplemented
        return self.rotation_lists() == other.rotation_lists()

    def __hash__(self) -> int:
        return hash(tuple(tuple(r) for r in self.rotation_lists()))

    def __repr__(self) -> str:
        return (
            f"PlanarMap(n={self.vertex_count}, e={self.edge_count}, "
            f"f={self.face_count})"
        )


def _validate(m: PlanarMap) -> None:
    nd = len(m.twin)
    if len(m.next) != nd or len(m.origin) != nd:
        raise InvalidMap("dart arrays differ in length")
    if nd == 0 or nd % 2:
        raise InvalidMap("a map needs a positive even number of darts")
    if m.vertex_count < 1:
        raise InvalidMap("vertex_count must be positive")
    for d in range(nd):
        t = m.twin[d]
        if not 0 <= t < nd or t == d or m.twin[t] != d:
            raise InvalidMap(f"twin is not a fixed-point-free involution at dart {d}")
        if not 0 <= m.origin[d] < m.vertex_count:
            raise InvalidMap(f"origin of dart {d} out of range")
    if sorted(m.next) != list(range(nd)):
        raise InvalidMap("next is not a permutation")
    seen = [False] * nd
    covered = [False] * m.vertex_count
    for d in range(nd):
        if seen[d]:
            continue
        v = m.origin[d]
        if covered[v]:
            raise InvalidMap(f"vertex {v} has more than one rotation cycle")
        covered[v] = True
        e = d
        while not seen[e]:
            seen[e] = True
            if m.origin[e] != v:
                raise InvalidMap(f"next leaves vertex {v} at dart {e}")
            e = m.next[e]
    if not all(covered):
        raise InvalidMap("isolated vertex")
    # connectivity over {twin, next}
    reach = [False] * nd
    stack = [0]
    reach[0] = True
    while stack:
        d = stack.pop()
        for e in (m.twin[d], m.next[d]):
            if not reach[e]:
                reach[e] = True
                stack.append(e)
    if not all(reach):
        raise InvalidMap("map is not connected")
    if m.simple:
        pairs = set()
        for d in range(nd):
            a, b = m.origin[d], m.origin[m.twin[d]]
            if a == b:
                raise InvalidMap(f"loop at vertex {a} in a simple map")
            if (a, b) in pairs:
                raise InvalidMap(f"parallel edges {a}-{b} in a simple map")
            pairs.add((a, b))
    faces = _face_orbits(m)
    if m.vertex_count - nd // 2 + len(faces) != 2:
        raise InvalidMap("Euler characteristic is not 2; not a sphere map")


def _face_orbits(m: PlanarMap) -> list[list[int]]:
    nd = len(m.twin)
    seen = [False] * nd
    orbits = []
    for d in range(nd):
        if seen[d]:
            continue
        orb = []
        e = d
        while not seen[e]:
            seen[e] = True
            orb.append(e)
            e = m.next[m.twin[e]]
        orbits.append(orb)
    return orbits


def trace_faces(m: PlanarMap) -> list[Face]:
    """Face orbits of ``next . twin``, numbered by their smallest dart.

    Each orbit starts at its smallest dart, so the result depends only on
    the permutations and not on the order darts are visited.
    """
    faces = []
    for i, orb in enumerate(_face_orbits(m)):
        faces.append(Face(i, tuple(orb), tuple(m.origin[d] for d in orb)))
    return faces


def from_rotation(rotation: Sequence[Sequence[int]], simple: bool = True) -> PlanarMap:
    """Build a map from neighbour lists given in counter-clockwise order.

    Multi-edges are paired up by order of appearance: the k-th occurrence
    of ``v`` in ``rotation[u]`` is matched with the k-th occurrence of ``u``
    scanning ``rotation[v]`` backwards.  Loops are not supported here.
    """
    n = len(rotation)
    dart_of: dict[tuple[int, int], list[int]] = {}
    origin: list[int] = []
    nxt: list[int] = []
    first = []
    for u, nbrs in enumerate(rotation):
        if not nbrs:
            raise InvalidMap(f"vertex {u} has no neighbours")
        base = len(origin)
        first.append(base)
        k = len(nbrs)
        for i, v in enumerate(nbrs):
            if not 0 <= v < n:
                raise InvalidMap(f"neighbour {v} of vertex {u} out of range")
            if v == u:
                raise InvalidMap("loops are not supported by from_rotation")
            origin.append(u)
            nxt.append(base + (i + 1) % k)
            dart_of.setdefault((u, v), []).append(base + i)
    twin = [-1] * len(origin)
    for (u, v), ds in dart_of.items():
        if u > v:
            continue
        back = dart_of.get((v, u), [])
        if len(back) != len(ds):
            raise InvalidMap(f"edge {u}-{v} is not listed symmetrically")
        for a, b in zip(ds, reversed(back)):
            twin[a] = b
            twin[b] = a
    return PlanarMap(n, tuple(twin), tuple(nxt), tuple(origin), simple=simple)


def from_faces(n: int, faces: Iterable[Sequence[int]]) -> PlanarMap:
    """Build a simple map from oriented face cycles.

    Every directed edge ``(u, v)`` must occur in exactly one cycle; a face
    ``(.., u, v, w, ..)`` then fixes the rotation step ``(v,u) -> (v,w)``.
    """
    succ: dict[tuple[int, int], tuple[int, int]] = {}
    for cyc in faces:
        k = len(cyc)
        for i in range(k):
            u, v, w = cyc[i - 1], cyc[i], cyc[(i + 1) % k]
            if (v, u) in succ:
                raise InvalidMap(f"directed edge {u}->{v} used by two faces")
            succ[(v, u)] = (v, w)
    rotation: list[list[int]] = []
    for v in range(n):
        outs = sorted(w for (x, w) in succ if x == v)
        if not outs:
            raise InvalidMap(f"vertex {v} lies on no face")
        cyc = [outs[0]]
        cur = succ[(v, outs[0])][1]
        while cur != outs[0]:
            cyc.append(cur)
            cur = succ[(v, cur)][1]
        if len(cyc) != len(outs):
            raise InvalidMap(f"faces around vertex {v} do not close up")
        rotation.append(cyc)
    return from_rotation(rotation)


def dual(m: PlanarMap) -> PlanarMap:
    """Dual map on the same darts: vertex i of the dual is face i of ``m``.

    The dual rotation is the face permutation ``next . twin``; its own faces
    are the orbits of ``next``, so ``dual(dual(m))`` has exactly the
    rotation of ``m`` up to vertex renumbering.
    """
    nd = m.dart_count
    nxt = tuple(m.next[m.twin[d]] for d in range(nd))
    origin = m.dart_face
    dm = PlanarMap(m.face_count, m.twin, nxt, origin, simple=False)
    if m.simple and _is_simple(dm):
        dm = PlanarMap(m.face_count, m.twin, nxt, origin, simple=True)
    return dm


def _is_simple(m: PlanarMap) -> bool:
    pairs = set()
    for d in range(m.dart_count):
        a, b = m.origin[d], m.target(d)
        if a == b or (a, b) in pairs:
            return False
        pairs.add((a, b))
    return True


def _connected_without(adj: Sequence[set[int]], removed: set[int]) -> bool:
    n = len(adj)
    start = next((v for v in range(n) if v not in removed), None)
    if start is None:
        return True
    seen = {start} | removed
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def three_connected_adjacency(adj: Sequence[set[int]]) -> bool:
    """True iff the simple graph stays connected after deleting any two vertices."""
    n = len(adj)
    if n < 4:
        return False
    if not _connected_without(adj, set()):
        return False
    if any(len(a) < 3 for a in adj):
        return False
    for a, b in combinations(range(n), 2):
        if not _connected_without(adj, {a, b}):
            return False
    return True


def is_three_connected(m: PlanarMap) -> bool:
    if m.vertex_count < 4:
        return False
    return three_connected_adjacency(m.adjacency())


# -- canonical forms -----------------------------------------------------

def _traversal_code(m: PlanarMap, start: int, forward: bool) -> list[int]:
    """Breadth-first relabelling code of a rotation system from one dart.

    Vertices are numbered 1, 2, ... in discovery order; each vertex then
    writes its neighbours' numbers in rotation order starting from the
    dart it was discovered through, followed by 0.
    """
    n = m.vertex_count
    nxt = m.next
    if not forward:
        inv = [0] * m.dart_count
        for d, e in enumerate(nxt):
            inv[e] = d
        nxt = inv
    twin, origin = m.twin, m.origin
    label = [0] * n
    entry = [0] * n
    v0 = origin[start]
    label[v0] = 1
    entry[v0] = start
    order = [v0]
    count = 1
    code: list[int] = []
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        d0 = entry[v]
        d = d0
        while True:
            w = origin[twin[d]]
            if not label[w]:
                count += 1
                label[w] = count
                entry[w] = twin[d]
                order.append(w)
            code.append(label[w])
            d = nxt[d]
            if d == d0:
                break
        code.append(0)
    return code


def _map_code(m: PlanarMap) -> bytes:
    """Minimum traversal code over both orientations and a reduced set of
    starting darts.

    Starting darts are restricted to those maximising the
    reflection-invariant key ``(deg origin, deg target, sizes of the two
    incident faces as an unordered pair)``, which keeps the result an
    isomorphism invariant while skipping most starts.
    """
    deg = [len(r) for r in m.rotations]
    fsize = [f.size for f in m.faces]
    df = m.dart_face
    best_key = None
    starts: list[int] = []
    for d in range(m.dart_count):
        t = m.twin[d]
        a, b = fsize[df[d]], fsize[df[t]]
        key = (deg[m.origin[d]], deg[m.origin[t]], max(a, b), min(a, b))
        if best_key is None or key > best_key:
            best_key = key
            starts = [d]
        elif key == best_key:
            starts.append(d)
    best: list[int] | None = None
    for d in starts:
        for fw in (True, False):
            c = _traversal_code(m, d, fw)
            if best is None or c < best:
                best = c
    assert best is not None
    return bytes([m.vertex_count, 1]) + bytes(best)


def _refine(adjm: list[list[int]], cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition (counting multiplicities)."""
    cells = [list(c) for c in cells]
    changed = True
    while changed:
        changed = False
        for ci in range(len(cells)):
            target = cells[ci]
            new: list[list[int]] = []
            for cell in cells:
                if len(cell) == 1:
                    new.append(cell)
                    continue
                groups: dict[int, list[int]] = {}
                for v in cell:
                    groups.setdefault(sum(adjm[v][w] for w in target), []).append(v)
                if len(groups) == 1:
                    new.append(cell)
                else:
                    for k in sorted(groups):
                        new.append(groups[k])
                    changed = True
            cells = new
            if changed:
                break
    return cells


def graph_canonical_form(adjm: Sequence[Sequence[int]]) -> bytes:
    """Canonical form of a multigraph given by its symmetric count matrix.

    Degree refinement to an equitable partition, then individualisation of
    each vertex of the first non-trivial cell in turn; the lexicographically
    smallest relabelled matrix over all leaves is the form.  No automorphism
    pruning, so cost grows with the automorphism group; fine for n <= 14.
    """
    n = len(adjm)
    a = [list(r) for r in adjm]
    deg = [sum(r) for r in a]
    start: dict[tuple[int, int], list[int]] = {}
    for v in range(n):
        start.setdefault((deg[v], a[v][v]), []).append(v)
    cells0 = [start[k] for k in sorted(start)]
    best: list[int] | None = None

    def code_for(order: list[int]) -> list[int]:
        return [a[order[i]][order[j]] for i in range(n) for j in range(i, n)]

    def search(cells: list[list[int]]) -> None:
        nonlocal best
        cells = _refine(a, cells)
        idx = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if idx is None:
            c = code_for([c[0] for c in cells])
            if best is None or c < best:
                best = c
            return
        cell = cells[idx]
        for v in cell:
            rest = [w for w in cell if w != v]
            search(cells[:idx] + [[v], rest] + cells[idx + 1 :])

    search(cells0)
    assert best is not None
    head = [n, 0]
    if max(best, default=0) > 255:
        raise ValueError("edge multiplicity too large for canonical encoding")
    return bytes(head) + bytes(best)


def canonical_form(m: PlanarMap) -> bytes:
    """Isomorphism key of the underlying graph.

    Simple 3-connected maps have a unique sphere embedding up to reflection,
    so the rotation-system traversal code over both orientations is already
    a graph invariant; everything else goes through the general refinement
    search.  The second byte tags which route produced the key.
    """
    if m.simple and is_three_connected(m):
        return _map_code(m)
    n = m.vertex_count
    adjm = [[0] * n for _ in range(n)]
    for d in range(m.dart_count):
        if d < m.twin[d]:
            u, v = m.origin[d], m.target(d)
            adjm[u][v] += 1
            if u != v:
                adjm[v][u] += 1
    return graph_canonical_form(adjm)

