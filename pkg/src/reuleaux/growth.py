"""Polyhedral graphs grown from wheels, used to build planar_code fixtures.

Every simple 3-connected graph other than a wheel has an edge whose
deletion or contraction leaves a simple 3-connected graph (Tutte's wheel
theorem).  Running that backwards on plane maps, every polyhedral map is
reached from a wheel by repeatedly

* adding a chord inside a face between two non-adjacent vertices, or
* splitting a vertex along its rotation into two vertices that each keep
  at least two of the old neighbours.

Adding an edge moves (n, m) to (n, m + 1) and a split to (n + 1, m + 1),
so to reach (N, 2N - 2) only levels with m <= n + N - 2 are needed.
Isomorphic maps are merged by the rotation-system traversal code.

This is an independent route to the same census the labeled backtrack in
:mod:`reuleaux.generator` produces, and it scales to n = 14.
"""

from __future__ import annotations

import logging
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

Rotation = tuple[tuple[int, ...], ...]


def wheel(spokes: int) -> Rotation:
    """Wheel with ``spokes`` rim vertices 0..k-1 and hub k."""
    k = spokes
    rot = []
    for i in range(k):
        rot.append(((i + 1) % k, k, (i - 1) % k))
    rot.append(tuple(range(k)))
    return tuple(rot)


def faces_of(rot: Sequence[Sequence[int]]) -> list[list[int]]:
    """Face vertex cycles: after arriving at v from u, leave towards the
    neighbour following u in v's rotation."""
    pos = [{w: i for i, w in enumerate(r)} for r in rot]
    seen: set[tuple[int, int]] = set()
    faces = []
    for u, r in enumerate(rot):
        for v in r:
            if (u, v) in seen:
                continue
            cyc = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                cyc.append(a)
                rv = rot[b]
                c = rv[(pos[b][a] + 1) % len(rv)]
                a, b = b, c
            faces.append(cyc)
    return faces


def code(rot: Sequence[Sequence[int]]) -> bytes:
    """Isomorphism key of a 3-connected plane map (reflections included)."""
    n = len(rot)
    pos = [{w: i for i, w in enumerate(r)} for r in rot]
    deg = [len(r) for r in rot]
    # size of the face left of dart (u, v) when walking the face rule
    fsize: dict[tuple[int, int], int] = {}
    for cyc in faces_of(rot):
        k = len(cyc)
        for i in range(k):
            fsize[(cyc[i], cyc[(i + 1) % k])] = k
    best_key = None
    starts: list[tuple[int, int]] = []
    for u in range(n):
        for i, v in enumerate(rot[u]):
            a, b = fsize[(u, v)], fsize[(v, u)]
            key = (deg[u], deg[v], max(a, b), min(a, b))
            if best_key is None or key > best_key:
                best_key = key
                starts = [(u, i)]
            elif key == best_key:
                starts.append((u, i))
    best = None
    for u0, i0 in starts:
        for step in (1, -1):
            label = [0] * n
            entry = [0] * n
            label[u0] = 1
            entry[u0] = i0
            order = [u0]
            cnt = 1
            out = []
            j = 0
            while j < len(order):
                v = order[j]
                j += 1
                r = rot[v]
                d = deg[v]
                e = entry[v]
                for t in range(d):
                    w = r[(e + step * t) % d]
                    lw = label[w]
                    if not lw:
                        cnt += 1
                        lw = label[w] = cnt
                        entry[w] = pos[w][v]
                        order.append(w)
                    out.append(lw)
                out.append(0)
                if best is not None and out > best[: len(out)]:
                    break
            else:
                if best is None or out < best:
                    best = out
    return bytes(best)


def add_chords(rot: Rotation) -> Iterable[Rotation]:
    """Every map obtained by drawing one new edge inside a face."""
    for cyc in faces_of(rot):
        k = len(cyc)
        if k < 4:
            continue
        for i in range(k):
            for j in range(i + 2, k):
                if i == 0 and j == k - 1:
                    continue
                x, y = cyc[i], cyc[j]
                if y in rot[x]:
                    continue
                new = list(rot)
                new[x] = _insert_after(rot[x], cyc[i - 1], y)
                new[y] = _insert_after(rot[y], cyc[j - 1], x)
                yield tuple(new)


def _insert_after(r: tuple[int, ...], anchor: int, w: int) -> tuple[int, ...]:
    i = r.index(anchor)
    return r[: i + 1] + (w,) + r[i + 1 :]


def splits(rot: Rotation) -> Iterable[Rotation]:
    """Every map obtained by splitting one vertex into two adjacent ones."""
    n = len(rot)
    for v in range(n):
        r = rot[v]
        d = len(r)
        if d < 4:
            continue
        for i in range(d):
            for a in range(2, d - 1):
                keep = tuple(r[(i + t) % d] for t in range(a))
                move = tuple(r[(i + t) % d] for t in range(a, d))
                new = list(rot)
                new[v] = keep + (n,)
                new.append(move + (v,))
                for w in move:
                    rw = rot[w]
                    new[w] = tuple(n if x == v else x for x in rw)
                yield tuple(new)


def grow(max_n: int, progress: bool = False) -> dict[int, list[Rotation]]:
    """All polyhedral maps with k vertices and 2k - 2 edges, k = 4..max_n.

    Returns representatives sorted by their traversal code.
    """
    def wanted(n: int, m: int) -> bool:
        return n <= max_n and m <= n + max_n - 2 and m <= 3 * n - 6 and 2 * m >= 3 * n

    levels: dict[tuple[int, int], dict[bytes, Rotation]] = {}
    for k in range(3, max_n):
        w = wheel(k)
        levels.setdefault((k + 1, 2 * k), {})[code(w)] = w
    max_m = 2 * max_n - 2
    for m in range(6, max_m + 1):
        for n in range(4, max_n + 1):
            if not wanted(n, m):
                continue
            level = levels.setdefault((n, m), {})
            parent = levels.get((n, m - 1), {})
            for rot in parent.values():
                for child in add_chords(rot):
                    level.setdefault(code(child), child)
            parent = levels.get((n - 1, m - 1), {})
            for rot in parent.values():
                for child in splits(rot):
                    level.setdefault(code(child), child)
            if progress:
                log.info("level n=%d m=%d: %d maps", n, m, len(level))
        # levels two edge-counts back are no longer needed
        for key in [k for k in levels if k[1] < m - 1 and k[1] != 2 * k[0] - 2]:
            del levels[key]
    return {
        k: [levels[(k, 2 * k - 2)][c] for c in sorted(levels[(k, 2 * k - 2)])]
        for k in range(4, max_n + 1)
        if (k, 2 * k - 2) in levels
    }
