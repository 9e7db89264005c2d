#!/usr/bin/env python3
"""Build the planar_code fixtures in tests/fixtures.

* polyhedra_n{n}.pc, n = 4..9: every 3-connected planar map with n
  vertices and 2n - 2 edges, grown from wheels.
* selfdual_n{n}.pc, n = 9..12: the self-dual members of the same pools.
* sisd_n{n}.pc, n = 13, 14: strongly involutive self-dual maps grown from
  K4 by inverse remove-contract (the full pools are too large to grow
  here).

Each file gets a ``.cmd`` sidecar with the exact command that made it.

    python tools/make_fixtures.py --out tests/fixtures --polyhedra 9 \
        --selfdual 9 12 --sisd 13 14
"""

from __future__ import annotations

import argparse
import logging
import pickle
import shlex
import sys
import time
from pathlib import Path

from reuleaux import codec, expansion, growth
from reuleaux.planar_map import canonical_form, dual, from_rotation


def _write(out: Path, name: str, maps, note: str) -> None:
    data = codec.write_planar_code(maps)
    (out / name).write_bytes(data)
    cmd = shlex.join(["python", "tools/make_fixtures.py", *sys.argv[1:]])
    (out / (name + ".cmd")).write_text(
        f"{cmd}\n# {note}\n# records: {len(maps)}\n"
        "# cache files are written by this same command when absent\n"
    )
    print(f"{name}: {len(maps)} maps", flush=True)


def _sorted(maps):
    return [m for _, m in sorted((canonical_form(m), m) for m in maps)]


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=Path("tests/fixtures"))
    p.add_argument("--polyhedra", type=int, default=9, help="full pools for n = 4..this")
    p.add_argument("--selfdual", type=int, nargs=2, default=(9, 12), metavar=("LO", "HI"))
    p.add_argument("--sisd", type=int, nargs=2, default=(13, 14), metavar=("LO", "HI"))
    p.add_argument("--cache", type=Path, help="pickle of a previous growth.grow() result")
    p.add_argument(
        "--expansion-cache",
        type=Path,
        help="pickle {n: [rotation lists]} of a previous expansion.expand() result",
    )
    p.add_argument(
        "--degree-two-budget",
        type=int,
        default=1,
        help="most degree-2 vertices allowed on an intermediate expansion map",
    )
    a = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    a.out.mkdir(parents=True, exist_ok=True)

    top = max(a.polyhedra, a.selfdual[1])
    t0 = time.time()
    if a.cache and a.cache.exists():
        pools = pickle.loads(a.cache.read_bytes())
    else:
        pools = growth.grow(top, progress=True)
        if a.cache:
            a.cache.write_bytes(pickle.dumps(pools))
    print(f"growth to n={top}: {time.time() - t0:.0f}s", flush=True)

    for n in range(4, a.polyhedra + 1):
        maps = _sorted(from_rotation(r) for r in pools[n])
        _write(a.out, f"polyhedra_n{n}.pc", maps, "grown from wheels (reuleaux.growth)")
    for n in range(a.selfdual[0], a.selfdual[1] + 1):
        maps = [from_rotation(r) for r in pools[n]]
        sd = _sorted(m for m in maps if canonical_form(m) == canonical_form(dual(m)))
        _write(a.out, f"selfdual_n{n}.pc", sd, "self-dual members of the wheel-grown pool")

    lo, hi = a.sisd
    if hi >= lo:
        t0 = time.time()
        if a.expansion_cache and a.expansion_cache.exists():
            found = pickle.loads(a.expansion_cache.read_bytes())
        else:
            found = {
                n: [g.rotation_lists() for g in gs]
                for n, gs in expansion.expand(hi, progress=True, max_low=a.degree_two_budget).items()
            }
            if a.expansion_cache:
                a.expansion_cache.write_bytes(pickle.dumps(found))
        print(f"expansion to n={hi}: {time.time() - t0:.0f}s", flush=True)
        for n in range(lo, hi + 1):
            maps = {}
            for rot in found[n]:
                m = from_rotation(rot)
                maps.setdefault(canonical_form(m), m)
            _write(
                a.out,
                f"sisd_n{n}.pc",
                [maps[k] for k in sorted(maps)],
                "strongly involutive self-dual maps grown from K4 (reuleaux.expansion)",
            )


if __name__ == "__main__":
    main()
