"""OpenSCAD scripts for Reuleaux polyhedra: the intersection of unit balls
centred at the embedded vertices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import RejectNonInjective

DEFAULT_RESOLUTION = 96


@dataclass(frozen=True)
class ScadScript:
    text: str
    resolution: int = DEFAULT_RESOLUTION


def _num(x: float) -> str:
    return f"{float(x):.17g}"


def export_reuleaux(
    embedding,
    resolution: int = DEFAULT_RESOLUTION,
    header: Sequence[str] = (),
    epsilon: float = 0.2,
) -> ScadScript:
    """One ``intersection()`` of ``n`` translated unit spheres.

    Rejects point sets with two vertices closer than ``epsilon``: those are
    mappings, not embeddings, and the intersection would silently drop a
    vertex.
    """
    P = np.asarray(embedding, dtype=float)
    if P.ndim != 2 or P.shape[1] != 3 or len(P) == 0:
        raise ValueError(f"expected an (n, 3) point array, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise ValueError("coordinates must be finite")
    diff = P[:, None, :] - P[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    np.fill_diagonal(dist, np.inf)
    if len(P) > 1 and dist.min() < epsilon:
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        raise RejectNonInjective(
            f"vertices {min(i, j)} and {max(i, j)} are {dist[i, j]:.3g} apart (< {epsilon})"
        )
    lines = [f"// {h}" for h in header]
    lines.append("intersection() {")
    for x, y, z in P:
        lines.append(
            f"  translate([{_num(x)}, {_num(y)}, {_num(z)}]) sphere(r = 1, $fn = {resolution});"
        )
    lines.append("}")
    return ScadScript("\n".join(lines) + "\n", resolution)
