from __future__ import annotations

import functools
from pathlib import Path

import pytest

from reuleaux import codec, growth
from reuleaux.generator import CandidateGraph, planarity_embed
from reuleaux.planar_map import from_rotation
from reuleaux.selfdual import search_strong_involutions

FIXTURES = Path(__file__).parent / "fixtures"

# census counts of strongly involutive self-dual graphs per vertex count
TABLE1 = {4: 1, 5: 0, 6: 1, 7: 1, 8: 2, 9: 4, 10: 11, 11: 24, 12: 72, 13: 212, 14: 674}


def fixture_path(n: int) -> Path:
    """Census input for n: full pool (n <= 8), self-dual pool (9..12) or
    strongly involutive maps only (13, 14)."""
    if n <= 8:
        return FIXTURES / f"polyhedra_n{n}.pc"
    if n <= 12:
        return FIXTURES / f"selfdual_n{n}.pc"
    return FIXTURES / f"sisd_n{n}.pc"


@functools.lru_cache(maxsize=None)
def fixture_maps(name: str):
    return tuple(codec.read_planar_code((FIXTURES / name).read_bytes()))


@functools.lru_cache(maxsize=None)
def sisd_census(n: int):
    """(map, tau) for every strongly involutive self-dual graph with n
    vertices, from the fixtures."""
    out = []
    for m in codec.read_planar_code(fixture_path(n).read_bytes()):
        found = search_strong_involutions(m, limit=1)
        if found:
            out.append((m, found[0]))
    return tuple(out)


def k4():
    return from_rotation([[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]])


def wheel(spokes: int = 5):
    return from_rotation(growth.wheel(spokes))


def cube():
    edges = set()
    for v in range(8):
        for bit in (1, 2, 4):
            w = v ^ bit
            edges.add((min(v, w), max(v, w)))
    return planarity_embed(CandidateGraph(8, frozenset(edges)))


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def record_acceptance(request):
    """Append a one-line PASS/FAIL verdict to the terminal summary."""

    def record(cid: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {cid}: {detail}"
        request.config.acceptance_lines.append(line)
        print(line)

    return record
