"""Command-line pipeline: census -> color -> embed -> export.

Every stage reads and writes plain files so intermediate results can be
inspected.  Text outputs start with comment lines recording the command
line and seed; binary planar_code outputs get a ``.txt`` sidecar instead.

Exit codes: 0 success (non-converged embeddings are reported, not fatal),
1 usage error, 2 data or certification error.
"""

from __future__ import annotations

import argparse
import logging
import shlex
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from . import codec
from .coloring import four_coloring
from .embedder import EmbedderConfig, QualityReport, embed
from .errors import NonConvergence, RejectNonInjective, ReuleauxError
from .generator import census
from .planar_map import PlanarMap
from .scad_export import export_reuleaux
from .selfdual import diameter_graph, search_strong_involutions

log = logging.getLogger("reuleaux")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit code 1 instead of argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass
class Context:
    argv: list[str]
    seed: int | None = None

    def header(self) -> list[str]:
        lines = ["command: " + shlex.join(["reuleaux", *self.argv])]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        return lines


def _graph_name(i: int) -> str:
    return f"graph_{i:04d}"


def _load_maps(path: Path) -> list[PlanarMap]:
    return codec.read_planar_code(path.read_bytes())


def _first_tau(m: PlanarMap):
    found = search_strong_involutions(m, limit=1)
    return found[0] if found else None


def _run_jobs(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- stages -------------------------------------------------------------------

def cmd_census(n: int, source: str, out: Path, ctx: Context) -> tuple[Path, int, int]:
    if n < 4:
        raise UsageError("--n must be at least 4")
    if source != "internal" and not source.startswith("file:"):
        raise UsageError("--source must be 'internal' or 'file:<path>'")
    pool = census(n, source)
    good = [m for m in pool if _first_tau(m) is not None]
    out.mkdir(parents=True, exist_ok=True)
    pc = out / f"census_n{n}.pc"
    pc.write_bytes(codec.write_planar_code(good))
    summary = f"n={n} candidates={len(pool)} selfdual={len(good)}"
    side = [f"# {h}" for h in ctx.header()] + [summary]
    (out / f"census_n{n}.txt").write_text("\n".join(side) + "\n")
    print(summary)
    return pc, len(pool), len(good)


def _color_one(args) -> tuple[int, list[int] | None, str]:
    i, m = args
    tau = _first_tau(m)
    if tau is None:
        return i, None, "no strongly involutive self-duality"
    try:
        coloring, _ = four_coloring(m, tau)
    except ReuleauxError as exc:
        return i, None, f"{type(exc).__name__}: {exc}"
    return i, coloring, ""


def cmd_color(inp: Path, out: Path, ctx: Context, jobs: int = 1) -> int:
    maps = _load_maps(inp)
    out.mkdir(parents=True, exist_ok=True)
    failures = 0
    for i, coloring, err in _run_jobs(_color_one, list(enumerate(maps)), jobs):
        if coloring is None:
            failures += 1
            print(f"{_graph_name(i)}: certification failed: {err}", file=sys.stderr)
            continue
        text = codec.write_coloring(coloring, ctx.header() + [f"graph: {i}"])
        (out / f"{_graph_name(i)}.txt").write_text(text)
    print(f"colored {len(maps) - failures}/{len(maps)}")
    return failures


def _embed_one(args) -> tuple[int, object, QualityReport | None, bool, float, str]:
    i, m, config = args
    t0 = time.perf_counter()
    tau = _first_tau(m)
    if tau is None:
        return i, None, None, False, 0.0, "no strongly involutive self-duality"
    D = diameter_graph(m, tau)
    try:
        P, report = embed(D, config, graph_id=i)
        ok = True
    except NonConvergence as exc:
        P, report, ok = exc.embedding, exc.report, False
    return i, P, report, ok, time.perf_counter() - t0, ""


def cmd_embed(inp: Path, out: Path, config: EmbedderConfig, ctx: Context, jobs: int = 1) -> int:
    maps = _load_maps(inp)
    out.mkdir(parents=True, exist_ok=True)
    items = [(i, m, config) for i, m in enumerate(maps)]
    rows = []
    failures = 0
    hyper = (
        f"config: pop={config.population_size or f'{config.pop_factor}*3n'} "
        f"F={config.diff_weight} CR={config.crossover_rate} "
        f"max_gens={config.max_generations} restarts={config.restarts} "
        f"epsilon={config.epsilon} alpha={config.alpha} K={config.penalty_k} "
        f"threshold={config.stop_threshold} box={config.box_halfwidth}"
    )
    for i, P, report, ok, secs, err in _run_jobs(_embed_one, items, jobs):
        if report is None:
            failures += 1
            print(f"{_graph_name(i)}: {err}", file=sys.stderr)
            continue
        head = ctx.header() + [hyper, f"graph: {i}", f"success: {'true' if ok else 'false'}"]
        (out / f"{_graph_name(i)}.txt").write_text(codec.write_embedding(P, report, head))
        rows.append((i, ok, report))
        print(
            f"{_graph_name(i)} n={len(P)} success={ok} J={report.objective:.3g} "
            f"avg_edge_error={report.avg_edge_error:.3g} time={secs:.2f}s"
        )
    succ = sum(ok for _, ok, _ in rows)
    worst = max((r.avg_edge_error for _, ok, r in rows if ok), default=float("nan"))
    lines = [f"# {h}" for h in ctx.header() + [hyper]]
    lines.append("# graph success objective max_edge_error avg_edge_error min_pair_distance diameter generations restarts")
    for i, ok, r in rows:
        lines.append(
            f"{_graph_name(i)} {'true' if ok else 'false'} {r.objective:.6g} "
            f"{r.max_edge_error:.6g} {r.avg_edge_error:.6g} {r.min_pair_distance:.6g} "
            f"{r.diameter:.6g} {r.generations_used} {r.restarts_used}"
        )
    lines.append(f"success {succ}/{len(maps)}")
    lines.append(f"worst_avg_edge_error {worst:.6g}")
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print(f"embedded {succ}/{len(maps)} (worst avg_edge_error {worst:.3g})")
    return failures


def cmd_export(inputs: Sequence[Path], out: Path, ctx: Context) -> int:
    files: list[Path] = []
    for p in inputs:
        files.extend(sorted(p.glob("graph_*.txt")) if p.is_dir() else [p])
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    for f in files:
        emb = codec.read_embedding(f.read_text())
        try:
            script = export_reuleaux(emb.points, header=ctx.header() + [f"source: {f.name}"])
        except RejectNonInjective as exc:
            print(f"warning: {f.name}: not injective, skipped ({exc})", file=sys.stderr)
            continue
        (out / (f.stem + ".scad")).write_text(script.text)
        written += 1
    print(f"exported {written}/{len(files)}")
    return 0


# -- argument handling ----------------------------------------------------------

def _add_embed_flags(p: argparse.ArgumentParser) -> None:
    d = EmbedderConfig()
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--epsilon", type=float, default=d.epsilon)
    p.add_argument("--alpha", type=float, default=d.alpha)
    p.add_argument("--penalty-k", type=float, default=d.penalty_k)
    p.add_argument("--threshold", type=float, default=d.stop_threshold)
    p.add_argument("--pop", type=int, default=None, help=f"population size (default {d.pop_factor}*3n)")
    p.add_argument("--weight", type=float, default=d.diff_weight)
    p.add_argument("--crossover", type=float, default=d.crossover_rate)
    p.add_argument("--max-gens", type=int, default=d.max_generations)
    p.add_argument("--restarts", type=int, default=d.restarts)


def _config(a: argparse.Namespace) -> EmbedderConfig:
    try:
        return EmbedderConfig(
            epsilon=a.epsilon,
            alpha=a.alpha,
            penalty_k=a.penalty_k,
            stop_threshold=a.threshold,
            population_size=a.pop,
            diff_weight=a.weight,
            crossover_rate=a.crossover,
            max_generations=a.max_gens,
            restarts=a.restarts,
            seed=a.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="reuleaux", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("census", help="strongly involutive self-dual maps with n vertices")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--source", default="internal", help="internal | file:<planar_code path>")
    c.add_argument("--out", type=Path, required=True)

    k = sub.add_parser("color", help="4-colour the diameter graphs of a census file")
    k.add_argument("--input", type=Path, required=True)
    k.add_argument("--out", type=Path, required=True)
    k.add_argument("--jobs", type=int, default=1)

    e = sub.add_parser("embed", help="embed the diameter graphs of a census file")
    e.add_argument("--input", type=Path, required=True)
    e.add_argument("--out", type=Path, required=True)
    e.add_argument("--jobs", type=int, default=1)
    _add_embed_flags(e)

    x = sub.add_parser("export", help="OpenSCAD scripts from embedding files")
    x.add_argument("--input", type=Path, nargs="+", required=True)
    x.add_argument("--out", type=Path, required=True)

    pl = sub.add_parser("pipeline", help="census, color, embed and export in one go")
    pl.add_argument("--n", type=int, required=True)
    pl.add_argument("--source", default="internal")
    pl.add_argument("--out", type=Path, required=True)
    pl.add_argument("--jobs", type=int, default=1)
    _add_embed_flags(pl)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING)
    ctx = Context(argv, getattr(a, "seed", None))
    try:
        if getattr(a, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        if a.command == "census":
            cmd_census(a.n, a.source, a.out, ctx)
            return EXIT_OK
        if a.command == "color":
            return EXIT_DATA if cmd_color(a.input, a.out, ctx, a.jobs) else EXIT_OK
        if a.command == "embed":
            return EXIT_DATA if cmd_embed(a.input, a.out, _config(a), ctx, a.jobs) else EXIT_OK
        if a.command == "export":
            return cmd_export(a.input, a.out, ctx)
        # pipeline
        config = _config(a)
        pc, _, _ = cmd_census(a.n, a.source, a.out / "census", ctx)
        bad = cmd_color(pc, a.out / "color", ctx, a.jobs)
        bad += cmd_embed(pc, a.out / "embed", config, ctx, a.jobs)
        cmd_export([a.out / "embed"], a.out / "scad", ctx)
        return EXIT_DATA if bad else EXIT_OK
    except UsageError as exc:
        print(f"reuleaux: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ReuleauxError, OSError, ValueError) as exc:
        print(f"reuleaux: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
