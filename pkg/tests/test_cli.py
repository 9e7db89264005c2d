import subprocess
import sys

import pytest

from reuleaux import codec
from reuleaux.cli import main

from conftest import FIXTURES, k4, wheel


def run(*args):
    return main([str(a) for a in args])


def test_census_internal_n6(tmp_path, capsys):
    assert run("census", "--n", 6, "--source", "internal", "--out", tmp_path) == 0
    assert "n=6 candidates=2 selfdual=1" in capsys.readouterr().out
    maps = codec.read_planar_code((tmp_path / "census_n6.pc").read_bytes())
    assert len(maps) == 1
    side = (tmp_path / "census_n6.txt").read_text()
    assert side.startswith("# command: reuleaux census --n 6")


def test_census_internal_n5(tmp_path, capsys):
    assert run("census", "--n", 5, "--out", tmp_path) == 0
    assert "selfdual=0" in capsys.readouterr().out


def test_census_from_file(tmp_path, capsys):
    src = FIXTURES / "selfdual_n10.pc"
    assert run("census", "--n", 10, "--source", f"file:{src}", "--out", tmp_path) == 0
    assert "selfdual=11" in capsys.readouterr().out


def test_usage_errors(tmp_path, capsys):
    assert run("census", "--n", 3, "--out", tmp_path) == 1
    assert run("census", "--n", 6, "--source", "plantri", "--out", tmp_path) == 1
    assert run("bogus") == 1
    assert run("embed", "--input", "x.pc", "--out", tmp_path, "--epsilon", "2") == 1
    assert run("color", "--input", "x.pc", "--out", tmp_path, "--jobs", "0") == 1


def test_missing_input_is_data_error(tmp_path):
    assert run("color", "--input", tmp_path / "nope.pc", "--out", tmp_path) == 2


def test_color_k4(tmp_path):
    src = tmp_path / "k4.pc"
    src.write_bytes(codec.write_planar_code([k4()]))
    assert run("color", "--input", src, "--out", tmp_path / "c") == 0
    text = (tmp_path / "c" / "graph_0000.txt").read_text()
    assert codec.read_coloring(text) == [0, 1, 2, 3]


def test_color_partial_failure(tmp_path, capsys):
    # the 6-wheel is self-dual but not strongly involutive
    src = tmp_path / "mixed.pc"
    src.write_bytes(codec.write_planar_code([k4(), wheel(6), wheel(5)]))
    assert run("color", "--input", src, "--out", tmp_path / "c") == 2
    assert sorted(p.name for p in (tmp_path / "c").iterdir()) == ["graph_0000.txt", "graph_0002.txt"]
    assert "graph_0001" in capsys.readouterr().err


def test_color_n8_fixture(tmp_path):
    census_dir = tmp_path / "census"
    assert run("census", "--n", 8, "--source", f"file:{FIXTURES / 'polyhedra_n8.pc'}", "--out", census_dir) == 0
    assert run("color", "--input", census_dir / "census_n8.pc", "--out", tmp_path / "c") == 0
    assert len(list((tmp_path / "c").glob("graph_*.txt"))) == 2


def test_embed_nonconvergence_is_reported(tmp_path):
    src = tmp_path / "w.pc"
    src.write_bytes(codec.write_planar_code([wheel(5)]))
    rc = run("embed", "--input", src, "--out", tmp_path / "e", "--max-gens", 2, "--restarts", 1)
    assert rc == 0
    emb = codec.read_embedding((tmp_path / "e" / "graph_0000.txt").read_text())
    assert "success: false" in emb.comments
    assert "success 0/1" in (tmp_path / "e" / "summary.txt").read_text()


def test_embed_and_export_k4(tmp_path):
    src = tmp_path / "k4.pc"
    src.write_bytes(codec.write_planar_code([k4()]))
    assert run("embed", "--input", src, "--out", tmp_path / "e", "--seed", 4) == 0
    emb = codec.read_embedding((tmp_path / "e" / "graph_0000.txt").read_text())
    assert emb.report["max_edge_error"] <= 1e-7
    assert "seed: 4" in emb.comments
    assert run("export", "--input", tmp_path / "e", "--out", tmp_path / "s") == 0
    scad = (tmp_path / "s" / "graph_0000.scad").read_text()
    assert scad.count("sphere(") == 4


def test_export_skips_mappings(tmp_path, capsys):
    from reuleaux.coloring import tetra_coords

    P = list(tetra_coords()) + [tetra_coords()[0]]
    (tmp_path / "graph_0000.txt").write_text(codec.write_embedding(P))
    assert run("export", "--input", tmp_path / "graph_0000.txt", "--out", tmp_path / "s") == 0
    assert not (tmp_path / "s" / "graph_0000.scad").exists()
    assert "not injective" in capsys.readouterr().err


def _tree(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_pipeline_jobs_do_not_change_results(tmp_path):
    src = f"file:{FIXTURES / 'polyhedra_n7.pc'}"
    out = tmp_path / "run"
    assert run("pipeline", "--n", 7, "--source", src, "--out", out, "--seed", 3, "--jobs", 1) == 0
    one = _tree(out)
    # the header records the command line, so compare bodies only
    assert run("pipeline", "--n", 7, "--source", src, "--out", out, "--seed", 3, "--jobs", 2) == 0
    two = _tree(out)
    assert one.keys() == two.keys()
    strip = lambda b: b"\n".join(l for l in b.split(b"\n") if b"command:" not in l)  # noqa: E731
    assert all(strip(one[k]) == strip(two[k]) for k in one)


def test_entry_point_help():
    r = subprocess.run([sys.executable, "-m", "reuleaux.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "pipeline" in r.stdout
