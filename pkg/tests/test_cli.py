import csv
import json
import math
import os

import pytest

from alphapatch.cli import main, config_hash, load_sim_config, lemma_tasks


def test_lemma_task_count():
    tasks = lemma_tasks()
    assert len(tasks) == 14
    names = [name for name, _ in tasks]
    assert "kC:0.15" in names and "kC:0.45" in names
    assert "d6:right" in names


def test_prove_lemma_single_task(tmp_path, capsys):
    code = main(["prove-lemma", "--only", "kC:0.45", "--out-dir", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "[PASS] kC:0.45" in out
    cert = tmp_path / "lemma_certificates.csv"
    assert cert.exists()
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "prove-lemma"
    assert str(cert) in manifest["outputs"]


def test_prove_lemma_coarse_width_fails(tmp_path, capsys):
    code = main(["prove-lemma", "--only", "d6:right", "--min-width", "0.1", "--out-dir", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 1
    assert "[FAIL]" in out


def test_prove_lemma_unknown_task(tmp_path, capsys):
    code = main(["prove-lemma", "--only", "nope", "--out-dir", str(tmp_path)])
    assert code == 2


def test_prove_rotation_single_pair(tmp_path, capsys):
    code = main(
        [
            "prove-rotation",
            "--alpha", "1.0",
            "--axis-ratio", "0.5",
            "--out-dir", str(tmp_path),
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "[PASS] alpha=1.0 R=0.5" in out
    rows = (tmp_path / "rotation_certificates.csv").read_text().strip().splitlines()
    assert rows[0] == "alpha,axis_ratio,outcome,interior_subintervals"
    assert rows[1].startswith("1.0,0.5,positive")


def test_prove_rotation_rejects_bad_alpha(tmp_path, capsys):
    code = main(["prove-rotation", "--alpha", "2.5", "--out-dir", str(tmp_path)])
    assert code == 2


def test_prove_convexity_vortex(tmp_path, capsys):
    code = main(
        [
            "prove-convexity",
            "--c-phase", "0.15",
            "--alpha", "0:0",
            "--workers", "1",
            "--out-dir", str(tmp_path),
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "negative" in out
    assert "jump" in out  # the +-2pi interpretation line
    with open(tmp_path / "negative.csv") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 2
    assert rows[1][3] == "vortex"
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config"]["c_phase"] == 0.15


def test_prove_convexity_requires_alpha(tmp_path):
    assert main(["prove-convexity", "--out-dir", str(tmp_path)]) == 2


def test_simulate_circle(tmp_path, capsys):
    code = main(
        [
            "simulate",
            "--set", "shape=circle",
            "--set", "n=64",
            "--set", "alpha=1.0",
            "--set", "t_final=0.2",
            "--set", "snapshot_interval=0.1",
            "--out-dir", str(tmp_path),
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "no convexity loss" in out
    with open(tmp_path / "diagnostics.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "min_curvature", "area", "arc_chord_min", "speed_variation"]
    assert len(rows) >= 3
    area = float(rows[-1][2])
    assert abs(area - math.pi) < 1e-6
    with open(tmp_path / "snapshots.csv") as fh:
        header = fh.readline().strip()
    assert header == "t,x_index,z1,z2"


def test_simulate_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("shape=circle\nn=64\nalpha=0.5\nt_final=0.1\nsnapshot_interval=0.1\n")
    code = main(["simulate", str(cfg), "--out-dir", str(tmp_path / "out")])
    assert code == 0
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["config"]["alpha"] == 0.5
    assert manifest["config_hash"] == config_hash(manifest["config"])


def test_sim_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("shapee=circle\n")
    with pytest.raises(ValueError):
        load_sim_config(str(cfg))


def test_config_hash_stable():
    pairs = {"a": 1, "b": "x"}
    assert config_hash(pairs) == config_hash({"b": "x", "a": 1})
    assert config_hash(pairs) != config_hash({"a": 2, "b": "x"})


def test_full_sweep_tiling():
    from alphapatch.cli import full_sweep_intervals

    tiles = full_sweep_intervals(0.25)
    assert tiles[0] == (0.0, 0.0)
    assert tiles[1][0] > 0.0
    assert tiles[-1][1] < 2.0
    for (_, ha), (lb, _) in zip(tiles[1:], tiles[2:]):
        assert ha == lb
    assert sum(hi - lo for lo, hi in tiles) > 1.99
