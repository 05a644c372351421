"""CLI surface: every subcommand exercised through main()."""

from __future__ import annotations

import json

from zol.cli import main
from zol.graphs import format_graph, parse_graph
from zol.constructions import make_m_cycle


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_interval_prints_exact_endpoints(capsys):
    code, out, _ = run(capsys, "interval", "--k", "4", "--frac", "2/3",
                       "--strong")
    assert code == 0
    assert "(85/128, 2/3)" in out
    assert "(53/80, 2/3)" in out
    assert "strong improves on basic: True" in out


def test_interval_rejects_bad_fraction(capsys):
    code, _, err = run(capsys, "interval", "--k", "4", "--frac", "x/y")
    assert code == 2
    assert "error" in err


def test_refute_alpha(capsys):
    code, out, _ = run(capsys, "refute-alpha", "--m", "2", "--k", "15")
    assert code == 0
    assert "alpha = 15/16" in out
    assert "k1 = 3" in out


def test_refute_alpha_domain_error(capsys):
    code, _, err = run(capsys, "refute-alpha", "--m", "2", "--k", "3")
    assert code == 2
    assert "10m - 5" in err


def test_construct_m_cycle_file(tmp_path, capsys):
    out_file = tmp_path / "cycle.el"
    code, _, _ = run(capsys, "construct", "m-cycle", "--m", "3", "--d", "4",
                     "-o", str(out_file))
    assert code == 0
    assert parse_graph(out_file.read_text()) == make_m_cycle(3, 4)


def test_construct_to_stdout(capsys):
    code, out, _ = run(capsys, "construct", "figure-eight", "--m", "2",
                       "--l1", "8", "--l2", "8")
    assert code == 0
    assert out.startswith("15 16\n")


def test_construct_m_chain_reports_ends(capsys):
    code, out, _ = run(capsys, "construct", "m-chain", "--m", "3", "--d", "2")
    assert code == 0
    assert "# ends: 0 4" in out
    # the emitted text (comment included) parses back
    assert parse_graph(out).vertex_count == 5


def test_construct_balanced_found_and_not(tmp_path, capsys):
    code, out, _ = run(capsys, "construct", "balanced", "--density", "3/2")
    assert code == 0 and out.startswith("4 6\n")
    code, out, _ = run(capsys, "construct", "balanced", "--density", "3/5",
                       "--vmax", "8")
    assert code == 1
    assert "no strictly balanced graph" in out


def test_ehr_subcommand(tmp_path, capsys):
    left = tmp_path / "c5.el"
    right = tmp_path / "c6.el"
    left.write_text(format_graph(make_m_cycle(2, 5)))
    right.write_text(format_graph(make_m_cycle(2, 6)))
    strategy = tmp_path / "strategy.json"
    code, out, _ = run(capsys, "ehr", "--left", str(left), "--right",
                       str(right), "-k", "3", "--strategy", str(strategy))
    assert code == 0
    assert "winner: spoiler" in out
    doc = json.loads(strategy.read_text())
    assert doc["winner"] == "spoiler"


def test_ehr_transcript(tmp_path, capsys):
    g = tmp_path / "k3.el"
    g.write_text("3 3\n0 1\n0 2\n1 2\n")
    transcript = tmp_path / "t.json"
    code, out, _ = run(capsys, "ehr", "--left", str(g), "--right", str(g),
                       "-k", "2", "--transcript", str(transcript),
                       "--moves", "left:0", "right:1")
    assert code == 0
    doc = json.loads(transcript.read_text())
    assert doc["final_check"] is True


def test_ehr_missing_file(capsys):
    code, _, err = run(capsys, "ehr", "--left", "/nonexistent.el",
                       "--right", "/nonexistent.el", "-k", "2")
    assert code == 2
    assert "error" in err


def test_mc_run_ok_and_breach(tmp_path, capsys):
    manifest = tmp_path / "suite.json"
    manifest.write_text(json.dumps({"experiments": [
        {"name": "edges", "n": 6, "samples": 10, "seed": 1,
         "event": "has_copy", "pattern": "edge", "p": 1.0,
         "expect": {"min_frequency": 0.99}}]}))
    code, out, _ = run(capsys, "mc-run", "--manifest", str(manifest),
                       "--out", str(tmp_path / "results"))
    assert code == 0
    assert "edges" in out
    assert (tmp_path / "results" / "results.csv").exists()

    manifest.write_text(json.dumps({"experiments": [
        {"name": "edges", "n": 6, "samples": 10, "seed": 1,
         "event": "has_copy", "pattern": "edge", "p": 0.0,
         "expect": {"min_frequency": 0.5}}]}))
    code, _, err = run(capsys, "mc-run", "--manifest", str(manifest))
    assert code == 1
    assert "BREACH" in err
