"""Command-line interface, driven through main(argv)."""

import json

import pytest

from isingtree.cli import main
from isingtree.generators import cycle


def test_generate_then_verify_file(tmp_path, capsys):
    path = tmp_path / "c4.json"
    assert main(["generate", "cycle", "4", "--out", str(path)]) == 0
    capsys.readouterr()
    assert main(["verify", "--input", str(path)]) == 0
    out = capsys.readouterr().out
    assert "identities hold" in out
    assert out.count("[ok  ]") == 11
    assert "FAIL" not in out


def test_generate_rejects_degenerate_cycle(capsys):
    assert main(["generate", "cycle", "2"]) == 1
    assert "error:" in capsys.readouterr().err


def test_generate_rejects_unknown_name(capsys):
    assert main(["generate", "banana", "3"]) == 1
    assert "unknown generator" in capsys.readouterr().err


def test_verify_inline_generator(capsys):
    assert main(["verify", "--generator", "grid:3,3"]) == 0
    assert "identities hold" in capsys.readouterr().out


def test_verify_fails_at_impossible_tolerance(capsys):
    assert main(["verify", "--generator", "cycle:3",
                 "--tolerance", "1e-18"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_json_format(capsys):
    assert main(["verify", "--generator", "cycle:3", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["pass"] is True
    assert {c["name"] for c in data["checks"]} >= {
        "main-theorem[spin-route]", "main-theorem[determinant-route]"}


def test_verify_writes_report_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["verify", "--generator", "cycle:4", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["pass"] is True
    assert "constants" in data


def test_verify_alternate_root(capsys):
    m, _ = cycle(3)
    alt = max(m.outer_orbit)
    assert main(["verify", "--generator", "cycle:3",
                 "--root-s", str(alt)]) == 0


def test_verify_interior_root_is_an_error(capsys):
    m, _ = cycle(3)
    bad = next(d for d in range(6) if not m.is_outer_dart(d))
    assert main(["verify", "--generator", "cycle:3",
                 "--root-s", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err


def test_non_isoradial_input_fails_cleanly(tmp_path, capsys):
    path = tmp_path / "c4.json"
    main(["generate", "cycle", "4", "--out", str(path)])
    data = json.loads(path.read_text())
    for v in data["vertices"]:
        v["x"] *= 1.4
        v["y"] *= 1.4
    del data["angles"]
    path.write_text(json.dumps(data))
    capsys.readouterr()
    assert main(["verify", "--input", str(path)]) == 1
    assert "error:" in capsys.readouterr().err


def test_missing_input_file_fails_cleanly(tmp_path, capsys):
    assert main(["verify", "--input", str(tmp_path / "nope.json")]) == 1
    assert "error:" in capsys.readouterr().err


def test_shapeless_json_input_fails_cleanly(tmp_path, capsys):
    path = tmp_path / "broke.json"
    path.write_text('{"not": "a map"}')
    assert main(["verify", "--input", str(path)]) == 1
    assert "malformed graph document" in capsys.readouterr().err


def test_export_is_deterministic(capsys):
    assert main(["export", "extended_double", "--generator", "cycle:4",
                 "--format", "json"]) == 0
    first = capsys.readouterr().out
    assert main(["export", "extended_double", "--generator", "cycle:4",
                 "--format", "json"]) == 0
    assert capsys.readouterr().out == first
    tags = {v["tag"] for v in json.loads(first)["vertices"]}
    assert tags == {"white", "black-primal", "black-dual"}


def test_export_primal_json_carries_angles(capsys):
    assert main(["export", "primal", "--generator", "cycle:3",
                 "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["angles"]["0"]["pi_rational"] == "1/6"


def test_export_quadri_tiling_dot(capsys):
    assert main(["export", "quadri_tiling", "--generator", "cycle:4",
                 "--format", "dot"]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("graph")
    assert dot.count("shape=") == 16


def test_export_directed_stages(tmp_path, capsys):
    assert main(["export", "G0", "--generator", "cycle:3",
                 "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert {a["kind"] for a in data["arcs"]} == {"cos", "sin", "root"}
    assert main(["export", "G", "--generator", "cycle:3",
                 "--format", "dot"]) == 0
    assert capsys.readouterr().out.startswith("digraph")


def test_export_unknown_target_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["export", "octagon", "--generator", "cycle:3"])
    assert exc.value.code == 2
