"""CLI subcommands that run without a service."""

import json

import pandas as pd

from spraychart.cli import main


def test_demo_data_creates_parent_dirs(tmp_path, capsys):
    out = tmp_path / "nested" / "dir" / "tracking.csv"
    rc = main(["demo-data", str(out), "--pitches", "400", "--pitchers", "3",
               "--batters", "4", "--seed", "5"])
    assert rc == 0
    assert "wrote 400 pitches" in capsys.readouterr().out
    frame = pd.read_csv(out)
    assert len(frame) == 400
    assert {"pitcher", "batter", "pitch_type", "hc_x", "hc_y"} <= set(frame.columns)


def test_validate_prints_one_line_per_scenario(tmp_path, capsys):
    json_out = tmp_path / "report.json"
    csv_out = tmp_path / "report.csv"
    rc = main(["validate", "--replications", "2",
               "--json-out", str(json_out), "--csv-out", str(csv_out)])
    assert rc == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
    assert len(lines) == 4
    for line in lines:
        assert "mse_blended=" in line and "lambda_mean=" in line
    body = json.loads(json_out.read_text())
    assert len(body["reports"]) == 4
    assert csv_out.exists()


def test_validate_single_scenario(capsys):
    rc = main(["validate", "--replications", "2", "--scenario", "no-pool"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.count("mse_blended=") == 1
    assert "no-pool" in out


def test_validate_unknown_scenario_fails(capsys):
    rc = main(["validate", "--replications", "2", "--scenario", "nope"])
    assert rc == 1
    assert "unknown scenario" in capsys.readouterr().err
