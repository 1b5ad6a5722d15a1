import csv
import json

import pytest

from app.cli import EXIT_CONFIG, EXIT_OK, build_parser, main


def test_analyze_prints_json(config_path, capsys):
    assert main(["analyze", "--config", str(config_path)]) == EXIT_OK
    body = json.loads(capsys.readouterr().out)
    assert body["lambda_b"] == 1e-5


def test_unknown_key_is_a_config_error(tmp_path):
    config = tmp_path / "bad.conf"
    config.write_text("lambda_b = 1e-5\nlambda_bs = 2e-5\n", encoding="utf-8")
    assert main(["analyze", "--config", str(config)]) == EXIT_CONFIG


def test_missing_config_is_a_config_error(tmp_path):
    assert main(["optimize", "--config", str(tmp_path / "nowhere.conf")]) == EXIT_CONFIG


def test_optimize_writes_result(config_path, tmp_path):
    out = tmp_path / "radar.json"
    assert main(["optimize", "--config", str(config_path), "--mode", "radar", "--out", str(out)]) == EXIT_OK
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["result"]["mode"] == "radar_only"
    assert payload["cell_radius_m"] > 0


def test_sweep_writes_csv(config_path, tmp_path):
    out = tmp_path / "density.csv"
    argv = [
        "sweep", "--config", str(config_path), "--variable", "lambda_b",
        "--logspace", "1e-7", "1e-3", "5", "--out", str(out), "--workers", "1",
    ]
    assert main(argv) == EXIT_OK
    with open(out, encoding="utf-8", newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 5
    assert {row["engine"] for row in rows} == {"analytic"}
    assert float(rows[0]["value"]) == pytest.approx(1e-7)
    assert float(rows[-1]["value"]) == pytest.approx(1e-3)


def test_non_monotone_sweep_is_rejected(config_path, tmp_path):
    argv = [
        "sweep", "--config", str(config_path), "--variable", "h_t",
        "--values", "1.5,50,20", "--out", str(tmp_path / "x.csv"),
    ]
    assert main(argv) == EXIT_CONFIG
    assert not (tmp_path / "x.csv").exists()


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
