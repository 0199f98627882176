import csv
import io
import subprocess
import sys

import yaml

from cogchan.cli import main


def test_run_to_stdout(capsys):
    assert main(["run", "--channels", "3", "--nodes", "4", "--trials", "5", "--slots", "20"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 1 + 2 * 4


def test_run_with_config_and_out(tmp_path, caplog):
    caplog.set_level("INFO", logger="cogchan")
    cfg = tmp_path / "c.yaml"
    cfg.write_text(yaml.safe_dump({"nodes": 5, "trials": 4, "slots": 30, "strategy": "adaptive"}))
    out = tmp_path / "out.csv"
    assert main(["run", "--config", str(cfg), "--seed", "11", "--sensing", "window:5", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 1 + 5
    side = yaml.safe_load((tmp_path / "out.csv.spec.yaml").read_text())
    assert side["seed"] == 11 and side["sensing"] == "window:5"
    assert "resolved spec" in caplog.text


def test_sweep_and_oracle(capsys):
    assert main(["sweep", "--sweep", "2,4", "--nodes", "3", "--trials", "4", "--slots", "12"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 1 + 2 * 2 * 3
    assert main(["oracle", "--channels", "2", "--trials", "20", "--slots", "20"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("strategy") and out.count("\n") == 5


def test_validation_error_exit_code(capsys, tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("channels:\n  occupancy: [0.5, 1.2]\n")
    assert main(["run", "--config", str(cfg)]) == 2
    assert "channels.occupancy" in capsys.readouterr().err
    assert main(["run", "--config", str(tmp_path / "none.yaml")]) == 2
    assert main(["oracle", "--sensing", "window:4", "--trials", "2"]) == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "cogchan", "run", "--channels", "2", "--nodes", "2", "--trials", "2", "--slots", "4"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0
    assert res.stdout.splitlines()[0].startswith("strategy,n_channels,node_id")
