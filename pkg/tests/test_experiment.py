import csv
import io

import pytest
import yaml

from cogchan.experiment import (
    CSV_HEADER,
    ConfigError,
    ExperimentSpec,
    oracle_command,
    oracle_rows,
    parse_config,
    results_csv,
    run_command,
    sample_channels,
    sidecar_path,
    spec_from_dict,
)


def _write(tmp_path, data, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(data) if not isinstance(data, str) else data)
    return p


def test_minimal_config_defaults(tmp_path):
    spec = parse_config(_write(tmp_path, {"channels": {"count": 8, "occupancy": [0.1, 0.9]}, "nodes": 10, "trials": 500}))
    assert spec.sensing == "perfect" and spec.window is None
    assert spec.pr_blocking is True
    assert spec.channels.base_reception == 1.0
    assert spec.slots == 200
    assert spec.topology == "full_mesh"
    assert spec.seed == 0 and spec.channels.seed == 0
    assert len(spec.channels.build()) == 8


def test_count_shorthand():
    assert spec_from_dict({"channels": 5}).channels.count == 5


@pytest.mark.parametrize(
    "raw, field",
    [
        ({"channels": {"occupancy": [0.5, 1.2]}}, "channels.occupancy"),
        ({"channels": {"occupancy": [0.6, 0.5]}}, "channels.occupancy"),
        ({"channels": {"occupancy": [0.1, 0.95], "burst_len": 10}}, "channels.burst_len"),
        ({"channels": {"base_reception": 1.5}}, "channels.base_reception"),
        ({"channels": [{"occupancy": 1.0}]}, "channels[0].occupancy"),
        ({"channels": [{"occupancy": 0.9, "burst_len": 2}]}, "channels[0]"),
        ({"nodes": 1}, "nodes"),
        ({"trials": "many"}, "trials"),
        ({"seed": -3}, "seed"),
        ({"strategy": "greedy"}, "strategy"),
        ({"sensing": "window:0"}, "sensing"),
        ({"sensing": "oracle"}, "sensing"),
        ({"sweep": [4, 0]}, "sweep"),
        ({"bogus": 1}, "bogus"),
        ({"topology": [[0, 1]]}, "topology"),
        ({"pr_blocking": "maybe"}, "pr_blocking"),
    ],
)
def test_validation_names_field(raw, field):
    with pytest.raises(ConfigError, match=field.replace("[", r"\[").replace("]", r"\]")):
        spec_from_dict(raw)


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        parse_config(tmp_path / "nope.yaml")
    with pytest.raises(ConfigError, match="malformed"):
        parse_config(_write(tmp_path, "nodes: [1, 2\n"))
    with pytest.raises(ConfigError, match="mapping"):
        parse_config(_write(tmp_path, "- 1\n- 2\n"))


def test_flags_override_file(tmp_path):
    path = _write(tmp_path, {"nodes": 6, "trials": 20, "channels": {"count": 3, "burst_len": 12}})
    spec = parse_config(path, {"nodes": 4, "channels": 5, "sensing": "window:30", "trials": None})
    assert spec.nodes == 4 and spec.trials == 20
    assert spec.channels.count == 5 and spec.channels.burst_len == 12
    assert spec.window == 30
    echoed = yaml.safe_load(spec.to_yaml())
    assert echoed["nodes"] == 4 and echoed["channels"]["count"] == 5


def test_channels_flag_rejected_for_explicit_list(tmp_path):
    path = _write(tmp_path, {"channels": [{"occupancy": 0.2}, {"occupancy": 0.4}]})
    with pytest.raises(ConfigError, match="explicit"):
        parse_config(path, {"channels": 3})


def test_sampled_channels_extend_prefix():
    short, long = sample_channels(4, seed=9), sample_channels(16, seed=9)
    assert long[:4] == short
    assert all(0.1 <= c.occupancy <= 0.9 for c in long)
    qs = sample_channels(6, base_reception=(0.5, 0.8), seed=2)
    assert all(0.5 <= c.base_reception <= 0.8 for c in qs)
    assert sample_channels(3, base_reception=(0.5, 0.8), seed=2) == qs[:3]


SMALL = {"nodes": 10, "trials": 8, "slots": 40, "seed": 3, "channels": {"count": 4}}


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_run_rows_and_schema(tmp_path):
    spec = spec_from_dict({**SMALL, "out": str(tmp_path / "r.csv")})
    text = run_command(spec)
    rows = _rows(text)
    assert rows[0] == CSV_HEADER
    assert len(rows) == 1 + 20
    assert [r[0] for r in rows[1:]] == ["adaptive"] * 10 + ["random"] * 10
    assert (tmp_path / "r.csv").read_text() == text
    side = yaml.safe_load(sidecar_path(tmp_path / "r.csv").read_text())
    assert side["seed"] == 3 and side["channels"]["seed"] == 3
    for r in rows[1:]:
        for v in r[3:]:
            float(v)
            assert "," not in v


def test_run_is_byte_identical():
    spec = spec_from_dict(SMALL)
    assert results_csv(spec) == results_csv(spec)


def test_sweep_rows():
    spec = spec_from_dict({**SMALL, "sweep": [4, 8, 12, 16]})
    rows = _rows(results_csv(spec, sweep=True))[1:]
    assert len(rows) == 4 * 20
    assert [int(r[1]) for r in rows[::20]] == [4, 8, 12, 16]


def test_sweep_requires_counts():
    with pytest.raises(ConfigError, match="sweep"):
        results_csv(spec_from_dict(SMALL), sweep=True)


def test_echo_round_trip(tmp_path):
    spec = spec_from_dict({**SMALL, "sensing": "window:5", "strategy": "random",
                           "channels": {"count": 3, "base_reception": [0.6, 0.9], "seed": 77}})
    again = parse_config(_write(tmp_path, spec.to_yaml(), "echo.yaml"))
    assert again == spec
    assert results_csv(again) == results_csv(spec)


def test_explicit_channel_round_trip(tmp_path):
    spec = spec_from_dict({**SMALL, "channels": [{"occupancy": 0.2, "burst_len": 4, "base_reception": 0.9},
                                                 {"occupancy": 0.6}]})
    assert parse_config(_write(tmp_path, spec.to_yaml())) == spec


def test_oracle_table_contains_closed_forms():
    spec = spec_from_dict({**SMALL, "trials": 30, "channels": [{"occupancy": p} for p in (0.1, 0.3, 0.5, 0.7)]})
    table = oracle_command(spec)
    assert "0.150000" in table and "0.900000" in table
    assert all(abs(r.z) <= 3 for r in oracle_rows(spec))


def test_oracle_single_channel_rows_identical():
    spec = spec_from_dict({**SMALL, "channels": [{"occupancy": 0.3}]})
    rows = oracle_rows(spec)
    adaptive = [(r.metric, r.analytic, r.simulated) for r in rows if r.strategy == "adaptive"]
    random = [(r.metric, r.analytic, r.simulated) for r in rows if r.strategy == "random"]
    assert adaptive == random


def test_oracle_rejects_windowed():
    with pytest.raises(ConfigError, match="perfect"):
        oracle_command(spec_from_dict({**SMALL, "sensing": "window:10"}))


def test_unwritable_output(tmp_path):
    spec = spec_from_dict({**SMALL, "trials": 2, "out": str(tmp_path / "missing" / "r.csv")})
    with pytest.raises(OSError):
        run_command(spec)
