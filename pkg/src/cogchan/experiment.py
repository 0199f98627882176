"""Experiment specs: YAML config, channel generation, CSV and oracle tables.

A config file is YAML. Every key is optional::

    nodes: 10             # CR nodes
    trials: 500           # independent trials per strategy and channel count
    slots: 200            # counted slots per trial
    seed: 0               # master seed (unsigned 64-bit)
    strategy: both        # adaptive | random | both
    sensing: perfect      # perfect | window:W
    pr_blocking: true     # PR-busy slots destroy the transmission
    delivery: others      # others | all  (delivery-ratio denominator)
    topology: full_mesh   # or an n x n 0/1 adjacency matrix
    workers: 1            # processes used for trials
    sweep: [4, 8, 12, 16] # channel counts for the sweep command
    out: results.csv
    channels:             # sampled rule; `channels: 8` is shorthand for count
      count: 8
      occupancy: [0.1, 0.9]
      burst_len: 10
      base_reception: 1.0  # scalar or [lo, hi] sampled uniformly
      seed: 0              # defaults to the master seed

``channels`` may instead be an explicit list of
``{occupancy, burst_len, base_reception}`` mappings.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import yaml

from .channel import ChannelParams, min_burst_len
from .engine import SimConfig, run_experiment
from .metrics import oracle_expected_delivery, oracle_expected_receivers
from .strategy import Strategy

CSV_HEADER = [
    "strategy",
    "n_channels",
    "node_id",
    "delivery_mean",
    "delivery_ci_low",
    "delivery_ci_high",
    "receivers_mean",
    "receivers_ci_low",
    "receivers_ci_high",
]

STRATEGY_CHOICES = ("adaptive", "random", "both")


class ConfigError(ValueError):
    pass


def sample_channels(count, occupancy=(0.1, 0.9), burst_len=10.0, base_reception=1.0, seed=0):
    """Draw ``count`` channels; a longer draw with the same seed extends a shorter one."""
    occ_seq, q_seq = np.random.SeedSequence(seed).spawn(2)
    lo, hi = occupancy
    occ = np.random.default_rng(occ_seq).uniform(lo, hi, count)
    if isinstance(base_reception, (tuple, list)):
        qs = np.random.default_rng(q_seq).uniform(base_reception[0], base_reception[1], count)
    else:
        qs = np.full(count, float(base_reception))
    return tuple(ChannelParams(float(p), float(burst_len), float(q)) for p, q in zip(occ, qs))


@dataclass(frozen=True)
class ChannelRule:
    count: int = 8
    occupancy: tuple[float, float] = (0.1, 0.9)
    burst_len: float = 10.0
    base_reception: Union[float, tuple[float, float]] = 1.0
    seed: Optional[int] = None
    explicit: Optional[tuple[ChannelParams, ...]] = None

    def build(self, count: Optional[int] = None) -> tuple[ChannelParams, ...]:
        if self.explicit is not None:
            if count is None:
                return self.explicit
            if count > len(self.explicit):
                raise ConfigError(f"channels: explicit list has {len(self.explicit)} entries, {count} requested")
            return self.explicit[:count]
        return sample_channels(
            self.count if count is None else count, self.occupancy, self.burst_len, self.base_reception, self.seed
        )

    @property
    def n_channels(self) -> int:
        return len(self.explicit) if self.explicit is not None else self.count

    def to_dict(self):
        if self.explicit is not None:
            return [asdict(c) for c in self.explicit]
        q = list(self.base_reception) if isinstance(self.base_reception, tuple) else self.base_reception
        return {
            "count": self.count,
            "occupancy": list(self.occupancy),
            "burst_len": self.burst_len,
            "base_reception": q,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class ExperimentSpec:
    nodes: int = 10
    trials: int = 500
    slots: int = 200
    seed: int = 0
    strategy: str = "both"
    sensing: str = "perfect"
    pr_blocking: bool = True
    delivery: str = "others"
    topology: Union[str, tuple[tuple[int, ...], ...]] = "full_mesh"
    workers: int = 1
    sweep: Optional[tuple[int, ...]] = None
    out: Optional[str] = None
    channels: ChannelRule = field(default_factory=ChannelRule)

    @property
    def window(self) -> Optional[int]:
        return None if self.sensing == "perfect" else int(self.sensing.split(":", 1)[1])

    @property
    def strategies(self) -> list[Strategy]:
        if self.strategy == "both":
            return [Strategy.ADAPTIVE, Strategy.RANDOM]
        return [Strategy(self.strategy)]

    def sim_config(self, strategy: Strategy, n_channels: Optional[int] = None) -> SimConfig:
        return SimConfig(
            n_nodes=self.nodes,
            channels=self.channels.build(n_channels),
            strategy=strategy,
            window=self.window,
            pr_blocking=self.pr_blocking,
            slots_per_trial=self.slots,
            n_trials=self.trials,
            master_seed=self.seed,
            adjacency=None if self.topology == "full_mesh" else self.topology,
            exclude_own=self.delivery == "others",
        )

    def to_dict(self) -> dict[str, Any]:
        d = {
            "nodes": self.nodes,
            "trials": self.trials,
            "slots": self.slots,
            "seed": self.seed,
            "strategy": self.strategy,
            "sensing": self.sensing,
            "pr_blocking": self.pr_blocking,
            "delivery": self.delivery,
            "topology": self.topology if self.topology == "full_mesh" else [list(r) for r in self.topology],
            "workers": self.workers,
            "sweep": None if self.sweep is None else list(self.sweep),
            "out": self.out,
            "channels": self.channels.to_dict(),
        }
        return d

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)


_TOP_KEYS = {f for f in ExperimentSpec.__dataclass_fields__}
_RULE_KEYS = {"count", "occupancy", "burst_len", "base_reception", "seed"}


def _int(value, name, lo=None, hi=None):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        if isinstance(value, str) and value.strip().lstrip("-").isdigit():
            value = int(value)
        else:
            raise ConfigError(f"{name}: expected an integer, got {value!r}")
    value = int(value)
    if lo is not None and value < lo:
        raise ConfigError(f"{name}: must be >= {lo}, got {value}")
    if hi is not None and value > hi:
        raise ConfigError(f"{name}: must be <= {hi}, got {value}")
    return value


def _float(value, name):
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected a number, got {value!r}") from None
    if not math.isfinite(x):
        raise ConfigError(f"{name}: must be finite, got {value!r}")
    return x


def _bool(value, name):
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("true", "false", "yes", "no", "1", "0"):
        return value.lower() in ("true", "yes", "1")
    raise ConfigError(f"{name}: expected true or false, got {value!r}")


def _range(value, name, lo_bound, hi_bound, hi_open):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{name}: expected [lo, hi], got {value!r}")
    lo, hi = _float(value[0], name), _float(value[1], name)
    upper_ok = hi < hi_bound if hi_open else hi <= hi_bound
    if lo > hi or lo < lo_bound or not upper_ok:
        bracket = ")" if hi_open else "]"
        raise ConfigError(f"{name}: range [{lo}, {hi}] must be ordered and lie within [{lo_bound}, {hi_bound}{bracket}")
    return lo, hi


def _channel_rule(raw, seed_default) -> ChannelRule:
    if isinstance(raw, bool):
        raise ConfigError(f"channels: expected a count, mapping or list, got {raw!r}")
    if isinstance(raw, (int, str)):
        raw = {"count": raw}
    if isinstance(raw, list):
        if not raw:
            raise ConfigError("channels: explicit list is empty")
        chans = []
        for i, entry in enumerate(raw):
            name = f"channels[{i}]"
            if not isinstance(entry, dict) or "occupancy" not in entry:
                raise ConfigError(f"{name}: expected a mapping with an occupancy")
            extra = set(entry) - {"occupancy", "burst_len", "base_reception"}
            if extra:
                raise ConfigError(f"{name}: unknown keys {sorted(extra)}")
            p = _float(entry["occupancy"], f"{name}.occupancy")
            if not 0.0 <= p < 1.0:
                raise ConfigError(f"{name}.occupancy: must be in [0, 1), got {p}")
            try:
                chans.append(
                    ChannelParams(
                        p,
                        _float(entry.get("burst_len", 10.0), f"{name}.burst_len"),
                        _float(entry.get("base_reception", 1.0), f"{name}.base_reception"),
                    )
                )
            except ValueError as e:
                raise ConfigError(f"{name}: {e}") from None
        return ChannelRule(count=len(chans), explicit=tuple(chans))
    if not isinstance(raw, dict):
        raise ConfigError(f"channels: expected a count, mapping or list, got {raw!r}")
    extra = set(raw) - _RULE_KEYS
    if extra:
        raise ConfigError(f"channels: unknown keys {sorted(extra)}")
    count = _int(raw.get("count", 8), "channels.count", lo=1)
    occ = _range(raw.get("occupancy", [0.1, 0.9]), "channels.occupancy", 0.0, 1.0, hi_open=True)
    burst = _float(raw.get("burst_len", 10.0), "channels.burst_len")
    bound = min_burst_len(occ[1])
    if burst < bound:
        raise ConfigError(f"channels.burst_len: {burst} is below {bound:g}, the minimum for occupancy {occ[1]}")
    q = raw.get("base_reception", 1.0)
    if isinstance(q, (list, tuple)):
        q = _range(q, "channels.base_reception", 0.0, 1.0, hi_open=False)
    else:
        q = _float(q, "channels.base_reception")
        if not 0.0 <= q <= 1.0:
            raise ConfigError(f"channels.base_reception: must be in [0, 1], got {q}")
    seed = raw.get("seed")
    seed = seed_default if seed is None else _int(seed, "channels.seed", lo=0, hi=(1 << 64) - 1)
    return ChannelRule(count=count, occupancy=occ, burst_len=burst, base_reception=q, seed=seed)


def _sensing(value):
    s = str(value).strip().lower()
    if s == "perfect":
        return s
    if s.startswith("window:"):
        w = _int(s.split(":", 1)[1], "sensing window", lo=1)
        return f"window:{w}"
    raise ConfigError(f"sensing: expected 'perfect' or 'window:W', got {value!r}")


def spec_from_dict(raw: dict[str, Any]) -> ExperimentSpec:
    """Validate a raw mapping and resolve every default."""
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config: expected a mapping at top level, got {type(raw).__name__}")
    extra = set(raw) - _TOP_KEYS
    if extra:
        raise ConfigError(f"config: unknown keys {sorted(extra)}")
    seed = _int(raw.get("seed", 0), "seed", lo=0, hi=(1 << 64) - 1)
    nodes = _int(raw.get("nodes", 10), "nodes", lo=2)
    strategy = str(raw.get("strategy", "both")).lower()
    if strategy not in STRATEGY_CHOICES:
        raise ConfigError(f"strategy: expected one of {STRATEGY_CHOICES}, got {strategy!r}")
    delivery = str(raw.get("delivery", "others")).lower()
    if delivery not in ("others", "all"):
        raise ConfigError(f"delivery: expected 'others' or 'all', got {delivery!r}")
    topology = raw.get("topology", "full_mesh")
    if topology != "full_mesh":
        if not isinstance(topology, (list, tuple)) or len(topology) != nodes or any(
            not isinstance(r, (list, tuple)) or len(r) != nodes for r in topology
        ):
            raise ConfigError(f"topology: expected 'full_mesh' or a {nodes}x{nodes} 0/1 matrix")
        topology = tuple(tuple(int(bool(x)) for x in r) for r in topology)
    sweep = raw.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, (list, tuple)) or not sweep:
            raise ConfigError(f"sweep: expected a non-empty list of channel counts, got {sweep!r}")
        sweep = tuple(_int(n, "sweep", lo=1) for n in sweep)
    out = raw.get("out")
    return ExperimentSpec(
        nodes=nodes,
        trials=_int(raw.get("trials", 500), "trials", lo=1),
        slots=_int(raw.get("slots", 200), "slots", lo=1),
        seed=seed,
        strategy=strategy,
        sensing=_sensing(raw.get("sensing", "perfect")),
        pr_blocking=_bool(raw.get("pr_blocking", True), "pr_blocking"),
        delivery=delivery,
        topology=topology,
        workers=_int(raw.get("workers", 1), "workers", lo=1),
        sweep=sweep,
        out=None if out is None else str(out),
        channels=_channel_rule(raw.get("channels", {}), seed),
    )


def parse_config(path: Optional[Union[str, Path]] = None, overrides: Optional[dict[str, Any]] = None) -> ExperimentSpec:
    """Load ``path`` (YAML), apply flag ``overrides`` on top, validate.

    Override keys are the top-level config keys; ``channels`` given as an
    integer replaces only the sampled count.
    """
    raw: dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
        try:
            raw = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"malformed config {path}: {e}") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"config: expected a mapping at top level in {path}")
    raw = dict(raw)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "channels":
            current = raw.get("channels", {})
            if isinstance(current, list):
                raise ConfigError("channels: --channels cannot override an explicit channel list")
            if isinstance(current, dict):
                raw["channels"] = {**current, "count": value}
            else:
                raw["channels"] = value
        else:
            raw[key] = value
    return spec_from_dict(raw)


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else format(float(x), ".10g")


def _rows(spec: ExperimentSpec, counts: list[int]):
    for n_channels in counts:
        for strategy in spec.strategies:
            summary = run_experiment(spec.sim_config(strategy, n_channels), workers=spec.workers)
            for node in range(1, spec.nodes + 1):
                d, r = summary.node(node)
                yield [strategy.value, str(n_channels), str(node)] + [
                    _fmt(v) for v in (d.mean, d.low, d.high, r.mean, r.low, r.high)
                ]


def channel_counts(spec: ExperimentSpec, sweep: bool) -> list[int]:
    if not sweep:
        return [spec.channels.n_channels]
    if spec.sweep is None:
        raise ConfigError("sweep: the sweep command needs a list of channel counts")
    return list(spec.sweep)


def results_csv(spec: ExperimentSpec, sweep: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(_rows(spec, channel_counts(spec, sweep)))
    return buf.getvalue()


def sidecar_path(out: Union[str, Path]) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".spec.yaml")


def run_command(spec: ExperimentSpec, sweep: bool = False) -> str:
    """Run every requested strategy (and channel count) and emit the CSV.

    When ``spec.out`` is set the CSV goes there and the resolved spec is
    written next to it as ``<out>.spec.yaml``. Returns the CSV text.
    """
    text = results_csv(spec, sweep)
    if spec.out is not None:
        out = Path(spec.out)
        try:
            out.write_text(text)
            sidecar_path(out).write_text(spec.to_yaml())
        except OSError as e:
            raise OSError(f"cannot write {out}: {e.strerror}") from None
    return text


@dataclass
class OracleRow:
    strategy: str
    n_channels: int
    metric: str
    analytic: float
    simulated: float
    sem: float

    @property
    def z(self) -> float:
        diff = self.simulated - self.analytic
        if self.sem == 0:
            return 0.0 if abs(diff) < 1e-12 else math.copysign(math.inf, diff)
        return diff / self.sem


def oracle_rows(spec: ExperimentSpec, sweep: bool = False) -> list[OracleRow]:
    if spec.window is not None:
        raise ConfigError("sensing: the oracle needs perfect sensing")
    if spec.delivery != "others":
        raise ConfigError("delivery: the oracle needs delivery: others")
    if spec.topology != "full_mesh":
        raise ConfigError("topology: the oracle needs a full mesh")
    rows = []
    for n_channels in channel_counts(spec, sweep):
        for strategy in spec.strategies:
            cfg = spec.sim_config(strategy, n_channels)
            s = run_experiment(cfg, workers=spec.workers)
            rows.append(
                OracleRow(strategy.value, n_channels, "delivery", oracle_expected_delivery(cfg),
                          s.network_delivery.mean, s.network_delivery.sem)
            )
            rows.append(
                OracleRow(strategy.value, n_channels, "receivers", oracle_expected_receivers(cfg),
                          s.network_receivers.mean, s.network_receivers.sem)
            )
    return rows


def oracle_command(spec: ExperimentSpec, sweep: bool = False) -> str:
    """Analytic vs simulated network averages with z-scores, as a text table."""
    lines = [f"{'strategy':<9} {'N':>3} {'metric':<9} {'analytic':>10} {'simulated':>10} {'sem':>10} {'z':>7}"]
    for r in oracle_rows(spec, sweep):
        lines.append(
            f"{r.strategy:<9} {r.n_channels:>3} {r.metric:<9} {r.analytic:>10.6f} "
            f"{r.simulated:>10.6f} {r.sem:>10.6f} {r.z:>7.2f}"
        )
    return "\n".join(lines) + "\n"
