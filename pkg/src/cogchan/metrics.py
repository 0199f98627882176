"""Delivery ratio and receiver count, across-trial 95% CIs and analytic oracles."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from .channel import effective_reception_prob
from .strategy import Strategy

if TYPE_CHECKING:
    from .engine import SimConfig, TrialResult

Z95 = 1.96


def delivery_ratio(trial: "TrialResult", node: int, exclude_own: bool = True) -> float:
    """Fraction of the network's packets that ``node`` received.

    With ``exclude_own`` the denominator only counts packets sent by the other
    nodes. Returns NaN when the denominator is zero.
    """
    total = int(trial.sent.sum())
    denom = total - int(trial.sent[node - 1]) if exclude_own else total
    if denom == 0:
        return math.nan
    return trial.received[node - 1] / denom


def avg_receivers(trial: "TrialResult", node: int) -> float:
    """Mean number of receivers over ``node``'s own transmissions (NaN if none)."""
    counts = trial.receiver_counts(node)
    if len(counts) == 0:
        return math.nan
    return float(counts.mean())


@dataclass(frozen=True)
class ConfidenceInterval:
    mean: float
    low: float
    high: float
    n: int
    sem: float
    degenerate: bool = False

    @property
    def half_width(self) -> float:
        return self.high - self.mean

    def as_tuple(self) -> tuple[float, float, float]:
        return self.mean, self.low, self.high


def confidence_interval(samples: Sequence[float], level: float = 0.95) -> ConfidenceInterval:
    """Normal-approximation interval mean +/- 1.96 s/sqrt(n), unclamped.

    ``s`` uses the n-1 denominator. NaN samples are dropped. A single sample
    gives the degenerate interval [mean, mean] with ``degenerate`` set.
    """
    if level != 0.95:
        raise ValueError("only the 95% level is supported")
    x = np.asarray(samples, dtype=float)
    x = x[~np.isnan(x)]
    if x.size == 0:
        raise ValueError("confidence_interval needs at least one sample")
    mean = float(x.mean())
    if x.size == 1:
        return ConfidenceInterval(mean, mean, mean, 1, 0.0, degenerate=True)
    sem = float(x.std(ddof=1)) / math.sqrt(x.size)
    hw = Z95 * sem
    return ConfidenceInterval(mean, mean - hw, mean + hw, int(x.size), sem)


@dataclass
class ExperimentSummary:
    config: "SimConfig"
    delivery: list[ConfidenceInterval]
    receivers: list[ConfidenceInterval]
    network_delivery: ConfidenceInterval
    network_receivers: ConfidenceInterval
    delivery_samples: np.ndarray
    receivers_samples: np.ndarray

    @property
    def n_trials(self) -> int:
        return self.delivery_samples.shape[0]

    @property
    def degenerate(self) -> bool:
        return self.n_trials == 1

    def node(self, node_id: int) -> tuple[ConfidenceInterval, ConfidenceInterval]:
        return self.delivery[node_id - 1], self.receivers[node_id - 1]


def _nanmean_rows(a: np.ndarray) -> np.ndarray:
    finite = ~np.isnan(a)
    counts = finite.sum(axis=1)
    sums = np.where(finite, a, 0.0).sum(axis=1)
    return np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)


def summarize(trials: Sequence["TrialResult"], config: "SimConfig") -> ExperimentSummary:
    n = config.n_nodes
    nodes = range(1, n + 1)
    d = np.array([[delivery_ratio(t, j, config.exclude_own) for j in nodes] for t in trials])
    r = np.array([[avg_receivers(t, j) for j in nodes] for t in trials])
    d_net = _nanmean_rows(d)
    r_net = _nanmean_rows(r)
    return ExperimentSummary(
        config=config,
        delivery=[_ci_or_nan(d[:, j]) for j in range(n)],
        receivers=[_ci_or_nan(r[:, j]) for j in range(n)],
        network_delivery=_ci_or_nan(d_net),
        network_receivers=_ci_or_nan(r_net),
        delivery_samples=d,
        receivers_samples=r,
    )


def _ci_or_nan(samples):
    try:
        return confidence_interval(samples)
    except ValueError:
        nan = math.nan
        return ConfidenceInterval(nan, nan, nan, 0, nan, degenerate=True)


def _check_oracle_config(config: "SimConfig"):
    if config.window is not None:
        raise ValueError("no closed form for windowed sensing")
    if config.adjacency_matrix().sum() != config.n_nodes * (config.n_nodes - 1):
        raise ValueError("oracles assume a full-mesh topology")
    if not config.exclude_own:
        raise ValueError("oracles give per-link probabilities; use exclude_own=True")


def oracle_expected_delivery(config: "SimConfig", strategy: Optional[Strategy] = None) -> float:
    """Closed-form per-link reception probability under perfect sensing.

    Random: transmitter and listener pick independently and uniformly, so
    the probability is sum(r_c) / N**2. Adaptive: everyone sits on the
    least-occupied channel (lowest id on ties) and the probability is its r.
    """
    _check_oracle_config(config)
    strategy = Strategy(strategy or config.strategy)
    r = np.array([effective_reception_prob(c, config.pr_blocking) for c in config.channels])
    N = len(r)
    if strategy is Strategy.RANDOM:
        return float(r.sum() / N**2)
    occ = [c.occupancy for c in config.channels]
    best = min(range(N), key=lambda i: (occ[i], i))
    return float(r[best])


def oracle_expected_receivers(config: "SimConfig", strategy: Optional[Strategy] = None) -> float:
    return (config.n_nodes - 1) * oracle_expected_delivery(config, strategy)
