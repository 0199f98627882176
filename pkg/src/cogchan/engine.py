"""Slotted trial simulation and experiment orchestration.

Every slot the PR chains advance, each CR node picks a channel with the
configured strategy, and the round-robin transmitter broadcasts once. A node
receives when it listens on the transmitter's channel, is adjacent to it,
the channel is PR-idle (if blocking is on) and a per-receiver Bernoulli
draw with the channel's base reception probability succeeds.

Two code paths produce trials. :class:`World` with :func:`run_slot` steps
one slot at a time through the per-node estimators and selection functions.
:func:`run_trial` consumes the same random streams in bulk and vectorizes
over slots; both yield bit-identical results for the same seed.

Random streams
--------------
A trial's 64-bit seed is ``trial_seed(master_seed, trial_index)``::

    trial_seed(m, i) = splitmix64(splitmix64(m) XOR i)

with the standard SplitMix64 finalizer. That seed feeds
``numpy.random.SeedSequence`` whose three spawned children drive PCG64
generators for, in order, PR activity, random channel choice and reception
draws. This derivation is frozen; changing it changes every published result.
"""
from __future__ import annotations

import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .channel import ChannelParams, _step, transition_arrays
from .sensing import EMPTY_PRIOR, OccupancyEstimator, SensingMode
from .strategy import Strategy, select_adaptive, select_random

log = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, trial_index: int) -> int:
    return splitmix64(splitmix64(master_seed & _MASK64) ^ (trial_index & _MASK64))


def trial_streams(master_seed: int, trial_index: int) -> tuple[np.random.Generator, ...]:
    """(pr, selection, reception) generators for one trial."""
    children = np.random.SeedSequence(trial_seed(master_seed, trial_index)).spawn(3)
    return tuple(np.random.Generator(np.random.PCG64(s)) for s in children)


@dataclass(frozen=True)
class SimConfig:
    """Everything a run depends on.

    ``window=None`` means perfect sensing; an integer W selects sliding-window
    estimation with W warm-up slots before counting starts. ``adjacency=None``
    is a full mesh; otherwise row i lists which nodes hear node i+1.
    ``exclude_own=False`` switches the delivery denominator to every packet
    sent in the network, own packets included.
    """

    n_nodes: int
    channels: tuple[ChannelParams, ...]
    strategy: Strategy = Strategy.ADAPTIVE
    window: Optional[int] = None
    pr_blocking: bool = True
    slots_per_trial: int = 200
    n_trials: int = 500
    master_seed: int = 0
    adjacency: Optional[tuple[tuple[bool, ...], ...]] = None
    exclude_own: bool = True

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.adjacency is not None:
            object.__setattr__(self, "adjacency", tuple(tuple(bool(x) for x in row) for row in self.adjacency))
        self.validate()

    def validate(self):
        if self.n_nodes < 2:
            raise ValueError(f"n_nodes must be >= 2, got {self.n_nodes}")
        if not self.channels:
            raise ValueError("channels must be non-empty")
        for c, ch in enumerate(self.channels, start=1):
            if not isinstance(ch, ChannelParams):
                raise TypeError(f"channel {c} is not a ChannelParams")
            if ch.occupancy >= 1.0:
                raise ValueError(f"channel {c}: occupancy 1 is not allowed (the channel is never idle)")
        if self.window is not None and self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")
        if self.slots_per_trial < 1:
            raise ValueError(f"slots_per_trial must be >= 1, got {self.slots_per_trial}")
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials}")
        if not 0 <= self.master_seed <= _MASK64:
            raise ValueError(f"master_seed must be an unsigned 64-bit integer, got {self.master_seed}")
        if self.adjacency is not None:
            if len(self.adjacency) != self.n_nodes or any(len(r) != self.n_nodes for r in self.adjacency):
                raise ValueError(f"adjacency must be {self.n_nodes}x{self.n_nodes}")

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    @property
    def sensing_mode(self) -> SensingMode:
        return SensingMode.PERFECT if self.window is None else SensingMode.WINDOWED

    @property
    def warmup_slots(self) -> int:
        return 0 if self.window is None else self.window

    def adjacency_matrix(self) -> np.ndarray:
        if self.adjacency is None:
            adj = np.ones((self.n_nodes, self.n_nodes), dtype=bool)
        else:
            adj = np.array(self.adjacency, dtype=bool)
        np.fill_diagonal(adj, False)
        return adj

    def replace(self, **changes) -> "SimConfig":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class SlotOutcome:
    slot: int
    tx_node: int
    tx_channel: int
    receivers: frozenset[int]


@dataclass
class TrialResult:
    """Per-trial counters; node ids are 1-based, arrays are indexed id-1."""

    sent: np.ndarray
    received: np.ndarray
    tx_nodes: np.ndarray
    slot_receivers: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.sent)

    def receiver_counts(self, node: int) -> np.ndarray:
        return self.slot_receivers[self.tx_nodes == node]

    def same_as(self, other: "TrialResult") -> bool:
        return all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("sent", "received", "tx_nodes", "slot_receivers")
        )


@dataclass
class World:
    """Mutable state of one trial for slot-by-slot stepping."""

    config: SimConfig
    busy: np.ndarray
    estimators: list[OccupancyEstimator]
    pr_rng: np.random.Generator
    sel_rng: np.random.Generator
    rx_rng: np.random.Generator
    slot: int = 0
    warmup_remaining: int = 0
    sent: np.ndarray = field(default=None)
    received: np.ndarray = field(default=None)
    tx_nodes: list[int] = field(default_factory=list)
    slot_receivers: list[int] = field(default_factory=list)

    @classmethod
    def start(cls, config: SimConfig, trial_index: int = 0) -> "World":
        pr_rng, sel_rng, rx_rng = trial_streams(config.master_seed, trial_index)
        occ = np.array([c.occupancy for c in config.channels])
        busy = pr_rng.random(config.n_channels) < occ
        mode = config.sensing_mode
        estimators = [
            OccupancyEstimator(config.n_channels, mode, config.window or 1) for _ in range(config.n_nodes)
        ]
        return cls(
            config=config,
            busy=busy,
            estimators=estimators,
            pr_rng=pr_rng,
            sel_rng=sel_rng,
            rx_rng=rx_rng,
            warmup_remaining=config.warmup_slots,
            sent=np.zeros(config.n_nodes, dtype=np.int64),
            received=np.zeros(config.n_nodes, dtype=np.int64),
        )

    def result(self) -> TrialResult:
        return TrialResult(
            sent=self.sent.copy(),
            received=self.received.copy(),
            tx_nodes=np.array(self.tx_nodes, dtype=np.int64),
            slot_receivers=np.array(self.slot_receivers, dtype=np.int64),
        )


def run_slot(world: World) -> Optional[SlotOutcome]:
    """Advance ``world`` by one slot.

    Returns the slot's outcome, or None for a warm-up slot (windowed sensing
    only), during which estimators fill and nothing is transmitted.
    """
    cfg = world.config
    alpha, beta = transition_arrays(cfg.channels)
    world.busy = _step(world.busy, world.pr_rng.random(cfg.n_channels), alpha, beta)

    # selection sees estimates from earlier slots only
    estimates = [est.estimates(cfg.channels) for est in world.estimators]
    for est in world.estimators:
        est.observe_all(world.busy)

    if world.warmup_remaining > 0:
        world.warmup_remaining -= 1
        return None

    n = cfg.n_nodes
    if cfg.strategy is Strategy.ADAPTIVE:
        choice = [select_adaptive(e) for e in estimates]
    else:
        choice = [select_random(cfg.n_channels, world.sel_rng) for _ in range(n)]

    tx = world.slot % n
    tx_channel = choice[tx]
    params = cfg.channels[tx_channel - 1]
    adj = cfg.adjacency_matrix()
    blocked = cfg.pr_blocking and bool(world.busy[tx_channel - 1])
    draws = world.rx_rng.random(n)
    receivers = frozenset(
        j + 1
        for j in range(n)
        if j != tx and choice[j] == tx_channel and adj[tx, j] and not blocked and draws[j] < params.base_reception
    )

    world.sent[tx] += 1
    for j in receivers:
        world.received[j - 1] += 1
    world.tx_nodes.append(tx + 1)
    world.slot_receivers.append(len(receivers))
    outcome = SlotOutcome(slot=world.slot, tx_node=tx + 1, tx_channel=tx_channel, receivers=receivers)
    world.slot += 1
    return outcome


def run_trial_stepwise(config: SimConfig, trial_index: int) -> TrialResult:
    world = World.start(config, trial_index)
    for _ in range(config.warmup_slots + config.slots_per_trial):
        run_slot(world)
    return world.result()


def _windowed_estimates(trajectory: np.ndarray, window: int, warmup: int, n_slots: int) -> np.ndarray:
    # estimate used in absolute slot t covers observations of slots [t-W, t)
    csum = np.vstack([np.zeros((1, trajectory.shape[1]), dtype=np.int64), np.cumsum(trajectory, axis=0)])
    t = np.arange(warmup, warmup + n_slots)
    lo = np.maximum(t - window, 0)
    counts = csum[t] - csum[lo]
    length = (t - lo)[:, None]
    return np.where(length > 0, counts / np.maximum(length, 1), EMPTY_PRIOR)


def run_trial(config: SimConfig, trial_index: int) -> TrialResult:
    """Simulate one trial; same (config, trial_index) gives an identical result."""
    pr_rng, sel_rng, rx_rng = trial_streams(config.master_seed, trial_index)
    n, N, S = config.n_nodes, config.n_channels, config.slots_per_trial
    warm = config.warmup_slots
    alpha, beta = transition_arrays(config.channels)
    occ = np.array([c.occupancy for c in config.channels])
    q = np.array([c.base_reception for c in config.channels])

    busy = pr_rng.random(N) < occ
    u = pr_rng.random((warm + S, N))
    traj = np.empty((warm + S, N), dtype=bool)
    for t in range(warm + S):
        busy = _step(busy, u[t], alpha, beta)
        traj[t] = busy

    slots = np.arange(S)
    tx = slots % n
    if config.strategy is Strategy.ADAPTIVE:
        # every node senses the same exact flags, so all estimates coincide;
        # argmin of the estimate equals argmax of the weight, first index on ties
        if config.window is None:
            pick = np.full(S, int(np.argmin(occ)) + 1)
        else:
            pick = np.argmin(_windowed_estimates(traj, config.window, warm, S), axis=1) + 1
        choice = np.broadcast_to(pick[:, None], (S, n))
    else:
        choice = np.minimum((sel_rng.random((S, n)) * N).astype(np.int64), N - 1) + 1

    tx_channel = choice[slots, tx]
    hears = choice == tx_channel[:, None]
    hears = hears & config.adjacency_matrix()[tx]
    if config.pr_blocking:
        hears &= ~traj[warm + slots, tx_channel - 1][:, None]
    ok = hears & (rx_rng.random((S, n)) < q[tx_channel - 1][:, None])

    return TrialResult(
        sent=np.bincount(tx, minlength=n).astype(np.int64),
        received=ok.sum(axis=0).astype(np.int64),
        tx_nodes=tx + 1,
        slot_receivers=ok.sum(axis=1).astype(np.int64),
    )


def _run_chunk(args):
    config, indices = args
    return [run_trial(config, i) for i in indices]


def run_trials(config: SimConfig, workers: int = 1) -> list[TrialResult]:
    """All trials of ``config`` in trial-index order, optionally across processes."""
    indices = list(range(config.n_trials))
    if workers <= 1 or config.n_trials == 1:
        return [run_trial(config, i) for i in indices]
    chunks = [indices[k::workers] for k in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, [(config, c) for c in chunks]))
    out: list[Optional[TrialResult]] = [None] * config.n_trials
    for chunk, results in zip(chunks, parts):
        for i, r in zip(chunk, results):
            out[i] = r
    return out


def run_experiment(config: SimConfig, workers: int = 1):
    """Run every trial and summarize both metrics per node with 95% CIs."""
    from .metrics import summarize

    if config.n_trials == 1:
        warnings.warn("n_trials=1: confidence intervals are degenerate", RuntimeWarning, stacklevel=2)
    log.debug("running %d trials (%s, N=%d)", config.n_trials, config.strategy.value, config.n_channels)
    return summarize(run_trials(config, workers), config)


def channels_from(occupancies: Sequence[float], burst_len: float = 10.0, base_reception: float = 1.0):
    return tuple(ChannelParams(p, burst_len, base_reception) for p in occupancies)
