"""Channels, primary-radio on/off activity and per-channel reception probability.

Each channel carries a two-state (busy/idle) discrete-time chain describing
primary-radio activity. The chain is parameterized by its stationary busy
probability and its mean busy-burst length, so the long-run occupancy is
known in closed form.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

# slack for bounds like 0.8 / (1 - 0.8) evaluating to 4.000000000000001
_REL_TOL = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    """Ground truth for one channel.

    occupancy is the stationary PR busy probability, burst_len the mean
    busy-burst duration in slots, base_reception the probability a message
    sent on a matching, PR-idle channel is received.
    """

    occupancy: float
    burst_len: float = 10.0
    base_reception: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.occupancy <= 1.0:
            raise ValueError(f"occupancy must be in [0, 1], got {self.occupancy}")
        if not 0.0 <= self.base_reception <= 1.0:
            raise ValueError(f"base_reception must be in [0, 1], got {self.base_reception}")
        bound = min_burst_len(self.occupancy) if self.occupancy < 1.0 else 1.0
        if self.burst_len < bound * (1 - _REL_TOL):
            raise ValueError(
                f"burst_len {self.burst_len} below feasibility bound {bound} for occupancy {self.occupancy}"
            )

    @property
    def transitions(self) -> tuple[float, float]:
        return stationary_to_transitions(self.occupancy, self.burst_len)


def min_burst_len(occupancy: float) -> float:
    """Smallest mean burst length that keeps the idle->busy probability <= 1."""
    if occupancy >= 1.0:
        raise ValueError("occupancy must be < 1")
    return max(1.0, occupancy / (1.0 - occupancy))


def iid_burst_len(occupancy: float) -> float:
    """Burst length making the chain memoryless (alpha + beta = 1)."""
    return 1.0 / (1.0 - occupancy)


def stationary_to_transitions(occupancy: float, burst_len: float) -> tuple[float, float]:
    """Return (alpha, beta): idle->busy and busy->idle probabilities.

    beta = 1/burst_len and alpha = occupancy / (burst_len * (1 - occupancy)),
    which makes alpha / (alpha + beta) equal to occupancy.
    """
    if not 0.0 <= occupancy < 1.0:
        raise ValueError(f"occupancy must be in [0, 1), got {occupancy}")
    bound = min_burst_len(occupancy)
    if burst_len < bound * (1 - _REL_TOL):
        raise ValueError(f"burst_len {burst_len} below feasibility bound {bound} for occupancy {occupancy}")
    beta = 1.0 / burst_len
    alpha = min(occupancy / (burst_len * (1.0 - occupancy)), 1.0)
    return alpha, beta


def transition_arrays(channels: Sequence[ChannelParams]) -> tuple[np.ndarray, np.ndarray]:
    pairs = np.array([c.transitions for c in channels], dtype=float).reshape(-1, 2)
    return pairs[:, 0], pairs[:, 1]


def initial_pr_state(channels: Sequence[ChannelParams], rng: np.random.Generator) -> np.ndarray:
    """Stationary start: channel c busy with probability occupancy[c].

    The PR state is a boolean array, index c-1 holding channel c.
    """
    occ = np.array([c.occupancy for c in channels], dtype=float)
    return rng.random(len(occ)) < occ


def advance_pr_state(state: np.ndarray, channels: Sequence[ChannelParams], rng: np.random.Generator) -> np.ndarray:
    """One slot of every channel's on/off chain, resampled independently."""
    state = np.asarray(state, dtype=bool)
    if state.shape != (len(channels),):
        raise ValueError(f"state has shape {state.shape}, expected ({len(channels)},)")
    alpha, beta = transition_arrays(channels)
    u = rng.random(len(channels))
    return _step(state, u, alpha, beta)


def _step(state, u, alpha, beta):
    # busy stays busy when u >= beta; idle turns busy when u < alpha
    return np.where(state, u >= beta, u < alpha)


def effective_reception_prob(params: ChannelParams, pr_blocking: bool) -> float:
    """Marginal per-slot probability that a matched receiver gets the message."""
    if pr_blocking:
        return params.base_reception * (1.0 - params.occupancy)
    return params.base_reception
