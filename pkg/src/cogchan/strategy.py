"""Occupancy-weighted channel ranking and the random baseline."""
from __future__ import annotations

import math
from enum import Enum
from typing import Mapping, Sequence, Union

import numpy as np

Estimates = Union[Mapping[int, float], Sequence[float], np.ndarray]


class Strategy(str, Enum):
    ADAPTIVE = "adaptive"
    RANDOM = "random"


def channel_weight(p_hat: float) -> float:
    """Channel weight exp(-p) * (1 - p) for PR occupancy estimate p.

    The second factor is the CR occupancy, the complement of the PR one.
    """
    if not 0.0 <= p_hat <= 1.0:
        raise ValueError(f"occupancy estimate must be in [0, 1], got {p_hat}")
    cr_occupancy = 1.0 - p_hat
    return math.exp(-p_hat) * cr_occupancy


def _as_mapping(estimates: Estimates) -> dict[int, float]:
    if isinstance(estimates, Mapping):
        items = dict(estimates)
    else:
        items = {c: float(p) for c, p in enumerate(estimates, start=1)}
    if not items:
        raise ValueError("empty channel set")
    return items


def rank_channels(estimates: Estimates) -> list[int]:
    """Channel ids by decreasing weight, ties broken by ascending id.

    ``estimates`` is either a mapping {channel id: estimate} or a sequence
    whose i-th entry belongs to channel i+1.
    """
    items = _as_mapping(estimates)
    weights = {c: channel_weight(p) for c, p in items.items()}
    return sorted(items, key=lambda c: (-weights[c], c))


def select_adaptive(estimates: Estimates) -> int:
    return rank_channels(estimates)[0]


def select_random(n_channels: int, rng: np.random.Generator) -> int:
    """Uniform draw over 1..n_channels using exactly one double from ``rng``."""
    if n_channels < 1:
        raise ValueError("n_channels must be >= 1")
    return min(int(rng.random() * n_channels), n_channels - 1) + 1
