"""Per-node PR occupancy estimation from busy/idle observations."""
from __future__ import annotations

from collections import deque
from enum import Enum
from typing import Sequence

import numpy as np

from .channel import ChannelParams

EMPTY_PRIOR = 0.5


class SensingMode(str, Enum):
    PERFECT = "perfect"
    WINDOWED = "windowed"


class OccupancyEstimator:
    """Sliding-window busy fraction per channel, or ground truth in perfect mode.

    Channels are addressed by 1-based id. In windowed mode each channel keeps
    at most ``window`` observations; the estimate is the busy fraction of that
    history, or 0.5 while it is empty.
    """

    def __init__(self, n_channels: int, mode: SensingMode | str = SensingMode.PERFECT, window: int = 50):
        if n_channels < 1:
            raise ValueError("n_channels must be >= 1")
        if window < 1:
            raise ValueError("window must be >= 1")
        self.n_channels = n_channels
        self.mode = SensingMode(mode)
        self.window = window
        self._history = [deque(maxlen=window) for _ in range(n_channels)]
        self._busy = [0] * n_channels

    def _index(self, channel: int) -> int:
        if not 1 <= channel <= self.n_channels:
            raise ValueError(f"unknown channel id {channel} (have 1..{self.n_channels})")
        return channel - 1

    def observe(self, channel: int, busy: bool) -> None:
        i = self._index(channel)
        if self.mode is SensingMode.PERFECT:
            return
        hist = self._history[i]
        if len(hist) == hist.maxlen:
            self._busy[i] -= hist[0]
        hist.append(bool(busy))
        self._busy[i] += bool(busy)

    def observe_all(self, busy: Sequence[bool]) -> None:
        if len(busy) != self.n_channels:
            raise ValueError(f"expected {self.n_channels} observations, got {len(busy)}")
        for channel, flag in enumerate(busy, start=1):
            self.observe(channel, flag)

    def history(self, channel: int) -> list[bool]:
        return list(self._history[self._index(channel)])

    def occupancy_estimate(self, channel: int, truth: ChannelParams) -> float:
        i = self._index(channel)
        if self.mode is SensingMode.PERFECT:
            return truth.occupancy
        n = len(self._history[i])
        if n == 0:
            return EMPTY_PRIOR
        return self._busy[i] / n

    def estimates(self, truths: Sequence[ChannelParams]) -> np.ndarray:
        """Estimates for channels 1..N as an array (index c-1 holds channel c)."""
        if len(truths) != self.n_channels:
            raise ValueError(f"expected {self.n_channels} channel params, got {len(truths)}")
        return np.array([self.occupancy_estimate(c, t) for c, t in enumerate(truths, start=1)])
