"""
Estimating occupancy by listening
=================================

A node keeps the last W busy/idle observations of each channel and uses
their busy fraction as its occupancy estimate. Longer windows are
steadier but slower to follow changes.
"""

import numpy as np

from cogchan.channel import ChannelParams, advance_pr_state, initial_pr_state
from cogchan.sensing import OccupancyEstimator

channels = [ChannelParams(p, 10) for p in (0.2, 0.5, 0.8)]
rng = np.random.default_rng(1)
state = initial_pr_state(channels, rng)

estimators = {w: OccupancyEstimator(len(channels), "windowed", window=w) for w in (10, 50, 500)}
for slot in range(2000):
    state = advance_pr_state(state, channels, rng)
    for est in estimators.values():
        est.observe_all(state)

# %%
for w, est in estimators.items():
    print(f"W={w:>3}: estimates {est.estimates(channels).round(3)}  truth {[c.occupancy for c in channels]}")

# %%
# Before anything is heard the estimate falls back to 0.5
print(OccupancyEstimator(1, "windowed").occupancy_estimate(1, channels[0]))
