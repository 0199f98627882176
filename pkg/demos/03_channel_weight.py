"""
Weighting and ranking channels
==============================

A channel's weight is exp(-p) * (1 - p) for PR occupancy p. It falls
monotonically, so the best-weighted channel is always the least occupied.
"""

import numpy as np

from cogchan.strategy import channel_weight, rank_channels, select_adaptive, select_random

for p in np.linspace(0, 1, 6):
    print(f"p={p:.1f}  weight={channel_weight(p):.4f}")

# %%
estimates = {1: 0.2, 2: 0.5, 3: 0.1}
print("ranking:", rank_channels(estimates))
print("adaptive pick:", select_adaptive(estimates))

# %%
# The random baseline ignores the estimates
rng = np.random.default_rng(3)
print("random picks:", [select_random(3, rng) for _ in range(10)])
