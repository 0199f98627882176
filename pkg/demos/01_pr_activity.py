"""
Primary-radio activity on a channel
===================================

Each channel alternates between busy and idle slots following a two-state
chain. Two numbers pin it down: the long-run busy fraction and the mean
length of a busy burst.
"""

import numpy as np

from cogchan.channel import ChannelParams, advance_pr_state, initial_pr_state, stationary_to_transitions

# Same occupancy, different burstiness
calm = ChannelParams(occupancy=0.3, burst_len=1 / 0.7)  # memoryless
bursty = ChannelParams(occupancy=0.3, burst_len=25)

for name, ch in [("memoryless", calm), ("bursty", bursty)]:
    alpha, beta = stationary_to_transitions(ch.occupancy, ch.burst_len)
    print(f"{name:>10}: idle->busy {alpha:.3f}, busy->idle {beta:.3f}")

# %%
# Simulate 20000 slots of each and compare the busy fraction
rng = np.random.default_rng(0)
chans = [calm, bursty]
state = initial_pr_state(chans, rng)
traj = []
for _ in range(20_000):
    state = advance_pr_state(state, chans, rng)
    traj.append(state)
traj = np.array(traj)
print("busy fraction:", traj.mean(axis=0).round(3))

# %%
# The first 80 slots, '#' = busy
for name, col in zip(("memoryless", "bursty"), traj[:80].T):
    print(f"{name:>10} " + "".join("#" if b else "." for b in col))
