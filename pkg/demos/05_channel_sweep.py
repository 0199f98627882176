"""
What happens as channels are added
==================================

Channels are appended one group at a time, keeping the earlier ones
unchanged. Random selection gets worse with every extra channel because
transmitter and listener rarely meet; the adaptive nodes keep meeting on
the quietest channel.

The same sweep from the command line::

    cogchan sweep --sweep 4,8,12,16 --seed 0 --out sweep.csv
"""

from cogchan.experiment import results_csv, spec_from_dict

spec = spec_from_dict({
    "trials": 200,
    "sweep": [4, 8, 12, 16],
    "channels": {"count": 16, "occupancy": [0.1, 0.9], "seed": 5},
})
csv_text = results_csv(spec, sweep=True)

# %%
# Average the per-node rows into one delivery figure per (strategy, N)
import csv
import io
from collections import defaultdict

acc = defaultdict(list)
for row in csv.DictReader(io.StringIO(csv_text)):
    acc[(row["strategy"], int(row["n_channels"]))].append(float(row["delivery_mean"]))
for (strategy, n), vals in sorted(acc.items()):
    print(f"{strategy:>8} N={n:>2}: delivery {sum(vals) / len(vals):.4f}")
