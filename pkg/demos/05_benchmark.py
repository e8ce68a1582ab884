# %% [markdown]
# # Reliability and speed comparison
#
# Run the five reference configurations (three global windows, two
# line-growing thresholds) at d_max = 40 and alpha = 1.

# %%
import matplotlib.pyplot as plt
import numpy as np

from _common import OUT, load_pair
from regionstereo.evaluation import format_table, records_to_csv, run_benchmark

left, right, truth = load_pair()
records = run_benchmark(left, right, alpha=1.0, truth=np.where(np.isfinite(truth), truth, np.nan))
print(format_table(records))
(OUT / "05_benchmark.csv").write_text(records_to_csv(records))

# %%
labels = [r.label for r in records]
fig, ax = plt.subplots(1, 2, figsize=(12, 3.5))
ax[0].bar(labels, [r.r_d_filtered for r in records])
ax[0].set_title("filtered R_d")
ax[1].bar(labels, [r.seconds for r in records])
ax[1].set_title("matching time [s]")
for a in ax:
    a.tick_params(axis="x", rotation=30)
fig.tight_layout()
fig.savefig(OUT / "05_benchmark.png", dpi=100)
