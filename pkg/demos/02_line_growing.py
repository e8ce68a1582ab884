# %% [markdown]
# # Line growing
#
# Roots are chosen along each row; their disparity grows rightward while the
# energy stays below the threshold. The point-status map shows roots, grown
# region points and idle points.

# %%
import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap

from _common import OUT, load_pair
from regionstereo import GrowConfig, MatchWindow, NE, PointStatus, line_grow_match, segment_lengths
from regionstereo.linegrow import mean_segment_length

left, right, truth = load_pair()

# %%
runs = {}
for v_lg in (10.0, 60.0):
    runs[v_lg] = line_grow_match(left, right, GrowConfig(MatchWindow(1, 5), 40, v_lg))

for v_lg, (disp, status) in runs.items():
    idle = np.count_nonzero(status == PointStatus.IDLE)
    mean_len = mean_segment_length(segment_lengths(status))
    print(f"V_LG={v_lg:>4}: idle={idle:6d}  mean line length={mean_len:.1f}")

# %%
cmap = ListedColormap(["black", "tab:green", "tab:red", "lightgray"])
fig, ax = plt.subplots(2, 2, figsize=(10, 7))
for row, (v_lg, (disp, status)) in enumerate(runs.items()):
    ax[row, 0].imshow(np.where(disp == NE, np.nan, disp), cmap="viridis", vmin=0, vmax=40)
    ax[row, 0].set_title(f"disparity, V_LG={v_lg:g}")
    ax[row, 1].imshow(status, cmap=cmap, vmin=0, vmax=3, interpolation="nearest")
    ax[row, 1].set_title("status: region / root / idle")
fig.tight_layout()
fig.savefig(OUT / "02_line_growing.png", dpi=100)
