# %% [markdown]
# # Filtering unreliable estimates
#
# The energy of the chosen disparity is high where matching failed, mostly
# around occlusions at object boundaries. Dropping pixels above `alpha` times
# the mean energy raises the reliability score; smaller `alpha` raises it
# further at the cost of coverage.

# %%
import matplotlib.pyplot as plt
import numpy as np

from _common import OUT, load_pair
from regionstereo import MatchWindow, NE, filter_unreliable, global_match, map_energy, reliability
from regionstereo.reliability_filter import verify_monotonicity

left, right, _ = load_pair()
win = MatchWindow(1, 5)
disp, _ = global_match(left, right, win, d_max=40, iterations=10)
e_d = map_energy(left, right, disp, win)
print(reliability(e_d))

# %%
alphas = [2.0, 1.5, 1.0, 0.75, 0.5, 0.25]
scores = verify_monotonicity(disp, e_d, alphas)
coverage = [filter_unreliable(disp, e_d, a)[2].retained_fraction for a in alphas]
for a, r, c in zip(alphas, scores, coverage):
    print(f"alpha={a:<5} R_d={r:.4f} retained={c:.3f}")

# %%
d_f, e_f, report = filter_unreliable(disp, e_d, 1.0)
fig, ax = plt.subplots(1, 3, figsize=(14, 3.5))
ax[0].imshow(np.log1p(np.nan_to_num(e_d)), cmap="magma")
ax[0].set_title("log(1 + E_d)")
ax[1].imshow(np.where(d_f == NE, np.nan, d_f), cmap="viridis", vmin=0, vmax=40)
ax[1].set_title(f"filtered disparity, alpha=1 (R_d={report.r_d:.3f})")
ax[2].plot(alphas, scores, "o-")
ax[2].set_xlabel("alpha")
ax[2].set_ylabel("R_d")
fig.tight_layout()
fig.savefig(OUT / "03_filtering.png", dpi=100)
