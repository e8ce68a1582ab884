# %% [markdown]
# # Depth map and point cloud
#
# Median-filter the filtered disparity, convert to depth with `Z = f*T/d`,
# project to world coordinates and export a colored PLY.

# %%
import matplotlib.pyplot as plt
import numpy as np

from _common import OUT, load_pair
from regionstereo import (CameraRig, MatchWindow, depth_from_disparity, export_ply,
                          filter_unreliable, global_match, map_energy, median_filter,
                          project_xyz)

left, right, _ = load_pair()
win = MatchWindow(1, 1)
disp, _ = global_match(left, right, win, d_max=40, iterations=10)
d_f, _, _ = filter_unreliable(disp, map_energy(left, right, disp, win), alpha=1.0)
smooth = median_filter(d_f, 5)

# %%
rig = CameraRig(f=30, t=20)
z = depth_from_disparity(smooth, rig)
fig, ax = plt.subplots(figsize=(6, 4))
ax.imshow(z, cmap="plasma_r")
ax.set_title("depth (median 5x5 before conversion)")
fig.savefig(OUT / "04_depth.png", dpi=100)

# %%
cloud = project_xyz(z, rig, right)
export_ply(cloud, OUT / "04_cloud.ply")
print(len(cloud), "points written to", OUT / "04_cloud.ply")
