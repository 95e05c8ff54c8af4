# Walk through the three AP deployment schemes on the reference 100 m x 100 m
# factory hall: one central 64-antenna array, ceiling grids of multi- or
# single-antenna APs, and a radio stripe running around the walls.
#
# Run:  python3 demos/01_deployment_layouts.py
# Writes deployment_layouts.png next to this script.

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from factorymimo import (
    HallGeometry,
    make_centralized,
    make_grid,
    make_radio_stripe,
    typical_position,
    worst_case_position,
)

hall = HallGeometry(d_x=100, d_y=100, h_ap=6, h_mtd=1.5)

layouts = {
    "Centralized mMIMO (M=64)": make_centralized(hall, 64),
    "PD grid (Q=16, S=4)": make_grid(hall, 16, 4),
    "TD grid (Q=64, S=1)": make_grid(hall, 64, 1),
    "TD radio stripe (Q=64, S=1)": make_radio_stripe(hall, 64, 1),
}

for name, layout in layouts.items():
    print(f"{name}: Q={layout.num_aps}, M={layout.total_antennas}")
    for x, y, z, s in layout.rows()[:3]:
        print(f"   AP at ({x:6.2f}, {y:6.2f}, {z:4.1f}) with {s} antenna(s)")
    if layout.num_aps > 3:
        print(f"   ... plus {layout.num_aps - 3} more")

# every scheme serves the same device; its worst-case position depends on
# where the antennas are: hall corner for center/ceiling schemes, hall
# center for the wall stripe
fig, axes = plt.subplots(1, 4, figsize=(17, 4.2), sharey=True)
for ax, (name, layout) in zip(axes, layouts.items()):
    pos = layout.positions()
    ax.scatter(pos[:, 0], pos[:, 1], s=30, marker="s", label="APs")
    t = typical_position(hall)
    w = worst_case_position(layout.kind, hall)
    ax.scatter([t.x], [t.y], c="tab:green", marker="*", s=160, label="typical MTD")
    ax.scatter([w.x], [w.y], c="tab:red", marker="x", s=90, label="worst-case MTD")
    ax.set_title(name, fontsize=10)
    ax.set_xlim(-5, 105), ax.set_ylim(-5, 105)
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
axes[0].set_ylabel("y [m]")
axes[0].legend(loc="lower left", fontsize=8)
fig.tight_layout()
out = Path(__file__).with_name("deployment_layouts.png")
fig.savefig(out, dpi=130)
print(f"\nsaved {out}")
