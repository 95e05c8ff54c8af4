# Closed-form expected channel gains: how spreading a fixed antenna budget
# M = 64 over the hall trades the co-located array factor against
# macro-diversity (shorter distances to the nearest APs).
#
# Run:  python3 demos/02_macro_diversity_closed_form.py

import math

from factorymimo import (
    DENSE_FACTORY_NLOS,
    HallGeometry,
    expected_gain_distributed,
    expected_shadowing_linear,
    gain_moments,
    make_centralized,
    make_grid,
    make_radio_stripe,
    typical_position,
    worst_case_position,
)

hall = HallGeometry(100, 100, 6, 1.5)
params = DENSE_FACTORY_NLOS

ez = expected_shadowing_linear(params.sigma_s_db)
print(f"channel model: f_c={params.f_c_ghz} GHz, eta={params.eta}, sigma_S={params.sigma_s_db} dB")
print(f"mean linear shadowing factor E(Z) = {ez:.4f} (+{10 * math.log10(ez):.3f} dB)\n")

deployments = [
    ("Centralized mMIMO", make_centralized(hall, 64)),
    ("PD mMIMO grid    ", make_grid(hall, 16, 4)),
    ("TD mMIMO grid    ", make_grid(hall, 64, 1)),
    ("PD radio stripes ", make_radio_stripe(hall, 16, 4)),
    ("TD radio stripes ", make_radio_stripe(hall, 64, 1)),
]

print(f"{'deployment':<18} {'typical [dB]':>13} {'worst [dB]':>12} {'penalty [dB]':>13} {'analytic CV':>12}")
for name, layout in deployments:
    typ = expected_gain_distributed(params, layout, typical_position(hall))
    wc_pos = worst_case_position(layout.kind, hall)
    wc = expected_gain_distributed(params, layout, wc_pos)
    cv = gain_moments(params, layout, wc_pos).cv
    print(
        f"{name:<18} {typ.total_db:>13.4f} {wc.total_db:>12.4f} "
        f"{typ.total_db - wc.total_db:>13.4f} {cv:>12.4f}"
    )

print(
    "\nThe grids win on average gain (devices are always near some ceiling AP);"
    "\nthe central array loses the most at the corner; the wall stripes give up"
    "\nmean gain but their worst case (hall center) stays mild, and their gain"
    "\nvariability (CV) is by far the lowest because many similar-distance APs"
    "\naverage the shadowing."
)
