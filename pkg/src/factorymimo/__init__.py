"""Received-signal-strength statistics for massive MIMO deployments in
indoor factory halls: deployment geometry, a measurement-based channel
model, closed-form gain moments, Monte Carlo estimation and scenario
orchestration with CSV reports."""

from .channel import (
    DENSE_FACTORY_NLOS,
    ChannelModelParams,
    ChannelRealization,
    linear_path_loss,
    path_loss_db,
    sample_large_scale,
    sample_realization,
    sample_shadowing_db,
)
from .closedform import (
    GainExpression,
    GainMoments,
    expected_beta,
    expected_gain_centralized,
    expected_gain_distributed,
    expected_shadowing_linear,
    gain_moments,
    second_moment_gain,
    shadowing_moment_linear,
)
from .geometry import (
    DeploymentKind,
    DeploymentLayout,
    HallGeometry,
    Point3,
    ap_distances,
    distance_3d,
    make_centralized,
    make_grid,
    make_radio_stripe,
    typical_position,
    worst_case_position,
)
from .stats import (
    CcdfTable,
    GainSampleSet,
    SubsetResult,
    empirical_ccdf,
    monte_carlo_gains,
    select_subset,
    subset_sweep,
)

__version__ = "0.1.0"
