"""Acceptance gate: one test per exit criterion, at the stated tolerances.

The heavy artifacts (the full reproduction bundle at n = 10^6 trials) are
computed once per session and shared across criteria. Every test prints a
single [PASS]/[FAIL] line with the measured numbers.

Reference values carry the tolerances they were published with: table
means +-0.5 dB, worst-case CVs +-15%, subset energy ratios +-10%.
"""

import math
import time

import numpy as np
import pytest
from scipy.stats import kstest

from factorymimo import (
    ChannelModelParams,
    distance_3d,
    expected_gain_centralized,
    expected_gain_distributed,
    expected_shadowing_linear,
    gain_moments,
    linear_path_loss,
    make_centralized,
    make_grid,
    monte_carlo_gains,
    sample_realization,
    typical_position,
    worst_case_position,
)
from factorymimo.channel import ComponentSampler
from factorymimo.experiment import DEPLOYMENT_PRESETS, reproduce_all

ACCEPT_SEED = 1
TRIALS = 10**6

TABLE_I = {
    "centralized": -63.6114,
    "pd_grid": -63.7807,
    "td_grid": -60.3654,
    "pd_stripes": -71.5584,
    "td_stripes": -71.5475,
}
TABLE_II = {
    "centralized": -77.5595,
    "pd_grid": -69.8238,
    "td_grid": -67.2229,
    "pd_stripes": -74.4385,
    "td_stripes": -74.4755,
}
CV_TABLE_II = {
    "centralized": 3.9544,
    "pd_grid": 3.2999,
    "td_grid": 3.0460,
    "pd_stripes": 1.1032,
    "td_stripes": 0.8081,
}
RATIOS_TYPICAL = (0.21297, 0.57405, 0.73147, 0.86281, 1.0)
RATIOS_WORST = (0.38976, 0.65029, 0.77207, 0.86981, 1.0)
CARDINALITIES = (1, 4, 8, 16, 64)


@pytest.fixture(scope="session")
def bundle(tmp_path_factory):
    out = tmp_path_factory.mktemp("acceptance_bundle")
    t0 = time.perf_counter()
    b = reproduce_all(out, trials=TRIALS, seed=ACCEPT_SEED, workers=2)
    elapsed = time.perf_counter() - t0
    return b, elapsed


def check(name, failures, detail=""):
    status = "PASS" if not failures else "FAIL"
    print(f"\n[{status}] {name}" + (f"  {detail}" if detail else ""))
    assert not failures, f"{name}: " + " | ".join(failures)


def test_criterion_1_closed_form_reduction(hall, params):
    """A single AP holding all antennas reduces the distributed expression
    to the centralized one within 1e-12 relative error."""
    mtd = typical_position(hall)
    layout = make_centralized(hall, 64)
    d = distance_3d(layout.aps[0][0], mtd)
    distributed = expected_gain_distributed(params, layout, mtd).total_linear
    centralized = expected_gain_centralized(params, 64, d)
    rel = abs(distributed - centralized) / centralized
    failures = [] if rel < 1e-12 else [f"relative error {rel:.2e} >= 1e-12"]
    check("criterion 1: closed-form reduction Q=1,S=M", failures, f"rel err {rel:.2e}")


def test_criterion_2_lognormal_moment():
    """The closed-form mean of the linear shadowing factor agrees with a
    1e7-draw Monte Carlo average within 0.5%."""
    rng = np.random.default_rng(ACCEPT_SEED)
    z = 10.0 ** (7.56 * rng.standard_normal(10**7) / 10.0)
    mc = float(np.mean(z))
    cf = expected_shadowing_linear(7.56)
    rel = abs(mc - cf) / cf
    failures = [] if rel <= 0.005 else [f"MC {mc:.6f} vs closed form {cf:.6f}: {rel:.3%} > 0.5%"]
    check("criterion 2: lognormal moment vs 1e7-draw MC", failures, f"rel err {rel:.4%}")


def _table_failures(bundle_reports, position, reference):
    failures, shown = [], []
    for key, label, _, _, _ in DEPLOYMENT_PRESETS:
        mean_db = bundle_reports[key, position].mc.mean_db
        ref = reference[key]
        shown.append(f"{key} {mean_db:+.4f} (ref {ref:+.4f})")
        if abs(mean_db - ref) > 0.5:
            failures.append(f"{label}: {mean_db:.4f} dB vs {ref:.4f} dB exceeds 0.5 dB")
    return failures, "; ".join(shown)


def test_criterion_3_table_I_means(bundle):
    """All five deployments at the typical position match the reference
    means within +-0.5 dB at n = 1e6, in a few minutes of runtime."""
    b, elapsed = bundle
    failures, shown = _table_failures(b.reports, "typical", TABLE_I)
    if elapsed > 900:
        failures.append(f"bundle took {elapsed:.0f}s (> 900s)")
    check("criterion 3: table I means (typical)", failures, f"{shown}; bundle {elapsed:.0f}s")


def test_criterion_4_table_II_means(bundle):
    """All five deployments at the worst-case position match the reference
    means within +-0.5 dB."""
    b, _ = bundle
    failures, shown = _table_failures(b.reports, "worst", TABLE_II)
    check("criterion 4: table II means (worst case)", failures, shown)


def test_criterion_5_cv_ordering_and_tolerances(bundle, hall, params):
    """Worst-case CVs: reference ordering, +-15% of the reference values,
    and within 3 Monte Carlo standard errors of the analytic oracle.

    The oracle clause holds. The ordering and window clauses are asserted
    exactly as stated although the measured CVs at n = 1e6 concentrate on
    the analytic values, which for the corner-dominated grid deployments
    lie far above the reference values (reference CVs of this heavy-tailed
    gain reflect a much smaller sample size and are biased low; the true
    CV ordering also differs from the reference ordering).
    """
    b, _ = bundle
    order = ["centralized", "pd_grid", "td_grid", "pd_stripes", "td_stripes"]
    measured, failures, detail = {}, [], []
    for key in order:
        report = b.reports[key, "worst"]
        cv = report.mc.cv
        measured[key] = cv
        analytic = report.moments.cv
        se = report.moments.cv_standard_error(TRIALS)
        ref = CV_TABLE_II[key]
        detail.append(f"{key}: mc {cv:.3f} ref {ref:.3f} oracle {analytic:.3f} (se {se:.3f})")
        if abs(cv - ref) / ref > 0.15:
            failures.append(f"{key}: cv {cv:.4f} not within 15% of reference {ref:.4f}")
        if abs(cv - analytic) > 3 * se:
            failures.append(
                f"{key}: cv {cv:.4f} not within 3 SE ({se:.4f}) of analytic {analytic:.4f}"
            )
    for a, c in zip(order, order[1:]):
        if not measured[a] > measured[c]:
            failures.append(f"ordering violated: cv[{a}]={measured[a]:.4f} <= cv[{c}]={measured[c]:.4f}")
    check("criterion 5: worst-case CV ordering and tolerances", failures, "; ".join(detail))


def test_criterion_6_centralized_cv_position_invariance(bundle, hall, params):
    """The analytic centralized CV is position-free to machine precision and
    the measured CVs at both positions agree within Monte Carlo error."""
    b, _ = bundle
    layout = make_centralized(hall, 64)
    cv_typ = gain_moments(params, layout, typical_position(hall)).cv
    cv_wc = gain_moments(
        params, layout, worst_case_position(layout.kind, hall)
    ).cv
    failures = []
    rel = abs(cv_typ - cv_wc) / cv_typ
    if rel > 1e-12:
        failures.append(f"analytic cv differs across positions: rel {rel:.2e}")
    mc_t = b.reports["centralized", "typical"].mc.cv
    mc_w = b.reports["centralized", "worst"].mc.cv
    se_t = b.reports["centralized", "typical"].moments.cv_standard_error(TRIALS)
    se_w = b.reports["centralized", "worst"].moments.cv_standard_error(TRIALS)
    gap, tol = abs(mc_t - mc_w), 3 * math.hypot(se_t, se_w)
    if gap > tol:
        failures.append(f"MC cv gap {gap:.4f} exceeds {tol:.4f}")
    check(
        "criterion 6: centralized CV position-invariance",
        failures,
        f"analytic rel gap {rel:.1e}; MC {mc_t:.4f} vs {mc_w:.4f}",
    )


def test_criterion_7_subset_ratios(bundle):
    """Best-AP energy-capture ratios match the reference sweep within 10%
    relative, are exactly 1 for the full set, and are monotone per trial."""
    b, _ = bundle
    failures, detail = [], []
    for position, reference in (("typical", RATIOS_TYPICAL), ("worst", RATIOS_WORST)):
        results = b.sweeps[position]
        assert [r.cardinality for r in results] == list(CARDINALITIES)
        for r, ref in zip(results, reference):
            if ref == 1.0:
                if r.ratio != 1.0:
                    failures.append(f"{position} k={r.cardinality}: ratio {r.ratio!r} != 1.0")
            elif abs(r.ratio - ref) / ref > 0.10:
                failures.append(
                    f"{position} k={r.cardinality}: ratio {r.ratio:.5f} vs {ref:.5f} off by "
                    f"{abs(r.ratio - ref) / ref:.1%}"
                )
        for a, c in zip(results, results[1:]):
            if not np.all(a.stats.samples <= c.stats.samples):
                failures.append(f"{position}: per-trial gain not monotone {a.cardinality}->{c.cardinality}")
        detail.append(position + " " + "/".join(f"{r.ratio:.4f}" for r in results))
    check("criterion 7: subset energy-capture ratios", failures, "; ".join(detail))


class TestCriterion8PropertySuite:
    def test_ccdf_monotonicity(self, bundle):
        b, _ = bundle
        failures = []
        for (key, position), report in b.reports.items():
            if np.any(np.diff(report.ccdf.probabilities) > 0):
                failures.append(f"{key}@{position}: CCDF not non-increasing")
            p = report.ccdf.probabilities
            if not (p[0] <= 1.0 and p[-1] >= 0.0):
                failures.append(f"{key}@{position}: CCDF out of [0, 1]")
        check("criterion 8a: CCDF monotonicity", failures)

    def test_ap_permutation_invariance(self, hall, params):
        layout = make_grid(hall, 16, 4)
        r = sample_realization(layout, typical_position(hall), params, np.random.default_rng(ACCEPT_SEED))
        energy = r.fading_energy()
        worst_rel = 0.0
        failures = []
        for rep in range(20):
            perm = np.random.default_rng(rep).permutation(16)
            permuted = float(np.dot(r.beta[perm], energy[perm]))
            worst_rel = max(worst_rel, abs(permuted - r.gain) / r.gain)
        if worst_rel > 1e-12:
            failures.append(f"gain changed under AP relabeling: rel {worst_rel:.2e}")
        check("criterion 8b: AP-permutation invariance of gain", failures, f"max rel {worst_rel:.1e}")

    def test_fading_energy_mean_is_antenna_count(self, hall, params):
        # one AP of the PD grid, 1e6 draws: ||h_q||^2 ~ Gamma(4, 1)
        layout = make_grid(hall, 16, 4)
        sampler = ComponentSampler(layout, typical_position(hall), params, seed=ACCEPT_SEED)
        total, n = 0.0, 0
        for start in range(0, TRIALS, 1 << 17):
            count = min(1 << 17, TRIALS - start)
            _, energy = sampler.batch(start, count)
            total += float(np.sum(energy[:, 0]))
            n += count
        mean = total / n
        se = math.sqrt(4.0 / n)
        failures = [] if abs(mean - 4.0) < 3 * se else [
            f"mean ||h_q||^2 = {mean:.5f} not within 3 SE ({se:.5f}) of S=4"
        ]
        check("criterion 8c: E||h_q||^2 = S", failures, f"mean {mean:.5f}, 3se {3*se:.5f}")

    def test_exponential_gain_ks(self, hall):
        # sigma_S = 0, S = 1, Q = 1: gain/beta is Exp(1); KS at alpha = 0.01
        p = ChannelModelParams(3.5, 3.19, 0.0)
        layout = make_centralized(hall, 1)
        mtd = typical_position(hall)
        mc = monte_carlo_gains(layout, mtd, p, 10**5, seed=ACCEPT_SEED)
        beta = 1 / linear_path_loss(p, distance_3d(layout.aps[0][0], mtd))
        pvalue = kstest(mc.samples / beta, "expon").pvalue
        failures = [] if pvalue > 0.01 else [f"KS p-value {pvalue:.4f} <= 0.01"]
        check("criterion 8d: unit-CV exponential gain (KS)", failures, f"p={pvalue:.3f}")

    def test_thread_count_reproducibility(self, hall, params):
        layout = make_grid(hall, 64, 1)
        mtd = worst_case_position(layout.kind, hall)
        runs = [
            monte_carlo_gains(layout, mtd, params, 50_000, seed=ACCEPT_SEED, workers=w, batch_size=bs)
            for w, bs in ((1, 1 << 15), (2, 1 << 12), (4, 977))
        ]
        failures = []
        for other in runs[1:]:
            if not np.array_equal(runs[0].samples, other.samples):
                failures.append("samples differ across worker/batch configurations")
        check("criterion 8e: reproducibility across thread counts", failures)


def test_supplement_cv_matches_analytic_oracle(bundle):
    """Model-level variance validation: every measured worst-case CV agrees
    with the analytic oracle within 3 Monte Carlo standard errors."""
    b, _ = bundle
    failures, detail = [], []
    for key, label, _, _, _ in DEPLOYMENT_PRESETS:
        report = b.reports[key, "worst"]
        cv, analytic = report.mc.cv, report.moments.cv
        se = report.moments.cv_standard_error(TRIALS)
        detail.append(f"{key} {cv:.3f}~{analytic:.3f}")
        if abs(cv - analytic) > 3 * se:
            failures.append(f"{label}: cv {cv:.4f} vs analytic {analytic:.4f} (3se {3*se:.4f})")
    check("supplement: worst-case CVs vs analytic oracle", failures, "; ".join(detail))
