"""Closed-form moments of the channel gain.

With independent per-AP shadowing, the expected gain splits into a sum of
per-AP contributions S_q * E{beta_q}; the same independence gives exact
higher moments of the gain from lognormal moments of the shadowing factor
and the Gamma(S, 1) moments of each ||h_q||^2. These expressions serve
both as the macro-diversity analysis and as oracles for the Monte Carlo
estimates in :mod:`factorymimo.stats`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelModelParams, linear_path_loss
from .geometry import DeploymentKind, DeploymentLayout, Point3, ap_distances

__all__ = [
    "expected_shadowing_linear",
    "shadowing_moment_linear",
    "expected_beta",
    "expected_gain_centralized",
    "GainExpression",
    "expected_gain_distributed",
    "second_moment_gain",
    "GainMoments",
    "gain_moments",
]

_LN10_OVER_10 = math.log(10.0) / 10.0


def shadowing_moment_linear(sigma_s_db: float, order: int = 1) -> float:
    """k-th raw moment of the linear shadowing factor Z = 10^(X/10).

    Z is lognormal with ln Z = X * ln(10)/10 and X ~ N(0, sigma^2), so
    E{Z^k} = exp((k * sigma * ln(10)/10)^2 / 2).
    """
    if sigma_s_db < 0:
        raise ValueError("shadowing spread cannot be negative")
    return math.exp((order * sigma_s_db * _LN10_OVER_10) ** 2 / 2.0)


def expected_shadowing_linear(sigma_s_db: float) -> float:
    """Mean of the linear shadowing factor; 1 when there is no shadowing."""
    return shadowing_moment_linear(sigma_s_db, 1)


def expected_beta(params: ChannelModelParams, d_3d: float) -> float:
    """Expected large-scale coefficient at distance d:
    E{beta} = E{Z} / PL_linear(d)."""
    return expected_shadowing_linear(params.sigma_s_db) / linear_path_loss(params, d_3d)


def expected_gain_centralized(params: ChannelModelParams, m_antennas: int, d_3d: float) -> float:
    """Expected gain of a co-located M-antenna array: M * E{beta}(d).

    The M antennas share one large-scale coefficient, so the array
    contributes a factor M through E{||h||^2} = M.
    """
    if m_antennas < 1:
        raise ValueError("need at least one antenna")
    return m_antennas * expected_beta(params, d_3d)


@dataclass(frozen=True)
class GainExpression:
    """Expected-gain breakdown: one (distance, antennas, contribution) term
    per AP plus their total, in linear scale and dB."""

    kind: DeploymentKind
    terms: tuple[tuple[float, int, float], ...]
    total_linear: float

    @property
    def total_db(self) -> float:
        return 10.0 * math.log10(self.total_linear)


def expected_gain_distributed(
    params: ChannelModelParams, layout: DeploymentLayout, mtd: Point3
) -> GainExpression:
    """Expected gain of a distributed layout: sum_q S_q * E{beta}(d_q).

    Each AP contributes its antenna count times the expected large-scale
    coefficient at its distance; the sum over APs is the macro-diversity
    counterpart of the centralized array factor M.
    """
    if mtd.z >= layout.aps[0][0].z:
        raise ValueError("device must sit strictly below the AP mounting height")
    dists = ap_distances(layout, mtd)
    counts = layout.antennas_per_ap()
    ez = expected_shadowing_linear(params.sigma_s_db)
    contrib = counts * ez / np.asarray(linear_path_loss(params, dists))
    terms = tuple(
        (float(d), int(s), float(c)) for d, s, c in zip(dists, counts, contrib)
    )
    return GainExpression(kind=layout.kind, terms=terms, total_linear=float(np.sum(contrib)))


def _per_ap_raw_moments(params, layout, mtd, max_order):
    """Raw moments E{(beta_q * ||h_q||^2)^k}, k = 1..max_order, per AP.

    beta_q and ||h_q||^2 are independent; ||h_q||^2 ~ Gamma(S_q, 1) has
    raw moments S(S+1)...(S+k-1), and the lognormal factor contributes
    E{Z^k} / PL^k.
    """
    dists = ap_distances(layout, mtd)
    pl = np.asarray(linear_path_loss(params, dists), dtype=float)
    counts = layout.antennas_per_ap().astype(float)
    moments = []
    for k in range(1, max_order + 1):
        zk = shadowing_moment_linear(params.sigma_s_db, k)
        gamma_k = np.prod([counts + j for j in range(k)], axis=0)
        moments.append(zk * gamma_k / pl**k)
    return moments


def second_moment_gain(params: ChannelModelParams, layout: DeploymentLayout, mtd: Point3) -> float:
    """Exact second raw moment E{gain^2} of the channel gain.

    Expanding (sum_q beta_q ||h_q||^2)^2 under independence across APs:
    the diagonal terms carry E{beta_q^2} * S_q (S_q + 1) and the cross
    terms factorize into products of per-AP means.
    """
    m1, m2 = _per_ap_raw_moments(params, layout, mtd, 2)
    total_mean = float(np.sum(m1))
    return float(np.sum(m2) + total_mean**2 - np.sum(m1**2))


@dataclass(frozen=True)
class GainMoments:
    """Mean and central moments of the channel gain, exact under the model.

    ``mean``, ``variance``, ``third_central`` and ``fourth_central`` are the
    usual mu, mu_2, mu_3, mu_4; they follow from summing per-AP cumulants,
    which add across independent APs.
    """

    mean: float
    variance: float
    third_central: float
    fourth_central: float

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    @property
    def cv(self) -> float:
        return self.std / self.mean

    @property
    def second_raw(self) -> float:
        return self.variance + self.mean**2

    def mean_standard_error(self, n: int) -> float:
        """Standard error of an n-sample Monte Carlo mean."""
        return math.sqrt(self.variance / n)

    def cv_standard_error(self, n: int) -> float:
        """Delta-method standard error of an n-sample Monte Carlo CV.

        For the sample coefficient of variation c = s / xbar,
        Var(c) ~ (1/n) [ (mu4 - sigma^4) / (4 sigma^2 mu^2)
                         + sigma^4 / mu^4 - mu3 / mu^3 ].
        """
        mu, var = self.mean, self.variance
        term = (
            (self.fourth_central - var**2) / (4.0 * var * mu**2)
            + var**2 / mu**4
            - self.third_central / mu**3
        )
        return math.sqrt(term / n)


def gain_moments(params: ChannelModelParams, layout: DeploymentLayout, mtd: Point3) -> GainMoments:
    """Exact gain moments up to fourth order via per-AP cumulants."""
    m1, m2, m3, m4 = _per_ap_raw_moments(params, layout, mtd, 4)
    k1 = m1
    k2 = m2 - m1**2
    k3 = m3 - 3 * m2 * m1 + 2 * m1**3
    k4 = m4 - 4 * m3 * m1 - 3 * m2**2 + 12 * m2 * m1**2 - 6 * m1**4
    var = float(np.sum(k2))
    return GainMoments(
        mean=float(np.sum(k1)),
        variance=var,
        third_central=float(np.sum(k3)),
        fourth_central=float(np.sum(k4)) + 3.0 * var**2,
    )
