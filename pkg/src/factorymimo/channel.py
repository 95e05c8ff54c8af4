"""Large-scale and small-scale fading model for the uplink channel.

The channel between the single-antenna device and AP q is
g_q = sqrt(beta_q) * h_q, where h_q has i.i.d. unit-variance circularly
symmetric complex Gaussian entries (one per AP antenna) and beta_q is the
large-scale coefficient combining distance-dependent attenuation with
lognormal shadowing:

    PL_dB(d)  = 32.5 + 20 log10(f_c) + 10 eta log10(d)      (f_c GHz, d m)
    beta      = 10^(X_dB / 10) / 10^(PL_dB / 10),  X_dB ~ N(0, sigma_s^2)

The channel gain of one realization is ||g||^2 = sum_q beta_q ||h_q||^2.
Shadowing is drawn independently per AP and shared by that AP's antennas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _rng
from .geometry import DeploymentLayout, Point3, ap_distances

__all__ = [
    "ChannelModelParams",
    "DENSE_FACTORY_NLOS",
    "ChannelRealization",
    "path_loss_db",
    "linear_path_loss",
    "sample_shadowing_db",
    "sample_large_scale",
    "sample_realization",
    "ComponentSampler",
]


@dataclass(frozen=True)
class ChannelModelParams:
    """Carrier frequency (GHz), path-loss exponent and shadowing spread (dB)."""

    f_c_ghz: float
    eta: float
    sigma_s_db: float

    def __post_init__(self):
        if self.f_c_ghz <= 0:
            raise ValueError("carrier frequency must be positive")
        if self.eta <= 0:
            raise ValueError("path-loss exponent must be positive")
        if self.sigma_s_db < 0:
            raise ValueError("shadowing spread cannot be negative")


# measurement-based parameters for a dense-clutter NLOS factory hall at 3.5 GHz
DENSE_FACTORY_NLOS = ChannelModelParams(f_c_ghz=3.5, eta=3.19, sigma_s_db=7.56)


def path_loss_db(params: ChannelModelParams, d_3d) -> float | np.ndarray:
    """Distance-dependent attenuation in dB; rejects non-positive distances."""
    d = np.asarray(d_3d, dtype=float)
    if np.any(d <= 0):
        raise ValueError("path loss is undefined for non-positive distance")
    out = 32.5 + 20 * np.log10(params.f_c_ghz) + 10 * params.eta * np.log10(d)
    return out if out.ndim else float(out)


def linear_path_loss(params: ChannelModelParams, d_3d) -> float | np.ndarray:
    """Path loss as a linear power ratio, 10^(PL_dB / 10)."""
    out = 10.0 ** (np.asarray(path_loss_db(params, d_3d)) / 10.0)
    return out if out.ndim else float(out)


def sample_shadowing_db(params: ChannelModelParams, rng: np.random.Generator, size=None):
    """Zero-mean Gaussian shadowing draw(s) in dB with std sigma_s_db."""
    return rng.normal(0.0, params.sigma_s_db, size)


def sample_large_scale(params: ChannelModelParams, d_3d, rng: np.random.Generator, size=None):
    """One (or ``size``) draw(s) of the large-scale coefficient beta at distance d."""
    pl = linear_path_loss(params, d_3d)
    x_db = sample_shadowing_db(params, rng, size)
    return 10.0 ** (np.asarray(x_db) / 10.0) / pl if size is not None else float(
        10.0 ** (x_db / 10.0) / pl
    )


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the composite channel: per-AP large-scale coefficients,
    per-AP fading vectors and the resulting gain ||g||^2."""

    beta: np.ndarray                 # (Q,) linear large-scale coefficients
    fading: tuple[np.ndarray, ...]   # per AP, (S_q,) complex fading entries
    gain: float

    @property
    def num_aps(self) -> int:
        return len(self.beta)

    def fading_energy(self) -> np.ndarray:
        """(Q,) squared norms ||h_q||^2."""
        return np.array([float(np.sum(h.real**2 + h.imag**2)) for h in self.fading])


def _fading_boundaries(antennas_per_ap: np.ndarray) -> np.ndarray:
    """Start indices of each AP's block in the flat (2M,) normal vector."""
    starts = np.zeros(len(antennas_per_ap), dtype=np.intp)
    np.cumsum(2 * antennas_per_ap[:-1], out=starts[1:])
    return starts


def sample_realization(
    layout: DeploymentLayout,
    mtd: Point3,
    params: ChannelModelParams,
    rng: np.random.Generator,
) -> ChannelRealization:
    """Draw one channel realization for a device at ``mtd``.

    Randomness is consumed in a fixed order: one shadowing normal per AP
    (AP 1..Q), then for each AP in turn the real/imaginary pairs of its S
    fading entries. Seeded generators therefore reproduce bit-identical
    realizations.
    """
    if mtd.z >= layout.aps[0][0].z:
        raise ValueError("device must sit strictly below the AP mounting height")
    dists = ap_distances(layout, mtd)
    pl = linear_path_loss(params, dists)

    x_db = params.sigma_s_db * rng.standard_normal(layout.num_aps)
    beta = 10.0 ** (x_db / 10.0) / pl

    z = rng.standard_normal((layout.total_antennas, 2))
    h_flat = (z[:, 0] + 1j * z[:, 1]) * math.sqrt(0.5)
    counts = layout.antennas_per_ap()
    splits = np.cumsum(counts)[:-1]
    fading = tuple(np.split(h_flat, splits))

    energy = np.array([float(np.sum(h.real**2 + h.imag**2)) for h in fading])
    gain = float(np.dot(beta, energy))
    return ChannelRealization(beta=beta, fading=fading, gain=gain)


class ComponentSampler:
    """Vectorized per-trial channel components with indexed substreams.

    Trial i consumes a fixed, block-aligned slice of a Philox counter
    stream keyed by ``seed`` (shadowing normals for APs 1..Q, then the 2M
    fading normals in AP order, then alignment padding), so any batching or
    thread partition of the trial range yields identical results.
    """

    def __init__(self, layout: DeploymentLayout, mtd: Point3, params: ChannelModelParams, seed: int):
        if mtd.z >= layout.aps[0][0].z:
            raise ValueError("device must sit strictly below the AP mounting height")
        self.layout = layout
        self.params = params
        self.seed = seed
        self.distances = ap_distances(layout, mtd)
        self._pl = np.asarray(linear_path_loss(params, self.distances))
        self._q = layout.num_aps
        self._m = layout.total_antennas
        self._bounds = _fading_boundaries(layout.antennas_per_ap())
        self.draws_per_trial = _rng.align_draws(self._q + 2 * self._m)

    def batch(self, start_trial: int, n_trials: int) -> tuple[np.ndarray, np.ndarray]:
        """Return (beta, fading_energy), each (n_trials, Q), for a trial range."""
        z = _rng.standard_normals(self.seed, self.draws_per_trial, start_trial, n_trials)
        q, m = self._q, self._m
        x_db = self.params.sigma_s_db * z[:, :q]
        beta = 10.0 ** (x_db / 10.0) / self._pl
        zf = z[:, q : q + 2 * m]
        energy = 0.5 * np.add.reduceat(zf * zf, self._bounds, axis=1)
        return beta, energy

    def gains(self, start_trial: int, n_trials: int) -> np.ndarray:
        """(n_trials,) channel gains sum_q beta_q ||h_q||^2."""
        beta, energy = self.batch(start_trial, n_trials)
        return np.einsum("ij,ij->i", beta, energy)
