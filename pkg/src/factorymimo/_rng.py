"""Counter-based normal streams with a fixed substream per trial index.

Philox-4x64 emits four 64-bit words per counter block and supports O(1)
counter jumps, so trial i can own the draw range
[i * draws_per_trial, (i + 1) * draws_per_trial) of a single keyed stream.
Any partition of a trial range into batches (or threads) then reproduces
the same values bit for bit.
"""

from __future__ import annotations

import numpy as np
from numpy.random import Philox
from scipy.special import ndtri

# words per Philox counter block; trial offsets must stay block-aligned so
# that advance() can jump to any trial boundary
BLOCK = 4

# smallest uniform fed to the inverse normal CDF (ndtri(0) = -inf)
_MIN_UNIFORM = 2.0**-54


def align_draws(count: int) -> int:
    """Round a per-trial draw count up to a whole number of counter blocks."""
    return -(-count // BLOCK) * BLOCK


def standard_normals(seed: int, draws_per_trial: int, start_trial: int, n_trials: int) -> np.ndarray:
    """Standard-normal draws for trials [start_trial, start_trial + n_trials).

    Row t of the result holds the ``draws_per_trial`` variates owned by
    trial ``start_trial + t``. Uniforms come one 64-bit word per double from
    the Philox stream keyed by ``seed`` and are mapped through the inverse
    normal CDF, a fixed one-to-one consumption that keeps trial boundaries
    independent of batching.
    """
    if draws_per_trial % BLOCK:
        raise ValueError(f"draws_per_trial must be a multiple of {BLOCK}")
    bitgen = Philox(key=seed)
    bitgen.advance(start_trial * draws_per_trial // BLOCK)
    u = np.random.Generator(bitgen).random(n_trials * draws_per_trial)
    np.clip(u, _MIN_UNIFORM, None, out=u)
    z = ndtri(u)
    return z.reshape(n_trials, draws_per_trial)
