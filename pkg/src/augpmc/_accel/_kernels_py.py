"""Pure-numpy implementations of the hot kernels.

Semantics match ``_kernels.pyx``: both backends consume the same pre-drawn
uniforms and perform reductions in the same (sequential) order, so a given
stream of random inputs produces the same resampled ancestry on either
backend.  Selection between the two happens in :mod:`augpmc._accel` at
import time.
"""

from __future__ import annotations

import numpy as np

from ..errors import AllWeightsZeroError

BACKEND = "python"


def normalize_log_weights(log_weights: np.ndarray):
    """Return ``(probs, log_mean)`` for a vector of log-weights.

    ``log_mean = log((1/N) sum exp(log_weights))`` computed with the
    max-shift (log-sum-exp) trick; ``probs`` is the normalised weight
    vector.  Raises :class:`AllWeightsZeroError` when every entry is
    ``-inf`` and ValueError on NaN input.
    """
    lw = np.asarray(log_weights, dtype=np.float64)
    if np.isnan(lw).any():
        raise ValueError("log-weights contain NaN")
    m = np.max(lw) if lw.size else -np.inf
    if m == -np.inf:
        raise AllWeightsZeroError("all particle weights are zero")
    shifted = np.exp(lw - m)
    total = float(np.sum(shifted))
    probs = shifted / total
    log_mean = m + np.log(total / lw.size)
    return probs, log_mean


def effective_sample_size(probs: np.ndarray) -> float:
    p = np.asarray(probs, dtype=np.float64)
    return float(1.0 / np.sum(p * p))


def multinomial_resample(probs: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """One i.i.d. categorical draw per uniform, by inverse CDF.

    Draw ``k`` uses ``uniforms[k]`` alone, so the joint law is i.i.d.
    regardless of how many draws are requested.
    """
    cs = np.cumsum(np.asarray(probs, dtype=np.float64))
    idx = np.searchsorted(cs, np.asarray(uniforms, dtype=np.float64), side="right")
    return np.minimum(idx, len(cs) - 1).astype(np.int64)


def systematic_resample(probs: np.ndarray, n: int, u0: float) -> np.ndarray:
    """Systematic (stratified-grid) resampling with a single offset u0."""
    cs = np.cumsum(np.asarray(probs, dtype=np.float64))
    positions = (np.arange(n, dtype=np.float64) + u0) / n
    idx = np.searchsorted(cs, positions, side="right")
    return np.minimum(idx, len(cs) - 1).astype(np.int64)


def categorical(probs: np.ndarray, u: float) -> int:
    """Single inverse-CDF draw from a probability vector."""
    cs = np.cumsum(np.asarray(probs, dtype=np.float64))
    return int(min(np.searchsorted(cs, u, side="right"), len(cs) - 1))


def dpmm_step(
    counts: np.ndarray,
    csize: np.ndarray,
    m: np.ndarray,
    geno: np.ndarray,
    locus_offsets: np.ndarray,
    k_sizes: np.ndarray,
    lam: float,
    alpha: float,
    i: int,
    forced: int,
    uniforms: np.ndarray,
    labels_out: np.ndarray,
    logw_out: np.ndarray,
) -> None:
    """Assign individual ``i`` to a cluster in every particle.

    For each particle the unnormalised score of cluster ``j`` is the
    sequential-allocation prior times the Dirichlet-multinomial predictive
    of the individual's genotype under that cluster's current allele
    counts (cluster index ``m`` meaning "open a new cluster").  Free
    particles (``forced < 0``) sample the label from the normalised scores
    using ``uniforms`` and contribute ``log(sum_j score_j)`` to their
    weight; when ``forced >= 0`` the label is pinned and the contribution
    is that label's unnormalised log-score.  ``counts``, ``csize``, ``m``,
    ``labels_out`` and ``logw_out`` are updated in place.
    """
    n_particles = counts.shape[0]
    idx1 = locus_offsets + geno[0::2]
    idx2 = locus_offsets + geno[1::2]
    same = (geno[0::2] == geno[1::2]).astype(np.float64)
    ratio = lam / k_sizes.astype(np.float64)
    for p in range(n_particles):
        mp = int(m[p])
        log_q = np.empty(mp + 1)
        for j in range(mp + 1):
            row = counts[p, j]
            nj = csize[p, j]
            log_prior = (
                np.log(nj / (i + alpha)) if j < mp else np.log(alpha / (i + alpha))
            )
            f1 = (row[idx1] + ratio) / (2.0 * nj + lam)
            f2 = (row[idx2] + same + ratio) / (2.0 * nj + 1.0 + lam)
            log_q[j] = log_prior + np.sum(np.log(f1)) + np.sum(np.log(f2))
        top = log_q.max()
        w = np.exp(log_q - top)
        cw = np.cumsum(w)
        if forced >= 0:
            label = forced
            logw_out[p] = log_q[forced]
        else:
            target = uniforms[p] * cw[-1]
            label = int(min(np.searchsorted(cw, target, side="right"), mp))
            logw_out[p] = top + np.log(cw[-1])
        labels_out[p] = label
        if label == mp:
            m[p] = mp + 1
        csize[p, label] += 1.0
        counts[p, label, idx1] += 1.0
        counts[p, label, idx2] += 1.0
