"""Particle containers and log-weight arithmetic.

Weights live in the log domain throughout: a run of length 1000 multiplies
a thousand per-step likelihood factors, which underflows raw doubles long
before it troubles their logs.  ``-inf`` is the unique representation of a
zero weight; NaN is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .errors import InvalidSimplexError
from .rng import RngStream

__all__ = [
    "ExtendedState",
    "ParticleSystem",
    "LogLikelihoodEstimate",
    "normalize_log_weights",
    "resample_multinomial",
    "resample_systematic",
    "effective_sample_size",
]


@dataclass
class ExtendedState:
    """A full state path ``x_{1:t}`` together with a parameter vector."""

    state_path: np.ndarray
    params: np.ndarray
    t: int

    def __post_init__(self):
        self.state_path = np.asarray(self.state_path)
        self.params = np.asarray(self.params, dtype=np.float64)
        if len(self.state_path) != self.t:
            raise ValueError(
                f"state path has length {len(self.state_path)}, expected t={self.t}"
            )


@dataclass
class LogLikelihoodEstimate:
    """Running log of the marginal-likelihood estimator.

    ``log_value`` is the sum of ``term_count`` per-step log mean-weight
    terms; ``exp(log_value)`` is unbiased for the marginal likelihood of
    the data given the conditioning information.
    """

    log_value: float = 0.0
    term_count: int = 0

    def add_term(self, log_mean_weight: float) -> None:
        self.log_value += log_mean_weight
        self.term_count += 1


@dataclass
class ParticleSystem:
    """N weighted particles with their full resampling genealogy.

    ``states[t, i]`` is particle ``i``'s state value at time ``t`` and
    ``ancestors[t, i]`` the index of its time ``t-1`` parent, so any
    particle's path can be reconstructed by backtracking without storing
    N copies of every prefix.  ``params`` and ``log_weights`` refer to the
    current (latest-time) particle rows.
    """

    states: np.ndarray  # [t, n]
    ancestors: np.ndarray  # [t, n] int32; row 0 is the identity
    params: np.ndarray  # [n, n_params]
    log_weights: np.ndarray  # [n]
    t: int

    @property
    def n_particles(self) -> int:
        return self.states.shape[1]

    def validate(self) -> None:
        n = self.n_particles
        if not (
            self.states.shape == (self.t, n)
            and self.ancestors.shape == (self.t, n)
            and self.params.shape[0] == n
            and self.log_weights.shape == (n,)
        ):
            raise ValueError("particle system arrays are inconsistent")
        if np.isnan(self.log_weights).any():
            raise ValueError("log-weights contain NaN")

    def path(self, i: int) -> np.ndarray:
        """Reconstruct particle ``i``'s full path by ancestor backtracking."""
        out = np.empty(self.t, dtype=self.states.dtype)
        idx = i
        for t in range(self.t - 1, -1, -1):
            out[t] = self.states[t, idx]
            idx = self.ancestors[t, idx]
        return out

    def particle(self, i: int) -> ExtendedState:
        return ExtendedState(self.path(i), self.params[i].copy(), self.t)


def _check_simplex(probs: np.ndarray) -> np.ndarray:
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise InvalidSimplexError("probability vector must be 1-d and non-empty")
    if np.any(p < 0) or np.isnan(p).any():
        raise InvalidSimplexError("probability vector has negative or NaN entries")
    if abs(float(p.sum()) - 1.0) > 1e-9:
        raise InvalidSimplexError(f"probabilities sum to {p.sum()!r}, not 1")
    return p


def normalize_log_weights(log_weights) -> tuple[np.ndarray, float]:
    """Normalise log-weights to probabilities and their log mean weight.

    Returns ``(probs, log_mean)`` with ``probs[i]`` proportional to
    ``exp(log_weights[i])`` and ``log_mean = log((1/N) sum_i
    exp(log_weights[i]))``, evaluated by the max-shift method so the
    result is exact over hundreds of orders of magnitude.

    Raises :class:`AllWeightsZeroError` when every entry is ``-inf``;
    callers treat that as a collapsed filter, not a crash.
    """
    lw = np.ascontiguousarray(log_weights, dtype=np.float64)
    return _accel.kernels.normalize_log_weights(lw)


def resample_multinomial(probs, n: int, rng: RngStream) -> np.ndarray:
    """Draw ``n`` i.i.d. ancestor indices with the given probabilities."""
    p = _check_simplex(probs)
    if n < 1:
        raise ValueError("n must be >= 1")
    u = rng.uniform(n)
    return _accel.kernels.multinomial_resample(p, u)


def resample_systematic(probs, n: int, rng: RngStream) -> np.ndarray:
    """Systematic resampling: offspring counts within 1 of ``n * probs[i]``.

    A single uniform offset places ``n`` evenly spaced points on the
    cumulative weight axis, so each index ``i`` appears either
    ``floor(n * probs[i])`` or ``ceil(n * probs[i])`` times while keeping
    marginal selection probabilities exact.
    """
    p = _check_simplex(probs)
    if n < 1:
        raise ValueError("n must be >= 1")
    u0 = float(rng.uniform())
    return _accel.kernels.systematic_resample(p, n, u0)


def effective_sample_size(probs) -> float:
    """Return ``1 / sum(probs**2)``, in ``[1, N]``."""
    p = _check_simplex(probs)
    return _accel.kernels.effective_sample_size(p)
