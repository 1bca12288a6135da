"""Particle filter and conditional particle filter.

The filter targets the posterior of the extended state (path plus any free
parameters) given the data and the conditioning information ``cond``, and
returns an unbiased estimate of the marginal likelihood of the data given
``cond`` together with one trajectory drawn from the final weighted
particles.

Propagation and weighting are vectorised over particles with draws made in
particle-major blocks, so results do not depend on evaluation order;
resampling, normalisation and likelihood accumulation are sequential
barriers.  Resampling happens every step by default.  An optional
effective-sample-size trigger can skip it, in which case normalised
weights are carried forward and the likelihood increments use the carried
weights, keeping the estimator unbiased either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .conditioner import Conditioner
from .core import ExtendedState, LogLikelihoodEstimate, ParticleSystem
from .errors import AllWeightsZeroError, DimensionMismatchError, InvalidStateError
from .models.base import StateSpaceModel
from .rng import RngStream

__all__ = ["PFOutput", "run_particle_filter", "run_conditional_particle_filter"]


@dataclass
class PFOutput:
    """Result of one (conditional) particle-filter run."""

    sampled_state: ExtendedState | None
    log_lik: LogLikelihoodEstimate
    final_system: ParticleSystem | None
    collapsed: bool


def _collapsed_output(term_count: int) -> PFOutput:
    return PFOutput(
        sampled_state=None,
        log_lik=LogLikelihoodEstimate(-math.inf, term_count),
        final_system=None,
        collapsed=True,
    )


def _run(
    model: StateSpaceModel,
    data: np.ndarray,
    cond: Conditioner,
    n: int,
    rng: RngStream,
    use_mcmc_kernel: bool,
    resampling: str,
    ess_threshold: float | None,
    retained: ExtendedState | None,
) -> PFOutput:
    data = np.asarray(data, dtype=np.float64)
    n_obs = len(data)
    if n_obs < 1 or n < 1:
        raise ValueError("need at least one observation and one particle")
    model.validate_conditioner(cond)
    if retained is not None and len(retained.state_path) != n_obs:
        raise DimensionMismatchError(
            f"retained trajectory has length {len(retained.state_path)}, data has {n_obs}"
        )
    kern = _accel.kernels
    log_n = math.log(n)

    params, x1 = model.sample_initial(n, cond, rng)
    if retained is not None:
        params[0] = retained.params
        x1[0] = retained.state_path[0]
    states = np.empty((n_obs, n))
    ancestors = np.empty((n_obs, n), dtype=np.int32)
    states[0] = x1
    ancestors[0] = np.arange(n, dtype=np.int32)
    stats = model.init_suff_stats(x1, params, data[0]) if use_mcmc_kernel else None

    log_lik = LogLikelihoodEstimate()
    log_carry = np.full(n, -log_n)
    probs = None
    for t in range(n_obs):
        if t > 0:
            if ess_threshold is None or kern.effective_sample_size(probs) < (
                ess_threshold * n
            ):
                if retained is not None:
                    anc = np.empty(n, dtype=np.int32)
                    anc[0] = 0
                    if n > 1:
                        # conditional SMC keeps the free ancestors i.i.d.
                        anc[1:] = kern.multinomial_resample(probs, rng.uniform(n - 1))
                elif resampling == "multinomial":
                    anc = kern.multinomial_resample(probs, rng.uniform(n)).astype(
                        np.int32
                    )
                else:
                    anc = kern.systematic_resample(probs, n, float(rng.uniform())).astype(
                        np.int32
                    )
                log_carry = np.full(n, -log_n)
            else:
                anc = ancestors[0]  # identity
                with np.errstate(divide="ignore"):
                    log_carry = np.log(probs)
            ancestors[t] = anc
            params = params[anc]
            x_prev = states[t - 1][anc]
            if use_mcmc_kernel:
                stats = stats[anc]
                model.learning_kernel(
                    params, stats, cond, rng, start=1 if retained is not None else 0
                )
            x = model.transition(x_prev, params, t, rng)
            if retained is not None:
                x[0] = retained.state_path[t]
            states[t] = x
            log_w = model.log_obs_density(x, params, data[t])
            if use_mcmc_kernel:
                model.update_suff_stats(stats, x_prev, x, params, data[t])
        else:
            log_w = model.log_obs_density(x1, params, data[0])

        combined = log_carry + log_w
        try:
            probs, log_mean = kern.normalize_log_weights(combined)
        except AllWeightsZeroError:
            if retained is not None:
                raise InvalidStateError(
                    "retained trajectory has zero likelihood at step "
                    f"{t}: conditional filter cannot proceed"
                ) from None
            return _collapsed_output(t)
        log_lik.add_term(log_mean + log_n)

    j = kern.categorical(probs, float(rng.uniform()))
    system = ParticleSystem(states, ancestors, params, combined, n_obs)
    return PFOutput(
        sampled_state=system.particle(j),
        log_lik=log_lik,
        final_system=system,
        collapsed=False,
    )


def run_particle_filter(
    model: StateSpaceModel,
    data: np.ndarray,
    cond: Conditioner,
    n: int,
    rng: RngStream,
    use_mcmc_kernel: bool = False,
    resampling: str = "systematic",
    ess_threshold: float | None = None,
) -> PFOutput:
    """Run the particle filter conditioned on ``cond``.

    ``exp(log_lik.log_value)`` is unbiased for the marginal likelihood of
    ``data`` given ``cond``.  A collapse (all weights zero at some step)
    returns a ``collapsed`` output with a ``-inf`` estimate; it never
    raises, so a PMMH driver can simply auto-reject.

    With ``use_mcmc_kernel`` the model's parameter-learning kernel is
    applied to each particle after ancestor selection and before
    propagation, which preserves both the filter target and the
    unbiasedness of the estimator because the kernel leaves the
    time ``t-1`` posterior invariant.
    """
    return _run(
        model, data, cond, n, rng, use_mcmc_kernel, resampling, ess_threshold, None
    )


def run_conditional_particle_filter(
    model: StateSpaceModel,
    data: np.ndarray,
    cond: Conditioner,
    retained: ExtendedState,
    n: int,
    rng: RngStream,
    use_mcmc_kernel: bool = False,
    ess_threshold: float | None = None,
) -> PFOutput:
    """Conditional SMC: particle 0 is pinned to ``retained`` throughout.

    The pinned particle survives every resampling step deterministically
    (its ancestor is always 0), is never moved by the learning kernel, and
    competes in the final trajectory draw with its normal weight.  Free
    ancestors are drawn i.i.d. from the weights (multinomial) regardless
    of the unconditional default, which is the construction whose
    invariance is standard; a systematic grid over the free slots would
    not leave the conditional target exactly invariant.

    The retained trajectory must be consistent with the conditioner's
    fixed components; callers refresh ``retained`` after a z-update.
    """
    return _run(model, data, cond, n, rng, use_mcmc_kernel, "multinomial", ess_threshold, retained)
