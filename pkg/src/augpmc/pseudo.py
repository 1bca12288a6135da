"""Conjugate pseudo-observation schemes.

A scheme bundles a target quantity's prior with a conjugate
pseudo-observation likelihood and exposes the three ingredients a runnable
augmented sampler needs: simulate ``z`` given the target, the exact
conditional of the target given ``z``, and the marginal density ``p(z)``.
The noise parameter (``noise_var`` for Gaussian schemes, ``obs_shape`` for
gamma schemes) is the informativeness knob that trades particle-filter
variance against MCMC mixing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .rng import RngStream

__all__ = [
    "GaussianPseudoObs",
    "TruncatedGaussianPseudoObs",
    "GammaPseudoObs",
    "scale_by_posterior",
    "gaussian_noise_var_for_conditional",
    "gamma_obs_shape_for_variance",
    "log_normal_pdf",
    "normal_cdf",
]


def log_normal_pdf(x, mean, var):
    return -0.5 * (math.log(2.0 * math.pi * var) + (x - mean) ** 2 / var)


def normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def _truncated_normal(mean, sd, lo, hi, rng: RngStream, size=None):
    """Rejection sampling from N(mean, sd^2) restricted to (lo, hi)."""
    if size is None:
        while True:
            x = float(rng.normal(mean, sd))
            if lo < x < hi:
                return x
    out = np.empty(size)
    filled = 0
    mean = np.broadcast_to(np.asarray(mean, dtype=np.float64), (size,))
    pending = np.arange(size)
    while pending.size:
        draw = rng.normal(mean[pending], sd)
        ok = (draw > lo) & (draw < hi)
        out[pending[ok]] = draw[ok]
        pending = pending[~ok]
        filled += int(ok.sum())
    return out


@dataclass(frozen=True)
class GaussianPseudoObs:
    """Gaussian target prior with additive Gaussian pseudo-observation noise.

    Target prior N(prior_mean, prior_var); pseudo-observation
    ``z | target ~ N(target, noise_var)``.
    """

    prior_mean: float
    prior_var: float
    noise_var: float

    def __post_init__(self):
        if self.prior_var <= 0 or self.noise_var <= 0:
            raise DomainError("prior_var and noise_var must be positive")

    def simulate(self, target, rng: RngStream, size=None):
        return rng.normal(target, math.sqrt(self.noise_var), size)

    def conditional(self, z: float) -> tuple[float, float]:
        """Posterior (mean, var) of the target given one pseudo-observation.

        The zero-prior-mean form shifts to general means: the posterior
        mean interpolates between prior mean and z with weight
        prior_var / (noise_var + prior_var).
        """
        s = self.prior_var + self.noise_var
        w = self.prior_var / s
        return self.prior_mean + (z - self.prior_mean) * w, self.noise_var * w

    def conditional_sample(self, z: float, rng: RngStream, size=None):
        mean, var = self.conditional(z)
        return rng.normal(mean, math.sqrt(var), size)

    def log_marginal(self, z: float) -> float:
        """log N(z; prior_mean, noise_var + prior_var)."""
        return log_normal_pdf(z, self.prior_mean, self.noise_var + self.prior_var)

    def prior_sample(self, rng: RngStream, size=None):
        return rng.normal(self.prior_mean, math.sqrt(self.prior_var), size)

    def prior_logpdf(self, target: float) -> float:
        return log_normal_pdf(target, self.prior_mean, self.prior_var)

    def conditional_var(self) -> float:
        return self.noise_var * self.prior_var / (self.noise_var + self.prior_var)


@dataclass(frozen=True)
class TruncatedGaussianPseudoObs(GaussianPseudoObs):
    """Gaussian scheme whose target prior is truncated to (lo, hi).

    The conjugate algebra is done as if untruncated; conditional sampling
    rejects draws outside the interval and the marginal carries the exact
    ratio of truncation constants.
    """

    lo: float = -1.0
    hi: float = 1.0

    def _prior_trunc_mass(self) -> float:
        sd = math.sqrt(self.prior_var)
        return normal_cdf((self.hi - self.prior_mean) / sd) - normal_cdf(
            (self.lo - self.prior_mean) / sd
        )

    def conditional_sample(self, z: float, rng: RngStream, size=None):
        mean, var = self.conditional(z)
        return _truncated_normal(mean, math.sqrt(var), self.lo, self.hi, rng, size)

    def log_marginal(self, z: float) -> float:
        mean, var = self.conditional(z)
        sd = math.sqrt(var)
        post_mass = normal_cdf((self.hi - mean) / sd) - normal_cdf((self.lo - mean) / sd)
        if post_mass <= 0.0:
            return -math.inf
        return (
            log_normal_pdf(z, self.prior_mean, self.noise_var + self.prior_var)
            + math.log(post_mass)
            - math.log(self._prior_trunc_mass())
        )

    def prior_sample(self, rng: RngStream, size=None):
        return _truncated_normal(
            self.prior_mean, math.sqrt(self.prior_var), self.lo, self.hi, rng, size
        )

    def prior_logpdf(self, target: float) -> float:
        if not (self.lo < target < self.hi):
            return -math.inf
        return log_normal_pdf(target, self.prior_mean, self.prior_var) - math.log(
            self._prior_trunc_mass()
        )


@dataclass(frozen=True)
class GammaPseudoObs:
    """Gamma-precision target with a gamma pseudo-observation.

    Target prior Gamma(prior_shape, rate=prior_rate); pseudo-observation
    ``z | target ~ Gamma(obs_shape, rate=target)``, so larger ``obs_shape``
    makes ``z`` more informative about the precision.
    """

    prior_shape: float
    prior_rate: float
    obs_shape: float

    def __post_init__(self):
        if min(self.prior_shape, self.prior_rate, self.obs_shape) <= 0:
            raise DomainError("all gamma scheme parameters must be positive")

    def simulate(self, precision, rng: RngStream, size=None):
        precision = np.asarray(precision, dtype=np.float64)
        if np.any(precision <= 0):
            raise DomainError("precision must be positive")
        return rng.gamma(self.obs_shape, 1.0 / precision, size)

    def conditional(self, z: float) -> tuple[float, float]:
        """Posterior (shape, rate) of the precision given z."""
        if z <= 0:
            raise DomainError("pseudo-observation must be positive")
        return self.prior_shape + self.obs_shape, self.prior_rate + z

    def conditional_sample(self, z: float, rng: RngStream, size=None):
        shape, rate = self.conditional(z)
        return rng.gamma(shape, 1.0 / rate, size)

    def log_marginal(self, z: float) -> float:
        """Log compound-gamma density of z (precision integrated out)."""
        if z <= 0:
            raise DomainError("pseudo-observation must be positive")
        a, b, n = self.prior_shape, self.prior_rate, self.obs_shape
        return (
            math.lgamma(a + n)
            - math.lgamma(a)
            - math.lgamma(n)
            + a * math.log(b)
            + (n - 1.0) * math.log(z)
            - (n + a) * math.log(z + b)
        )

    def prior_sample(self, rng: RngStream, size=None):
        return rng.gamma(self.prior_shape, 1.0 / self.prior_rate, size)

    def prior_logpdf(self, target: float) -> float:
        if target <= 0:
            return -math.inf
        a, b = self.prior_shape, self.prior_rate
        return a * math.log(b) - math.lgamma(a) + (a - 1.0) * math.log(target) - b * target


def scale_by_posterior(k_z: float, posterior_var: float) -> float:
    """Pseudo-observation noise variance as a multiple of a posterior variance."""
    if k_z <= 0 or posterior_var <= 0:
        raise DomainError("k_z and posterior_var must be positive")
    return k_z * posterior_var


def gaussian_noise_var_for_conditional(target_var: float, prior_var: float) -> float:
    """Noise variance making the Gaussian conditional variance equal target_var."""
    if not 0 < target_var < prior_var:
        raise DomainError(
            "achievable conditional variances lie strictly between 0 and the prior variance"
        )
    return target_var * prior_var / (prior_var - target_var)


def gamma_obs_shape_for_variance(
    target_var: float,
    prior_shape: float,
    prior_rate: float,
    precision: float,
) -> float:
    """Observation shape whose gamma conditional has roughly target variance.

    The conditional given z is Gamma(a+n, b+z) with variance
    (a+n)/(b+z)^2; approximating z by its mean n/precision at the supplied
    pilot precision turns "conditional variance = target_var" into a
    quadratic in n, solved here in closed form.
    """
    v, a, b, beta = target_var, prior_shape, prior_rate, precision
    if min(v, a, b, beta) <= 0:
        raise DomainError("all arguments must be positive")
    qa = v / beta**2
    qb = 2.0 * v * b / beta - 1.0
    qc = v * b**2 - a
    disc = qb * qb - 4.0 * qa * qc
    if disc <= 0:
        raise DomainError("target variance is not achievable for these prior parameters")
    n = (-qb + math.sqrt(disc)) / (2.0 * qa)
    if n <= 0:
        raise DomainError("target variance is not achievable for these prior parameters")
    return n
