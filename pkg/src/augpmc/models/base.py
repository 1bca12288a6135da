"""Contract every built-in state-space model implements.

Models operate on whole particle blocks: state and parameter arguments are
arrays whose leading axis indexes particles, which is what keeps the
generic filter loop fast in Python.  Conditioning information enters only
through :meth:`sample_initial` and the prior factor for the MH ratio; for
Markov models the transition depends on the past only through
``(x_{t-1}, params)``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from ..conditioner import Conditioner
from ..core import ExtendedState
from ..errors import ConfigError, MissingSuffStatsError
from ..rng import RngStream


class StateSpaceModel(ABC):
    """Vectorised model interface used by the particle filter and samplers."""

    #: names of conditionable components (parameters first, then "x1")
    component_names: tuple[str, ...] = ()
    #: layout of the per-particle parameter vector
    param_names: tuple[str, ...] = ()
    supports_particle_learning: bool = False

    def validate_conditioner(self, cond: Conditioner) -> None:
        unknown = set(cond.components) - set(self.component_names)
        if unknown:
            raise ConfigError(f"conditioner names unknown components: {sorted(unknown)}")

    @abstractmethod
    def sample_initial(
        self, n: int, cond: Conditioner, rng: RngStream
    ) -> tuple[np.ndarray, np.ndarray]:
        """Draw n initial particles honouring the conditioner.

        Returns ``(params, x1)`` with shapes ``[n, P]`` and ``[n]``: fixed
        components are broadcast, pseudo-observed components are drawn from
        their exact conditionals given z, free components from the prior.
        """

    @abstractmethod
    def transition(
        self, x_prev: np.ndarray, params: np.ndarray, t: int, rng: RngStream
    ) -> np.ndarray:
        """Propagate each particle's state from time t-1 to t."""

    @abstractmethod
    def log_obs_density(
        self, x: np.ndarray, params: np.ndarray, y_t: float
    ) -> np.ndarray:
        """Per-particle log density of observation ``y_t``."""

    @abstractmethod
    def log_prior_z(self, cond: Conditioner) -> float:
        """Log of the p(Z) factor entering the MH acceptance ratio.

        Sums prior densities of fixed components and pseudo-observation
        marginals of pseudo components; free components contribute nothing.
        """

    # -- particle learning hooks (models without conjugate full
    #    conditionals leave these unimplemented) -------------------------

    def init_suff_stats(
        self, x1: np.ndarray, params: np.ndarray, y0: float
    ) -> np.ndarray:
        raise MissingSuffStatsError(type(self).__name__)

    def update_suff_stats(
        self,
        stats: np.ndarray,
        x_prev: np.ndarray,
        x_new: np.ndarray,
        params: np.ndarray,
        y_t: float,
    ) -> None:
        raise MissingSuffStatsError(type(self).__name__)

    def learning_kernel(
        self,
        params: np.ndarray,
        stats: np.ndarray,
        cond: Conditioner,
        rng: RngStream,
        start: int = 0,
    ) -> None:
        """Redraw rows ``start:`` of ``params`` in place from the exact
        full conditional given each particle's own path statistics."""
        raise MissingSuffStatsError(type(self).__name__)

    # -- particle Gibbs z-update -----------------------------------------

    def z_update(
        self,
        cond: Conditioner,
        traj: ExtendedState,
        data: np.ndarray,
        rng: RngStream,
    ) -> Conditioner:
        """Sample new values for every z component given the trajectory.

        Pseudo components are exact simulation from p(z | trajectory);
        fixed components are drawn from their conjugate full conditionals
        given the path and data.  Models lacking a conjugate conditional
        for some fixed component must override and raise or substitute an
        MH step.
        """
        raise NotImplementedError(type(self).__name__)

    # -- reporting --------------------------------------------------------

    def trace_columns(self) -> list[str]:
        return list(self.param_names) + ["x1"]

    def trace_values(self, state: ExtendedState, cond: Conditioner) -> dict[str, float]:
        out = {name: float(state.params[i]) for i, name in enumerate(self.param_names)}
        out["x1"] = float(state.state_path[0])
        return out
