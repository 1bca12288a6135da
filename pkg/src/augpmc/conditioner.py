"""Conditioning information held fixed inside one particle-filter run.

A :class:`Conditioner` records, for each named model component (a
parameter or the initial state), whether that component is fixed at a
value, pinned through a pseudo-observation, or left free for the filter to
sample.  Exactly one of the three applies per component.  The outer MCMC
moves update the fixed values and pseudo-observation values; the filter
reads them but never writes them.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

__all__ = ["Component", "Conditioner", "FIXED", "PSEUDO", "FREE"]

FIXED = "fixed"
PSEUDO = "pseudo"
FREE = "free"


@dataclass(frozen=True)
class Component:
    """One conditioned component: its kind, current value, and scheme.

    ``value`` is the fixed component value (kind ``fixed``) or the current
    pseudo-observation (kind ``pseudo``); ``scheme`` is the conjugate
    pseudo-observation scheme for ``pseudo`` components and None otherwise.
    """

    kind: str
    value: float | None = None
    scheme: Any = None

    def __post_init__(self):
        if self.kind not in (FIXED, PSEUDO, FREE):
            raise ValueError(f"unknown component kind {self.kind!r}")
        if self.kind != FREE and self.value is None:
            raise ValueError(f"{self.kind} component needs a value")
        if self.kind == PSEUDO and self.scheme is None:
            raise ValueError("pseudo component needs a scheme")


@dataclass(frozen=True)
class Conditioner:
    """Mapping of component name to :class:`Component`, plus an optional
    cluster-subset record used by the mixture model."""

    components: dict[str, Component] = field(default_factory=dict)
    subset: Any = None  # SubsetLabels for the DPMM, None elsewhere

    def kind(self, name: str) -> str:
        comp = self.components.get(name)
        return comp.kind if comp is not None else FREE

    def value(self, name: str) -> float:
        return self.components[name].value

    def scheme(self, name: str):
        return self.components[name].scheme

    def z_names(self) -> list[str]:
        """Names of the components the MCMC move updates (fixed or pseudo)."""
        return [n for n, c in self.components.items() if c.kind != FREE]

    def z_values(self) -> dict[str, float]:
        return {n: c.value for n, c in self.components.items() if c.kind != FREE}

    def with_value(self, name: str, value: float) -> "Conditioner":
        comp = self.components[name]
        new = dict(self.components)
        new[name] = replace(comp, value=value)
        return Conditioner(new, self.subset)

    def with_values(self, values: dict[str, float]) -> "Conditioner":
        cond = self
        for name, value in values.items():
            cond = cond.with_value(name, value)
        return cond

    def with_subset(self, subset) -> "Conditioner":
        return Conditioner(self.components, subset)
