"""Exact finite discrete joint distributions.

Dense tables over small variable sets: marginalization, conditioning,
cumulative distributions and the first-order stochastic dominance (FSD)
comparison that every dependence notion in this package is built on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateVariable,
    MassNotOne,
    NegativeMass,
    QpnError,
    ShapeMismatch,
    SupportMismatch,
    UnknownLevel,
    UnknownVariable,
    ZeroProbabilityEvidence,
)

# Absolute tolerance for all probability comparisons.  Inputs are short
# decimal literals, so this cleanly separates real violations from float noise.
EPS_PROB = 1e-9


@dataclass(frozen=True)
class VariableSpec:
    """A named variable with a strictly increasing finite real support."""

    name: str
    support: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(float(x) for x in self.support))
        if not self.name:
            raise ShapeMismatch("variable name must be non-empty")
        if len(self.support) < 2:
            raise ShapeMismatch(
                f"variable {self.name!r}: support must have at least 2 levels, "
                f"got {len(self.support)}"
            )
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise ShapeMismatch(
                f"variable {self.name!r}: support must be strictly increasing"
            )

    @property
    def size(self) -> int:
        return len(self.support)

    def level_index(self, level: float) -> int:
        for k, x in enumerate(self.support):
            if abs(x - float(level)) <= EPS_PROB:
                return k
        raise UnknownLevel(f"level {level!r} not in support of {self.name!r}")

    @property
    def is_binary(self) -> bool:
        return len(self.support) == 2


def _check_unique_names(variables: Sequence[VariableSpec]) -> None:
    names = [v.name for v in variables]
    if len(set(names)) != len(names):
        raise DuplicateVariable(f"duplicate variable names in {names}")


@dataclass(frozen=True, eq=False)
class JointTable:
    """Dense joint probability table, one axis per variable."""

    variables: tuple[VariableSpec, ...]
    probabilities: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        arr = np.asarray(self.probabilities, dtype=float)
        object.__setattr__(self, "probabilities", arr)
        validate(self)
        arr.flags.writeable = False

    @classmethod
    def from_flat(
        cls, variables: Iterable[VariableSpec], flat: Iterable[float]
    ) -> "JointTable":
        """Build from row-major flat probabilities over the variable order."""
        variables = tuple(variables)
        flat = np.asarray(list(flat), dtype=float)
        shape = tuple(v.size for v in variables)
        expected = int(np.prod(shape)) if shape else 0
        if flat.size != expected:
            raise ShapeMismatch(
                f"expected {expected} probabilities for shape {shape}, got {flat.size}"
            )
        return cls(variables, flat.reshape(shape))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def axis(self, name: str) -> int:
        for k, v in enumerate(self.variables):
            if v.name == name:
                return k
        raise UnknownVariable(f"unknown variable {name!r}")

    def variable(self, name: str) -> VariableSpec:
        return self.variables[self.axis(name)]

    def marginalize(self, keep: Iterable[str]) -> "JointTable":
        """Sum out every variable not in ``keep``; mass is conserved."""
        keep = set(keep)
        if not keep:
            raise QpnError("marginalize: keep must be non-empty")
        for name in keep:
            self.axis(name)  # raises UnknownVariable
        drop_axes = tuple(
            k for k, v in enumerate(self.variables) if v.name not in keep
        )
        kept = tuple(v for v in self.variables if v.name in keep)
        probs = self.probabilities.sum(axis=drop_axes) if drop_axes else self.probabilities
        return JointTable(kept, probs.copy())

    def condition(self, evidence: Mapping[str, float]) -> "JointTable":
        """Normalized table over the remaining variables given the evidence."""
        if not evidence:
            return self
        index: list[object] = [slice(None)] * len(self.variables)
        for name, level in evidence.items():
            ax = self.axis(name)
            index[ax] = self.variable(name).level_index(level)
        sliced = self.probabilities[tuple(index)]
        mass = float(sliced.sum())
        if mass <= EPS_PROB:
            raise ZeroProbabilityEvidence(
                f"evidence {dict(evidence)!r} has probability {mass}"
            )
        remaining = tuple(v for v in self.variables if v.name not in evidence)
        if not remaining:
            raise QpnError("condition: evidence covers every variable")
        return JointTable(remaining, sliced / mass)

    def cdf_of(self, name: str) -> "Cdf":
        """Cdf of one variable (marginalizing the others away first)."""
        marg = self if len(self.variables) == 1 and self.names[0] == name else self.marginalize({name})
        pmf = marg.probabilities
        return Cdf(marg.variables[0].support, np.cumsum(pmf))

    def to_jsonable(self) -> dict:
        return {
            "variables": [
                {"name": v.name, "support": list(v.support)} for v in self.variables
            ],
            "probabilities": [float(p) for p in self.probabilities.reshape(-1)],
        }


def validate(table: JointTable) -> None:
    """Check all JointTable invariants; raise on the first violation."""
    _check_unique_names(table.variables)
    if not table.variables:
        raise ShapeMismatch("table must have at least one variable")
    shape = tuple(v.size for v in table.variables)
    if table.probabilities.shape != shape:
        raise ShapeMismatch(
            f"probability array shape {table.probabilities.shape} != supports {shape}"
        )
    if np.any(table.probabilities < -EPS_PROB):
        raise NegativeMass(f"negative probability entry: {table.probabilities.min()}")
    total = float(table.probabilities.sum())
    if abs(total - 1.0) > EPS_PROB:
        raise MassNotOne(total)


class DominanceOrder(enum.Enum):
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated_by"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True, eq=False)
class Cdf:
    """Cumulative distribution over an increasing finite support."""

    support: tuple[float, ...]
    cumulative: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(float(x) for x in self.support))
        arr = np.asarray(self.cumulative, dtype=float)
        object.__setattr__(self, "cumulative", arr)
        if arr.shape != (len(self.support),):
            raise ShapeMismatch("cdf length must match support length")
        if np.any(np.diff(arr) < -EPS_PROB):
            raise ShapeMismatch("cdf must be non-decreasing")
        if abs(float(arr[-1]) - 1.0) > EPS_PROB:
            raise ShapeMismatch(f"cdf must end at 1, got {float(arr[-1])}")
        arr.flags.writeable = False


def fsd_compare(f: Cdf, g: Cdf) -> DominanceOrder:
    """First-order stochastic dominance comparison of two same-support cdfs.

    ``f`` dominates ``g`` when f <= g pointwise (larger values more
    likely under f) with at least one coordinate strictly below; ties
    within EPS_PROB count as equal.
    """
    if f.support != g.support:
        raise SupportMismatch(
            f"cdf supports differ: {f.support} vs {g.support}"
        )
    diff = f.cumulative - g.cumulative
    below = bool(np.all(diff <= EPS_PROB))
    above = bool(np.all(diff >= -EPS_PROB))
    if below and above:
        return DominanceOrder.EQUAL
    if below:
        return DominanceOrder.DOMINATES
    if above:
        return DominanceOrder.DOMINATED_BY
    return DominanceOrder.INCOMPARABLE
