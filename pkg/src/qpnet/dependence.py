"""Pairwise positive-dependence checkers.

Four notions, strongest to weakest: monotone likelihood ratio (MLRP),
total positivity of order 2 (TP2), directed qualitative influence via
first-order stochastic dominance, and association.  Influence is the
only one of these that is *not* symmetric for non-binary variables,
which is exactly what the rest of the package exercises.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .dist import (
    Cdf,
    DominanceOrder,
    EPS_PROB,
    JointTable,
    VariableSpec,
    fsd_compare,
)
from .errors import (
    ContextOverlap,
    IsMlrp,
    MassNotOne,
    NotMlrp,
    ShapeMismatch,
    SupportTooLarge,
    ZeroColumn,
)


class Verdict(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class InfluenceWitness:
    """One cdf comparison backing a verdict.

    ``upper``/``lower`` are the two conditioning levels (upper > lower),
    ``context`` the fixed values of the remaining conditioning variables,
    ``relation`` the dominance result, and ``offending_level`` the first
    target-support point where the expected dominance fails (None for a
    witness of a strict dominance).
    """

    context: tuple[tuple[str, float], ...]
    upper: float
    lower: float
    relation: DominanceOrder
    offending_level: Optional[float] = None

    def to_jsonable(self) -> dict:
        return {
            "context": {k: v for k, v in self.context},
            "upper": self.upper,
            "lower": self.lower,
            "relation": self.relation.value,
            "offending_level": self.offending_level,
        }


@dataclass(frozen=True)
class InfluenceVerdict:
    verdict: Verdict
    witness: Optional[InfluenceWitness]
    skipped_contexts: tuple[tuple[tuple[str, float], ...], ...] = ()

    def to_jsonable(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "witness": self.witness.to_jsonable() if self.witness else None,
            "skipped_contexts": [
                {k: v for k, v in ctx} for ctx in self.skipped_contexts
            ],
        }


def influence_sign(
    table: JointTable,
    i: str,
    j: str,
    context: Iterable[str] = (),
    include_witness: bool = False,
) -> InfluenceVerdict:
    """Directed qualitative influence of ``i`` on ``j`` given a context.

    Positive iff, in every context cell, conditioning on a larger level
    of ``i`` FSD-dominates conditioning on any smaller one, with at
    least one strict dominance overall.  Conditioning cells with
    probability <= EPS_PROB are skipped and reported.
    """
    context = tuple(context)
    if i == j:
        raise ContextOverlap("influence endpoints must differ")
    if i in context or j in context:
        raise ContextOverlap("context must be disjoint from the endpoints")

    marg = table.marginalize({i, j, *context})
    i_spec = marg.variable(i)
    j_spec = marg.variable(j)
    ctx_specs = [marg.variable(c) for c in context]

    # axes ordered (i, context..., j)
    perm = [marg.axis(i)] + [marg.axis(c) for c in context] + [marg.axis(j)]
    probs = np.transpose(marg.probabilities, perm)
    ctx_shape = tuple(s.size for s in ctx_specs)

    skipped: list[tuple[tuple[str, float], ...]] = []
    comparisons: list[tuple[InfluenceWitness, DominanceOrder]] = []

    for ctx_idx in np.ndindex(ctx_shape) if ctx_shape else [()]:
        ctx_levels = tuple(
            (s.name, s.support[k]) for s, k in zip(ctx_specs, ctx_idx)
        )
        slab = probs[(slice(None), *ctx_idx, slice(None))]  # (i levels, j levels)
        masses = slab.sum(axis=1)
        cdfs: list[Optional[Cdf]] = []
        for xi in range(i_spec.size):
            if masses[xi] <= EPS_PROB:
                skipped.append(ctx_levels + ((i, i_spec.support[xi]),))
                cdfs.append(None)
            else:
                cdfs.append(Cdf(j_spec.support, np.cumsum(slab[xi] / masses[xi])))
        for hi in range(1, i_spec.size):
            if cdfs[hi] is None:
                continue
            for lo in range(hi - 1, -1, -1):
                if cdfs[lo] is None:
                    continue
                rel = fsd_compare(cdfs[hi], cdfs[lo])
                offending = None
                if rel is DominanceOrder.INCOMPARABLE:
                    diff = cdfs[hi].cumulative - cdfs[lo].cumulative
                    offending = j_spec.support[int(np.argmax(diff > EPS_PROB))]
                witness = InfluenceWitness(
                    ctx_levels,
                    i_spec.support[hi],
                    i_spec.support[lo],
                    rel,
                    offending,
                )
                comparisons.append((witness, rel))

    return _aggregate_influence(comparisons, tuple(skipped), include_witness)


def _aggregate_influence(comparisons, skipped, include_witness) -> InfluenceVerdict:
    rels = [rel for _, rel in comparisons]
    if not rels or all(r is DominanceOrder.EQUAL for r in rels):
        return InfluenceVerdict(Verdict.ZERO, None, skipped)
    dom = DominanceOrder.DOMINATES
    domby = DominanceOrder.DOMINATED_BY
    eq = DominanceOrder.EQUAL
    if all(r in (dom, eq) for r in rels):
        witness = next(w for w, r in comparisons if r is dom) if include_witness else None
        return InfluenceVerdict(Verdict.POSITIVE, witness, skipped)
    if all(r in (domby, eq) for r in rels):
        witness = next(w for w, r in comparisons if r is domby) if include_witness else None
        return InfluenceVerdict(Verdict.NEGATIVE, witness, skipped)
    # ambiguous: prefer an incomparable pair as the witness, else the first
    # comparison conflicting with the first strict one
    witness = next(
        (w for w, r in comparisons if r is DominanceOrder.INCOMPARABLE), None
    )
    if witness is None:
        first_strict = next(r for r in rels if r is not eq)
        witness = next(w for w, r in comparisons if r is not eq and r is not first_strict)
    return InfluenceVerdict(Verdict.AMBIGUOUS, witness, skipped)


# ---- MLRP / TP2 ---------------------------------------------------------


@dataclass(frozen=True)
class MlrpViolation:
    """A failed likelihood-ratio comparison: ratio_upper < ratio_lower."""

    x_upper: float
    x_lower: float
    y_upper: float
    y_lower: float
    ratio_upper: float
    ratio_lower: float

    def to_jsonable(self) -> dict:
        return {
            "x": self.x_upper,
            "x_prime": self.x_lower,
            "y": self.y_upper,
            "y_prime": self.y_lower,
            "ratio_at_x": self.ratio_upper,
            "ratio_at_x_prime": self.ratio_lower,
        }


@dataclass(frozen=True)
class MlrpResult:
    holds: bool
    violations: tuple[MlrpViolation, ...]

    @property
    def witness(self) -> Optional[MlrpViolation]:
        return self.violations[0] if self.violations else None

    def to_jsonable(self) -> dict:
        return {
            "holds": self.holds,
            "witness": self.witness.to_jsonable() if self.witness else None,
            "violation_count": len(self.violations),
        }


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0.0 else math.inf


def _conditional_mlrp_violations(
    cond: np.ndarray, x_support: Sequence[float], y_support: Sequence[float]
) -> list[MlrpViolation]:
    """Violations of the monotone likelihood ratio for p(x|y) columns.

    Scans upper x first so the most extreme witness pair is reported
    first.  Uses cross-products, equivalent to the ratio inequality and
    safe when individual densities are zero.
    """
    nx, ny = cond.shape
    out: list[MlrpViolation] = []
    for xh in range(nx - 1, -1, -1):
        for xl in range(xh):
            for yh in range(ny - 1, -1, -1):
                for yl in range(yh):
                    lhs = cond[xh, yh] * cond[xl, yl]
                    rhs = cond[xh, yl] * cond[xl, yh]
                    if lhs < rhs - EPS_PROB:
                        out.append(
                            MlrpViolation(
                                x_support[xh],
                                x_support[xl],
                                y_support[yh],
                                y_support[yl],
                                _ratio(cond[xh, yh], cond[xh, yl]),
                                _ratio(cond[xl, yh], cond[xl, yl]),
                            )
                        )
    return out


def mlrp_check(table: JointTable, x: str, y: str) -> MlrpResult:
    """Monotone likelihood ratio property of p(x|y) on the (x, y) marginal."""
    marg = table.marginalize({x, y})
    probs = np.transpose(
        marg.probabilities, (marg.axis(x), marg.axis(y))
    )
    x_spec, y_spec = marg.variable(x), marg.variable(y)
    col_mass = probs.sum(axis=0)
    if np.any(col_mass <= EPS_PROB):
        bad = y_spec.support[int(np.argmax(col_mass <= EPS_PROB))]
        raise ZeroColumn(f"conditioning level {y}={bad} has no mass")
    cond = probs / col_mass
    violations = _conditional_mlrp_violations(cond, x_spec.support, y_spec.support)
    return MlrpResult(not violations, tuple(violations))


@dataclass(frozen=True)
class Tp2Violation:
    x_lower: float
    x_upper: float
    y_lower: float
    y_upper: float
    cross_product: float
    diagonal_product: float

    def to_jsonable(self) -> dict:
        return {
            "x": self.x_lower,
            "x_prime": self.x_upper,
            "y": self.y_lower,
            "y_prime": self.y_upper,
            "cross_product": self.cross_product,
            "diagonal_product": self.diagonal_product,
        }


@dataclass(frozen=True)
class Tp2Result:
    holds: bool
    witness: Optional[Tp2Violation]

    def to_jsonable(self) -> dict:
        return {
            "holds": self.holds,
            "witness": self.witness.to_jsonable() if self.witness else None,
        }


def tp2_check(table: JointTable, x: str, y: str) -> Tp2Result:
    """Total positivity of order 2 on the (x, y) marginal."""
    marg = table.marginalize({x, y})
    probs = np.transpose(marg.probabilities, (marg.axis(x), marg.axis(y)))
    x_spec, y_spec = marg.variable(x), marg.variable(y)
    for xl in range(x_spec.size):
        for xh in range(xl + 1, x_spec.size):
            for yl in range(y_spec.size):
                for yh in range(yl + 1, y_spec.size):
                    cross = probs[xl, yh] * probs[xh, yl]
                    diag = probs[xl, yl] * probs[xh, yh]
                    if cross > diag + EPS_PROB:
                        return Tp2Result(
                            False,
                            Tp2Violation(
                                x_spec.support[xl],
                                x_spec.support[xh],
                                y_spec.support[yl],
                                y_spec.support[yh],
                                cross,
                                diag,
                            ),
                        )
    return Tp2Result(True, None)


# ---- association --------------------------------------------------------


@dataclass(frozen=True)
class AssociationViolation:
    upper_set_u: tuple[tuple[float, float], ...]
    upper_set_v: tuple[tuple[float, float], ...]
    p_intersection: float
    p_product: float

    def to_jsonable(self) -> dict:
        return {
            "U": [list(c) for c in self.upper_set_u],
            "V": [list(c) for c in self.upper_set_v],
            "p_intersection": self.p_intersection,
            "p_product": self.p_product,
        }


@dataclass(frozen=True)
class AssociationResult:
    holds: bool
    witness: Optional[AssociationViolation]

    def to_jsonable(self) -> dict:
        return {
            "holds": self.holds,
            "witness": self.witness.to_jsonable() if self.witness else None,
        }


def _upper_set_masks(nx: int, ny: int) -> np.ndarray:
    """Boolean masks of all upper sets of the nx-by-ny grid.

    An upper set is closed under coordinatewise increase, so it is a
    staircase: row i contains columns >= t[i] with t non-increasing.
    """
    masks: list[np.ndarray] = []

    def build(row: int, prev_threshold: int, thresholds: list[int]):
        if row == nx:
            m = np.zeros((nx, ny), dtype=bool)
            for i, t in enumerate(thresholds):
                m[i, t:] = True
            masks.append(m)
            return
        for t in range(prev_threshold, -1, -1):
            build(row + 1, t, thresholds + [t])

    build(0, ny, [])
    return np.stack(masks)


def association_check(table: JointTable, x: str, y: str) -> AssociationResult:
    """Association of the (x, y) marginal via upper-set indicators.

    Checks P(U and V) >= P(U) P(V) over every pair of upper sets of the
    support grid; indicator functions of upper sets are the extreme
    points of the bounded non-decreasing functions, so this suffices.
    """
    marg = table.marginalize({x, y})
    probs = np.transpose(marg.probabilities, (marg.axis(x), marg.axis(y)))
    x_spec, y_spec = marg.variable(x), marg.variable(y)
    nx, ny = x_spec.size, y_spec.size
    count = math.comb(nx + ny, nx)
    if count > 1_000_000:
        raise SupportTooLarge(
            f"{count} upper sets on a {nx}x{ny} grid exceeds the 1e6 guard"
        )
    masks = _upper_set_masks(nx, ny)
    flat = probs.reshape(-1)
    flat_masks = masks.reshape(len(masks), -1)
    p_single = flat_masks @ flat
    for a in range(len(masks)):
        inter = (flat_masks[a] & flat_masks) @ flat
        bad = inter < p_single[a] * p_single - EPS_PROB
        if np.any(bad):
            b = int(np.argmax(bad))
            return AssociationResult(
                False,
                AssociationViolation(
                    _cells(masks[a], x_spec, y_spec),
                    _cells(masks[b], x_spec, y_spec),
                    float(inter[b]),
                    float(p_single[a] * p_single[b]),
                ),
            )
    return AssociationResult(True, None)


def _cells(mask: np.ndarray, x_spec: VariableSpec, y_spec: VariableSpec):
    return tuple(
        (x_spec.support[i], y_spec.support[j])
        for i, j in zip(*np.nonzero(mask))
    )


# ---- Proposition-style prior/likelihood harness -------------------------


@dataclass(frozen=True, eq=False)
class ConditionalTable:
    """Columns of conditional pmfs: probabilities[:, k] = p(of | given=k)."""

    of: VariableSpec
    given: VariableSpec
    probabilities: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.probabilities, dtype=float)
        object.__setattr__(self, "probabilities", arr)
        if arr.shape != (self.of.size, self.given.size):
            raise ShapeMismatch(
                f"conditional table shape {arr.shape} != "
                f"({self.of.size}, {self.given.size})"
            )
        if np.any(arr < -EPS_PROB):
            raise ShapeMismatch("conditional probabilities must be non-negative")
        sums = arr.sum(axis=0)
        if np.any(np.abs(sums - 1.0) > 1e-8):
            raise MassNotOne(float(sums[int(np.argmax(np.abs(sums - 1.0)))]))
        arr.flags.writeable = False

    def mlrp_violations(self) -> list[MlrpViolation]:
        return _conditional_mlrp_violations(
            self.probabilities, self.of.support, self.given.support
        )

    def joint_with_prior(self, prior: np.ndarray) -> JointTable:
        prior = np.asarray(prior, dtype=float)
        if prior.shape != (self.given.size,):
            raise ShapeMismatch(
                f"prior length {prior.shape} != support size {self.given.size}"
            )
        if abs(float(prior.sum()) - 1.0) > 1e-8:
            raise MassNotOne(float(prior.sum()))
        joint = self.probabilities * prior[np.newaxis, :]
        return JointTable((self.of, self.given), joint / joint.sum())


def prop1_forward(
    likelihood: ConditionalTable, priors: Sequence[np.ndarray]
) -> bool:
    """Check that an MLRP likelihood yields (weak) positive influence both
    ways under every supplied prior on the conditioning variable."""
    if likelihood.mlrp_violations():
        raise NotMlrp("likelihood does not satisfy the monotone likelihood ratio")
    ok = (Verdict.POSITIVE, Verdict.ZERO)
    for prior in priors:
        joint = likelihood.joint_with_prior(prior)
        fwd = influence_sign(joint, likelihood.of.name, likelihood.given.name)
        rev = influence_sign(joint, likelihood.given.name, likelihood.of.name)
        if fwd.verdict not in ok or rev.verdict not in ok:
            return False
    return True


def prop1_witness_search(
    likelihood: ConditionalTable, seed: int, trials: int
) -> Optional[np.ndarray]:
    """Search random priors for one under which the induced influence of
    the observed variable on the conditioned one is not positive.

    Such a prior must exist when the likelihood fails the MLRP.  Trial t
    draws from its own generator keyed by (seed, t), so results are
    reproducible and order-independent.
    """
    if not likelihood.mlrp_violations():
        raise IsMlrp("an MLRP likelihood admits no such prior")
    k = likelihood.given.size
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        draw = rng.exponential(size=k)
        prior = draw / draw.sum()
        joint = likelihood.joint_with_prior(prior)
        verdict = influence_sign(
            joint, likelihood.of.name, likelihood.given.name
        ).verdict
        if verdict in (Verdict.NEGATIVE, Verdict.AMBIGUOUS):
            return prior
    return None
