"""Does a concrete joint distribution satisfy a QPN?

Two halves: the Markov conditions implied by the DAG (checked locally,
which suffices for the global property on DAGs) and the per-edge
influence constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .dependence import InfluenceVerdict, Verdict, influence_sign
from .dist import EPS_PROB, JointTable
from .errors import ShapeMismatch
from .graph import Qpn, SignedDag, SignedEdge
from .signs import Sign

# CI deviations accumulate products of table entries, so this is looser
# than EPS_PROB.
EPS_CI = 1e-7


@dataclass(frozen=True)
class MarkovViolation:
    variable: str
    nondescendants: tuple[str, ...]
    max_deviation: float

    def to_jsonable(self) -> dict:
        return {
            "variable": self.variable,
            "nondescendants": list(self.nondescendants),
            "max_deviation": self.max_deviation,
        }


@dataclass(frozen=True)
class EdgeViolation:
    edge: SignedEdge
    expected: Sign
    verdict: InfluenceVerdict

    def to_jsonable(self) -> dict:
        return {
            "from": self.edge.source,
            "to": self.edge.target,
            "expected": self.expected.value,
            "verdict": self.verdict.to_jsonable(),
        }


@dataclass(frozen=True)
class SatisfactionReport:
    markov_violations: tuple[MarkovViolation, ...]
    edge_violations: tuple[EdgeViolation, ...]

    @property
    def satisfied(self) -> bool:
        return not self.markov_violations and not self.edge_violations

    def to_jsonable(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "markov_violations": [v.to_jsonable() for v in self.markov_violations],
            "edge_violations": [v.to_jsonable() for v in self.edge_violations],
        }


def _check_same_variables(table: JointTable, dag: SignedDag) -> None:
    table_vars = {v.name: v.support for v in table.variables}
    dag_vars = {v.name: v.support for v in dag.variables}
    if table_vars != dag_vars:
        raise ShapeMismatch(
            f"table variables {sorted(table_vars)} do not match "
            f"network variables {sorted(dag_vars)}"
        )


def ci_deviation(
    table: JointTable, a: str, others: Iterable[str], given: Iterable[str] = ()
) -> float:
    """Max cell deviation from a independent-of-others given the rest.

    For every conditioning cell with positive mass, compares the joint
    conditional of (a, others) against the product of its marginals and
    returns the largest absolute difference.
    """
    others = tuple(others)
    given = tuple(given)
    if not others:
        return 0.0
    marg = table.marginalize({a, *others, *given})
    perm = (
        [marg.axis(g) for g in given]
        + [marg.axis(a)]
        + [marg.axis(o) for o in others]
    )
    probs = np.transpose(marg.probabilities, perm)
    n_given = len(given)
    given_shape = probs.shape[:n_given]
    worst = 0.0
    for cell in np.ndindex(given_shape) if n_given else [()]:
        block = probs[cell]
        mass = block.sum()
        if mass <= EPS_PROB:
            continue
        block = block / mass
        a_marg = block.reshape(block.shape[0], -1).sum(axis=1)
        o_marg = block.sum(axis=0)
        product = a_marg.reshape((-1,) + (1,) * o_marg.ndim) * o_marg
        worst = max(worst, float(np.abs(block - product).max()))
    return worst


def markov_check(table: JointTable, dag: SignedDag) -> list[MarkovViolation]:
    """Local Markov property: each variable independent of its
    nondescendants given its parents, verified numerically."""
    _check_same_variables(table, dag)
    violations: list[MarkovViolation] = []
    for v in dag.names:
        pa = dag.parents(v)
        nd = set(dag.names) - dag.descendants(v) - {v} - pa
        if not nd:
            continue
        nd_sorted = tuple(sorted(nd))
        dev = ci_deviation(table, v, nd_sorted, sorted(pa))
        if dev > EPS_CI:
            violations.append(MarkovViolation(v, nd_sorted, dev))
    return violations


def satisfies_qpn(table: JointTable, qpn: Qpn) -> SatisfactionReport:
    """Full satisfaction check: Markov conditions plus every signed edge.

    A '+' edge is met by a Positive or Zero influence verdict (the
    definition's dominance is non-strict, so independence is degenerate
    positive influence); '-' symmetrically; '?' imposes nothing.
    """
    dag = qpn.dag
    markov = markov_check(table, dag)
    edge_violations: list[EdgeViolation] = []
    for edge in dag.edges:
        if edge.sign is Sign.QUESTION:
            continue
        context = sorted(dag.parents(edge.target) - {edge.source})
        verdict = influence_sign(table, edge.source, edge.target, context)
        allowed = {
            Sign.PLUS: (Verdict.POSITIVE, Verdict.ZERO),
            Sign.MINUS: (Verdict.NEGATIVE, Verdict.ZERO),
        }[edge.sign]
        if verdict.verdict not in allowed:
            edge_violations.append(EdgeViolation(edge, edge.sign, verdict))
    return SatisfactionReport(tuple(markov), tuple(edge_violations))
