"""Built-in fixtures and the randomized counterexample finder.

The 3x3 asymmetry table, the space-shuttle network with a concrete
joint distribution exhibiting the probe/temperature asymmetry, and a
rejection-sampling search for distributions that satisfy a QPN while
contradicting a claimed inference.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dependence import InfluenceVerdict, Verdict, influence_sign
from .dist import JointTable, VariableSpec
from .errors import BadProbability, ParseError, QpnError
from .graph import Qpn, SignedDag, SignedEdge
from .semantics import SatisfactionReport, satisfies_qpn
from .signs import Sign


def table1_fixture() -> JointTable:
    """The 3x3 joint on {1,2,3}x{1,2,3} whose X->Y influence is positive
    while the reverse is ambiguous and the likelihood ratio is not
    monotone."""
    x = VariableSpec("X", (1, 2, 3))
    y = VariableSpec("Y", (1, 2, 3))
    rows = [
        [0.2, 0.05, 0.075],
        [0.15, 0.15, 0.1],
        [0.075, 0.1, 0.1],
    ]
    return JointTable((x, y), np.array(rows))


TEMP = "HeOxTemp"
PROBE = "HeOxTempProbe"
HIGH_OX = "HighOxTemp"
LEAK = "OxTankLeak"
PRESSURE = "OxPressureProbe"
VALVE = "HeOxValveProblem"


def shuttle_qpn() -> Qpn:
    """Six-variable tank-temperature network with two probe sensors."""
    tens = tuple(range(10))
    variables = (
        VariableSpec(TEMP, tens),
        VariableSpec(PROBE, tens),
        VariableSpec(HIGH_OX, (0, 1)),
        VariableSpec(LEAK, (0, 1)),
        VariableSpec(PRESSURE, (0, 1, 2)),
        VariableSpec(VALVE, (0, 1)),
    )
    plus, minus = Sign.PLUS, Sign.MINUS
    edges = (
        SignedEdge(TEMP, PROBE, plus),
        SignedEdge(TEMP, HIGH_OX, plus),
        SignedEdge(TEMP, LEAK, plus),
        SignedEdge(HIGH_OX, LEAK, plus),
        SignedEdge(LEAK, PRESSURE, minus),
        SignedEdge(VALVE, PRESSURE, minus),
    )
    return Qpn(SignedDag(variables, edges))


def shuttle_distribution(fault_prob: float = 0.05) -> JointTable:
    """A concrete joint satisfying the shuttle QPN.

    Temperature is uniform over ten levels; the probe copies it exactly
    except with probability ``fault_prob``, when it reads uniformly from
    the top half {5..9} independent of the true temperature.  A faulted
    probe is how the reverse influence (probe on temperature) breaks: a
    reading of 4 pins the temperature at 4, while readings of 5 and up
    leave mass below 4.  The remaining conditionals are a fixed monotone
    choice that keeps every edge sign valid.
    """
    if not 0.0 < fault_prob < 1.0:
        raise BadProbability(f"fault probability must be in (0, 1), got {fault_prob}")

    qpn = shuttle_qpn()
    n = 10

    p_temp = np.full(n, 1.0 / n)

    p_probe = np.zeros((n, n))  # [temp, probe]
    for t in range(n):
        p_probe[t, t] += 1.0 - fault_prob
        p_probe[t, 5:] += fault_prob / 5.0

    high1 = 0.1 + 0.08 * np.arange(n)  # [temp]
    p_high = np.stack([1.0 - high1, high1], axis=1)  # [temp, high]

    leak1 = (
        0.05
        + 0.4 * (np.arange(n)[:, None] / 9.0)
        + 0.3 * np.array([0.0, 1.0])[None, :]
    )  # [temp, high]
    p_leak = np.stack([1.0 - leak1, leak1], axis=2)  # [temp, high, leak]

    by_severity = np.array(
        [
            [0.1, 0.2, 0.7],  # no leak, no valve problem
            [0.3, 0.4, 0.3],
            [0.6, 0.3, 0.1],  # both
        ]
    )
    p_pressure = np.zeros((2, 2, 3))  # [leak, valve, pressure]
    for leak in range(2):
        for valve in range(2):
            p_pressure[leak, valve] = by_severity[leak + valve]

    p_valve = np.array([0.9, 0.1])

    # axes: TEMP, PROBE, HIGH_OX, LEAK, PRESSURE, VALVE
    joint = (
        p_temp[:, None, None, None, None, None]
        * p_probe[:, :, None, None, None, None]
        * p_high[:, None, :, None, None, None]
        * p_leak[:, None, :, :, None, None]
        * np.transpose(p_pressure, (0, 2, 1))[None, None, None, :, :, :]
        * p_valve[None, None, None, None, None, :]
    )
    return JointTable(qpn.variables, joint)


# ---- counterexample search ----------------------------------------------


@dataclass(frozen=True)
class Claim:
    """A claimed marginal influence of source on target."""

    source: str
    target: str
    claimed: Sign

    def __post_init__(self):
        if self.source == self.target:
            raise QpnError("claim endpoints must differ")
        if self.claimed not in (Sign.PLUS, Sign.MINUS, Sign.ZERO):
            raise QpnError(f"claimed sign must be +, - or 0, got {self.claimed}")

    def to_jsonable(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "claimed": self.claimed.value,
        }


def parse_claim(text: str) -> Claim:
    """Parse ``source->target:sign`` claim syntax."""
    try:
        pair, sign = text.rsplit(":", 1)
        source, target = pair.split("->")
    except ValueError:
        raise ParseError(f"claim must look like 'A->B:+', got {text!r}") from None
    if not source or not target:
        raise ParseError(f"claim must look like 'A->B:+', got {text!r}")
    return Claim(source.strip(), target.strip(), Sign.from_str(sign.strip()))


@dataclass(frozen=True)
class CounterexampleReport:
    found: bool
    table: Optional[JointTable]
    qpn_report: Optional[SatisfactionReport]
    claim_verdict: Optional[InfluenceVerdict]
    trials_used: int
    seed: int

    def to_jsonable(self) -> dict:
        return {
            "found": self.found,
            "trials_used": self.trials_used,
            "seed": self.seed,
            "table": self.table.to_jsonable() if self.table else None,
            "qpn_report": self.qpn_report.to_jsonable() if self.qpn_report else None,
            "claim_verdict": (
                self.claim_verdict.to_jsonable() if self.claim_verdict else None
            ),
        }


def sample_factorized(dag: SignedDag, rng: np.random.Generator) -> JointTable:
    """Random DAG-factorized joint: every conditional pmf drawn uniformly
    from the simplex (normalized exponential draws)."""
    specs = dag.variables
    axis = {s.name: k for k, s in enumerate(specs)}
    shape = tuple(s.size for s in specs)
    joint = np.ones(shape)
    for spec in specs:
        pa = sorted(dag.parents(spec.name), key=axis.__getitem__)
        dims = tuple(axis[p] for p in pa) + (axis[spec.name],)
        draw = rng.exponential(size=tuple(shape[d] for d in dims))
        cond = draw / draw.sum(axis=-1, keepdims=True)
        cond = np.transpose(cond, np.argsort(dims))
        newshape = [1] * len(shape)
        for d in dims:
            newshape[d] = shape[d]
        joint = joint * cond.reshape(newshape)
    return JointTable(specs, joint)


def _contradicts(claimed: Sign, verdict: Verdict) -> bool:
    if claimed is Sign.PLUS:
        return verdict in (Verdict.NEGATIVE, Verdict.AMBIGUOUS)
    if claimed is Sign.MINUS:
        return verdict in (Verdict.POSITIVE, Verdict.AMBIGUOUS)
    return verdict is not Verdict.ZERO


def find_counterexample(
    qpn: Qpn, claim: Claim, seed: int, trials: int
) -> CounterexampleReport:
    """Rejection-sample joints satisfying the QPN until one contradicts
    the claim.

    Trial t draws from a generator keyed by (seed, t), so the result is
    reproducible and independent of execution order.  A found report is
    self-certifying: its table re-verifies against both the QPN and the
    claim.
    """
    if trials <= 0:
        raise QpnError("trials must be positive")
    qpn.dag._require(claim.source, claim.target)
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        table = sample_factorized(qpn.dag, rng)
        report = satisfies_qpn(table, qpn)
        if not report.satisfied:
            continue
        verdict = influence_sign(table, claim.source, claim.target)
        if _contradicts(claim.claimed, verdict.verdict):
            return CounterexampleReport(True, table, report, verdict, t + 1, seed)
    return CounterexampleReport(False, None, None, None, trials, seed)
