import json

import numpy as np
import pytest

from qpnet.dependence import Verdict, influence_sign, mlrp_check
from qpnet.dist import VariableSpec
from qpnet.errors import BadProbability, ParseError, QpnError
from qpnet.graph import Qpn, SignedDag, SignedEdge
from qpnet.scenarios import (
    Claim,
    find_counterexample,
    parse_claim,
    sample_factorized,
    shuttle_distribution,
    shuttle_qpn,
    table1_fixture,
)
from qpnet.semantics import satisfies_qpn
from qpnet.signs import Sign


class TestTable1Fixture:
    def test_margins(self):
        assert np.allclose(
            table1_fixture().marginalize({"X"}).probabilities, [0.325, 0.4, 0.275]
        )

    def test_influence(self):
        assert influence_sign(table1_fixture(), "X", "Y").verdict is Verdict.POSITIVE

    def test_mlrp_ratios(self):
        w = mlrp_check(table1_fixture(), "X", "Y").witness
        assert w.ratio_upper == pytest.approx(1.09, abs=5e-3)
        assert w.ratio_lower == pytest.approx(1.64, abs=5e-3)

    def test_satisfies_its_own_qpn(self):
        t = table1_fixture()
        qpn = Qpn(SignedDag(t.variables, (SignedEdge("X", "Y", Sign.PLUS),)))
        assert satisfies_qpn(t, qpn).satisfied


class TestShuttleQpn:
    def test_structure(self):
        dag = shuttle_qpn().dag
        assert dag.parents("OxTankLeak") == {"HeOxTemp", "HighOxTemp"}
        assert dag.d_separated("HeOxValveProblem", "HeOxTemp")
        assert dag.edge_between("HeOxTemp", "HeOxTempProbe").sign is Sign.PLUS

    def test_supports(self):
        dag = shuttle_qpn().dag
        assert dag.variable("HeOxTemp").size == 10
        assert dag.variable("HighOxTemp").is_binary


class TestShuttleDistribution:
    def test_satisfies_qpn(self):
        assert satisfies_qpn(shuttle_distribution(0.05), shuttle_qpn()).satisfied

    def test_temp_positively_influences_probe(self):
        v = influence_sign(shuttle_distribution(), "HeOxTemp", "HeOxTempProbe")
        assert v.verdict is Verdict.POSITIVE

    def test_probe_does_not_positively_influence_temp(self):
        v = influence_sign(shuttle_distribution(), "HeOxTempProbe", "HeOxTemp")
        assert v.verdict is Verdict.AMBIGUOUS
        # the breaking pair straddles the fault band: reading 4 is exact,
        # reading 5 may come from a faulted probe
        assert (v.witness.upper, v.witness.lower) == (5.0, 4.0)

    @pytest.mark.parametrize("eps", [0.01, 0.05, 0.2, 0.5])
    def test_fault_prob_independence_of_the_argument(self, eps):
        table = shuttle_distribution(eps)
        fwd = influence_sign(table, "HeOxTemp", "HeOxTempProbe").verdict
        rev = influence_sign(table, "HeOxTempProbe", "HeOxTemp").verdict
        assert fwd is Verdict.POSITIVE
        assert rev is Verdict.AMBIGUOUS

    def test_bad_probability(self):
        for bad in (0.0, 1.0, -0.1, 2.0):
            with pytest.raises(BadProbability):
                shuttle_distribution(bad)


class TestClaimParsing:
    def test_roundtrip(self):
        claim = parse_claim("Y->X:+")
        assert claim == Claim("Y", "X", Sign.PLUS)

    def test_bad_syntax(self):
        for text in ("YX:+", "Y->X", "->X:+", "Y->X:*"):
            with pytest.raises(ParseError):
                parse_claim(text)

    def test_question_claim_rejected(self):
        with pytest.raises(QpnError):
            Claim("A", "B", Sign.QUESTION)


def two_node_qpn(size):
    variables = (
        VariableSpec("X", tuple(range(size))),
        VariableSpec("Y", tuple(range(size))),
    )
    return Qpn(SignedDag(variables, (SignedEdge("X", "Y", Sign.PLUS),)))


class TestFindCounterexample:
    def test_ternary_symmetry_claim_refuted(self):
        report = find_counterexample(
            two_node_qpn(3), parse_claim("Y->X:+"), seed=42, trials=10_000
        )
        assert report.found
        # self-certifying: re-verify from scratch
        assert satisfies_qpn(report.table, two_node_qpn(3)).satisfied
        verdict = influence_sign(report.table, "Y", "X").verdict
        assert verdict in (Verdict.NEGATIVE, Verdict.AMBIGUOUS)

    def test_binary_symmetry_claim_survives(self):
        report = find_counterexample(
            two_node_qpn(2), parse_claim("Y->X:+"), seed=42, trials=3_000
        )
        assert not report.found
        assert report.trials_used == 3_000

    def test_deterministic_reports(self):
        a = find_counterexample(two_node_qpn(3), parse_claim("Y->X:+"), 7, 2000)
        b = find_counterexample(two_node_qpn(3), parse_claim("Y->X:+"), 7, 2000)
        assert json.dumps(a.to_jsonable(), sort_keys=True) == json.dumps(
            b.to_jsonable(), sort_keys=True
        )

    def test_zero_trials_rejected(self):
        with pytest.raises(QpnError):
            find_counterexample(two_node_qpn(3), parse_claim("Y->X:+"), 1, 0)


def test_sample_factorized_obeys_markov():
    from qpnet.semantics import markov_check

    rng = np.random.default_rng(3)
    qpn = shuttle_qpn()
    table = sample_factorized(qpn.dag, rng)
    assert markov_check(table, qpn.dag) == []
