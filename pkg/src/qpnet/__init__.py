"""Qualitative probabilistic networks with numerically verifiable semantics."""

from .dependence import (
    ConditionalTable,
    InfluenceVerdict,
    Verdict,
    association_check,
    influence_sign,
    mlrp_check,
    prop1_forward,
    prop1_witness_search,
    tp2_check,
)
from .dist import (
    Cdf,
    DominanceOrder,
    EPS_PROB,
    JointTable,
    VariableSpec,
    fsd_compare,
    validate,
)
from .graph import Qpn, SignedDag, SignedEdge, Trail, d_separated
from .inference import (
    Mode,
    PropagationResult,
    QueryResult,
    propagate,
    query,
    reduce_vertex,
    reverse_edge,
)
from .scenarios import (
    Claim,
    CounterexampleReport,
    find_counterexample,
    parse_claim,
    sample_factorized,
    shuttle_distribution,
    shuttle_qpn,
    table1_fixture,
)
from .semantics import EPS_CI, SatisfactionReport, markov_check, satisfies_qpn
from .signs import Sign, sign_product, sign_sum

__all__ = [
    "Cdf",
    "Claim",
    "ConditionalTable",
    "CounterexampleReport",
    "DominanceOrder",
    "EPS_CI",
    "EPS_PROB",
    "InfluenceVerdict",
    "JointTable",
    "Mode",
    "PropagationResult",
    "Qpn",
    "QueryResult",
    "SatisfactionReport",
    "Sign",
    "SignedDag",
    "SignedEdge",
    "Trail",
    "VariableSpec",
    "Verdict",
    "association_check",
    "d_separated",
    "find_counterexample",
    "fsd_compare",
    "influence_sign",
    "markov_check",
    "mlrp_check",
    "parse_claim",
    "prop1_forward",
    "prop1_witness_search",
    "propagate",
    "query",
    "reduce_vertex",
    "reverse_edge",
    "sample_factorized",
    "satisfies_qpn",
    "shuttle_distribution",
    "shuttle_qpn",
    "sign_product",
    "sign_sum",
    "table1_fixture",
    "tp2_check",
    "validate",
]
