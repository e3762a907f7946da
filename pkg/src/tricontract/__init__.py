"""Certification and fixed-point computation for mappings contracting triangles."""

from tricontract.phi import (
    PhiAxiomReport,
    PhiFamily,
    PhiSpec,
    check_phi_axioms,
    continuity_modulus,
    phi_eval,
    phi_lower_bound_k,
)
from tricontract.metric import (
    EuclideanSpace,
    FiniteMetricSpace,
    MetricError,
    MetricValidationReport,
    SelfMap,
    apply_map,
    distance,
    parse_space,
    random_finite_metric,
    serialize_space,
    validate_metric,
)
from tricontract.analysis import (
    ContractionCertificate,
    PeriodicityReport,
    certify,
    check_contraction,
    corollary_squared_check,
    periodicity_report,
    petrov_perimeter_check,
    triple_table,
)
from tricontract.solver import (
    IterationTrace,
    a_priori_iteration_count,
    cauchy_tail_bound,
    continuity_probe,
    picard_iterate,
    sampled_alpha_estimate,
)

__all__ = [
    "PhiAxiomReport",
    "PhiFamily",
    "PhiSpec",
    "check_phi_axioms",
    "continuity_modulus",
    "phi_eval",
    "phi_lower_bound_k",
    "EuclideanSpace",
    "FiniteMetricSpace",
    "MetricError",
    "MetricValidationReport",
    "SelfMap",
    "apply_map",
    "distance",
    "parse_space",
    "random_finite_metric",
    "serialize_space",
    "validate_metric",
    "ContractionCertificate",
    "PeriodicityReport",
    "certify",
    "check_contraction",
    "corollary_squared_check",
    "periodicity_report",
    "petrov_perimeter_check",
    "triple_table",
    "IterationTrace",
    "a_priori_iteration_count",
    "cauchy_tail_bound",
    "continuity_probe",
    "picard_iterate",
    "sampled_alpha_estimate",
]
