"""Exact analysis of smoothings of odd-dimensional nodal Calabi-Yau hypersurfaces."""

__version__ = "0.1.0"

from .exactfield import CyclotomicNumber, PrimeFieldElement, cyclotomic_polynomial, reduce_mod_p
from .polyring import MultiPoly, ProjectivePoint, evaluate, hessian_matrix, monomial_basis, partial_derivative
from .linalg import Subspace, rank
from .hypersurface import NodalHypersurface, ingest, schoen_family, serialize, verify_odp
from .smoothing import (
    analyze,
    check_power_containment,
    check_power_spans,
    check_smoothable,
    evaluation_matrix,
    power_map,
    space_I,
    space_K,
)
from .cohomtab import (
    bott,
    euler_characteristic,
    quadric_cohomology_table,
    restricted_cohomology,
    rq_multiply,
)

__all__ = [
    "CyclotomicNumber", "PrimeFieldElement", "cyclotomic_polynomial", "reduce_mod_p",
    "MultiPoly", "ProjectivePoint", "evaluate", "hessian_matrix", "monomial_basis", "partial_derivative",
    "Subspace", "rank",
    "NodalHypersurface", "ingest", "schoen_family", "serialize", "verify_odp",
    "analyze", "check_power_containment", "check_power_spans", "check_smoothable",
    "evaluation_matrix", "power_map", "space_I", "space_K",
    "bott", "euler_characteristic", "quadric_cohomology_table", "restricted_cohomology", "rq_multiply",
]
