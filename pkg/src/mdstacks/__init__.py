"""Exact Cox-data toolkit for Mori dream quotient stacks."""

__version__ = "0.1.0"

from .abelian import (
    AbelianGroup,
    DiagonalizableGroup,
    GroupHom,
    IntMatrix,
    cokernel,
    dual_group,
    pushout_root,
    smith_normal_form,
    subgroup_cokernel,
)
from .gradedring import (
    CoxPresentation,
    Verdict,
    binomial_singular_locus,
    check_homogeneous,
    degree_of_monomial,
    degree_zero_subalgebra_check,
    eliminate_simple_roots,
    is_polynomial,
)
from .polynomial import Polynomial, parse_polynomial
from .stack import (
    GerbeFactorization,
    StackData,
    ambient_toric,
    divisor_root,
    effective_degree_subgroup,
    is_toric,
    line_bundle_root,
    point,
    reconstruct,
    rigidify,
    validate,
)
from .fingerprint import graded_fingerprint, fingerprints_match
from .toric import StackyFan, canonical_from_fan, fan_to_stack, root_along_ray


