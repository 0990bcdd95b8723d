"""Exact K-cohomology of split reductive groups via the Bruhat-cell spectral sequence.

Simple roots are numbered from 0 in Bourbaki order throughout.
"""

from .bdcomplex import K2, K3, assemble_cohomology, build_column, build_columns, compute_E1
from .classify import assemble_bg
from .invariants import cubic_invariant_basis, quadratic_invariant_basis
from .rootdata import GroupSpec, SpecError, parse_spec
from .torus import classify, declassify, presentation_group
from .weyl import canonicalize_index, enumerate_wset
from .zchain import (
    CoefficientGroup,
    CohomologyGroup,
    FieldModel,
    ZComplex,
    parse_field,
    smith_normal_form,
)

__version__ = "0.1.0"

__all__ = [
    "K2", "K3", "CoefficientGroup", "CohomologyGroup", "FieldModel", "GroupSpec", "SpecError",
    "ZComplex", "assemble_bg", "assemble_cohomology", "build_column", "build_columns",
    "canonicalize_index", "classify", "compute_E1", "cubic_invariant_basis", "declassify",
    "enumerate_wset", "parse_field", "parse_spec", "presentation_group",
    "quadratic_invariant_basis", "smith_normal_form",
]
