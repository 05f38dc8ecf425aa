"""APN functions over GF(2^n), their codes C_f and code automorphism groups."""

from .autsearch import SearchStats, full_automorphism_group, select_blocks, weight_classes
from .errors import *  # noqa: F401,F403
from .errors import ApnForgeError, SearchTimeout
from .family import (
    FamilyParams,
    InequivalenceCertificate,
    Verdict,
    build_family,
    family_automorphism,
    family_code,
    family_report,
    gold_comparison,
    subgroup_U,
    verify_c_independence,
)
from .formats import format_code, format_function, format_perm, parse_code, parse_function, parse_perms
from .funcspace import (
    FunctionTable,
    PolySpec,
    algebraic_degree,
    anf,
    builtin_function,
    derivative_map,
    derivatives_additive,
    differential_uniformity,
    dillon_poly,
    evaluate,
    family_poly,
    gold_poly,
    is_apn,
    is_quadratic,
    random_quadratic,
)
from .gf2n import FieldElement, FieldSpec, SubfieldSpec, field_from_designation, make_field, subfield
from .lincode import (
    AffineWitness,
    BinaryCode,
    build_code,
    code_equal,
    codeword,
    contains_code,
    dimension,
    dual_min_distance,
    ea_witness,
    function_from_code,
    permute_code,
    rm1_code,
    weight_distribution,
)
from .permgrp import (
    Permutation,
    PermGroup,
    element_order,
    frobenius_perm,
    gold_generators,
    group_order,
    is_automorphism,
    mult_perm,
    translation_generators,
    translation_perm,
)
from .subgroups import conjugating_element, regular_elem_abelian_subgroups

__version__ = "0.1.0"
