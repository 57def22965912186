"""
Initialize designs package
"""
from errors import (
    ConstructionError,
    FieldError,
    ParameterError,
    ParameterMismatchError,
    DataFormatError,
    ArrayError,
)
from designs.entries import ZERO, Verdict
from designs.gf import FieldCtx, FieldElem, Poly, build_field, find_irreducible, rel_trace, dlog_in_subfield
from designs.bgw import (
    GMatrix,
    BgwCert,
    MonomialTransform,
    NormalForm,
    classical_params,
    trace_row,
    omega_circulant,
    construct_bgw,
    verify_bgw,
    apply_monomial_equivalence,
    normalize,
    reduce_group,
)
from designs.cwcode import (
    Code,
    CodeParams,
    ConstructionRequest,
    BoundReport,
    DistanceProfile,
    full_code,
    derived_code,
    distance_set,
    thm_main_params,
    verify_optimal,
)
from designs.arrays import (
    SymbolArray,
    ArrayCert,
    LatinSquare,
    append_zero_word,
    verify_oa,
    verify_ca,
    extract_msls,
    verify_latin,
    suitable,
    verify_msls,
)
from designs.pipeline import ConstructionPipeline, get_pipeline, reset_pipeline

__all__ = [
    'ConstructionError',
    'FieldError',
    'ParameterError',
    'ParameterMismatchError',
    'DataFormatError',
    'ArrayError',
    'ZERO',
    'Verdict',
    'FieldCtx',
    'FieldElem',
    'Poly',
    'build_field',
    'find_irreducible',
    'rel_trace',
    'dlog_in_subfield',
    'GMatrix',
    'BgwCert',
    'MonomialTransform',
    'NormalForm',
    'classical_params',
    'trace_row',
    'omega_circulant',
    'construct_bgw',
    'verify_bgw',
    'apply_monomial_equivalence',
    'normalize',
    'reduce_group',
    'Code',
    'CodeParams',
    'ConstructionRequest',
    'BoundReport',
    'DistanceProfile',
    'full_code',
    'derived_code',
    'distance_set',
    'thm_main_params',
    'verify_optimal',
    'SymbolArray',
    'ArrayCert',
    'LatinSquare',
    'append_zero_word',
    'verify_oa',
    'verify_ca',
    'extract_msls',
    'verify_latin',
    'suitable',
    'verify_msls',
    'ConstructionPipeline',
    'get_pipeline',
    'reset_pipeline',
]
