# Exact algebra core: scalars, words, noncommutative polynomials, linear algebra
from .scalars import Field, PrimeField, RationalField, Residue, Scalar, get_field
from .words import (
    EMPTY,
    Ordering,
    Word,
    contains_variable_at_most,
    count_words_up_to,
    deglex_cmp,
    deglex_key,
    enumerate_words,
    words_up_to,
)
from .poly import (
    LinearMap,
    NcPoly,
    apply_linear_map,
    homogeneous_part,
    linear_part,
    min_homogeneous_part,
    min_monomial,
    poly_add,
    poly_mul,
    poly_scale,
    substitute,
    truncate,
)
