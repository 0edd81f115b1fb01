"""Numbers as states of qukit strings.

Basis kets carry a sign, a base, a lattice position and a digit string;
their value is exact.  States are superpositions of kets, and arithmetic
relations, operations, base changes and gauge transformations act on them.
"""

from .arithmetic import (
    ADD,
    DIV,
    MUL,
    SUB,
    OpKind,
    apply_op,
    apply_op_on,
    div_accuracy,
    quotient_base,
    unify_bases,
)
from .composite import (
    CompositeBasisState,
    CompositeGaugeElement,
    apply_composite_gauge,
    beta_decode,
    beta_encode,
    composite_arithmetic,
    from_composite,
    to_composite,
    unary_phase,
    unary_value,
)
from .errors import OutOfDomain, ParseError, QukitError
from .numeral import (
    BasisState,
    NumberType,
    canonicalize,
    digits_of,
    factorize,
    format_literal,
    make_basis_state,
    pad_equivalent,
    parse_literal,
    radical,
    representable_in_base,
    value,
)
from .states import (
    MixedResult,
    ProductState,
    State,
    apply_projector,
    inner,
    prob_equal,
    prob_equal_mixtures,
    prob_leq,
    superpose,
    trace_out_inputs,
)
from .transforms import (
    GaugeFrame,
    apply_gauge,
    base_change,
    base_change_domain,
    base_increment,
    check_commutation,
    conjugated_base_change,
    gauged_op,
    translate,
)

__version__ = "0.1.0"

__all__ = [
    "ADD",
    "DIV",
    "MUL",
    "SUB",
    "OpKind",
    "apply_op",
    "apply_op_on",
    "div_accuracy",
    "quotient_base",
    "unify_bases",
    "CompositeBasisState",
    "CompositeGaugeElement",
    "apply_composite_gauge",
    "beta_decode",
    "beta_encode",
    "composite_arithmetic",
    "from_composite",
    "to_composite",
    "unary_phase",
    "unary_value",
    "OutOfDomain",
    "ParseError",
    "QukitError",
    "BasisState",
    "NumberType",
    "canonicalize",
    "digits_of",
    "factorize",
    "format_literal",
    "make_basis_state",
    "pad_equivalent",
    "parse_literal",
    "radical",
    "representable_in_base",
    "value",
    "MixedResult",
    "ProductState",
    "State",
    "apply_projector",
    "inner",
    "prob_equal",
    "prob_equal_mixtures",
    "prob_leq",
    "superpose",
    "trace_out_inputs",
    "GaugeFrame",
    "apply_gauge",
    "base_change",
    "base_change_domain",
    "base_increment",
    "check_commutation",
    "conjugated_base_change",
    "gauged_op",
    "translate",
]
