"""Exact symbolic and numeric computation in the p-adic ring C*-algebra.

The algebra on a unitary U and an isometry S with U^p S = S U and
sum_{l<p} U^l S S* U^{-l} = 1, together with:

- normal forms, products, adjoints, canonical equality (qpadic.algebra),
- the faithful action on l2(Z) used as an independent oracle, plus
  certified operator-norm lower bounds (qpadic.rep),
- the corner-matrix isomorphism onto p^h x p^h matrices and its closed
  form on monomials (qpadic.matrixiso),
- conditional expectations, quasi-bases, the Watatani index, and
  constructive winding preimages (qpadic.watatani),
- separated-set entropy estimation for z -> z^k and the p-adic odometer
  (qpadic.dynamics),
- an expression grammar and a `qp` command-line driver (qpadic.parser,
  qpadic.cli).

Hot inner loops dispatch to a compiled extension when it is available
and to a numpy fallback otherwise; see qpadic.kernels.BACKEND.
"""

from .algebra import (
    AlgebraContext,
    Element,
    Monomial,
    adjoint_monomial,
    canonicalize,
    chi,
    cuntz_generator,
    equals,
    expand_level,
    gauge_degree,
    is_gauge_invariant,
    is_normal,
    monomial_sort_key,
    mul_monomial,
    normalize_monomial,
    residue_map_surjective,
)
from .dynamics import (
    CircleMapSpec,
    OdometerSpec,
    additive_order,
    entropy_estimate,
    entropy_report,
    odometer_entropy_estimate,
    odometer_orbit,
    separated_count,
    separated_counts,
)
from .errors import (
    BadTarget,
    ContextMismatch,
    DimensionError,
    ExprSyntaxError,
    GridTooCoarse,
    InsufficientData,
    InternalConsistencyError,
    NegativeSPower,
    NotCoprime,
    NotInDomain,
    NotInImage,
    PreconditionError,
    QpError,
    RangeError,
    ZeroWinding,
)
from .kernels import BACKEND
from .matrixiso import (
    OpMatrix,
    PsiDecomposition,
    ScalarMatrix,
    check_norm_bounds,
    corner_norm_check,
    decompose,
    psi,
    psi_inverse,
)
from .parser import parse, render
from .rep import (
    Window,
    act_element,
    act_monomial,
    act_word,
    basis_vector,
    default_window,
    op_norm_estimate,
    power_iteration_norm,
    truncated_matrix,
    verify_relations,
)
from .serialize import (
    decomposition_to_json,
    element_from_json,
    element_to_json,
    opmatrix_from_json,
    opmatrix_to_json,
    rational_str,
)
from .watatani import (
    ExpectationSpec,
    QuasiBasis,
    bezout_lift,
    chi_preimage,
    expectation,
    expectation_by_averaging,
    index_report,
    quasi_basis,
    relative_commutant_probe,
    verify_quasi_basis,
    watatani_index,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraContext",
    "Element",
    "Monomial",
    "adjoint_monomial",
    "canonicalize",
    "chi",
    "cuntz_generator",
    "equals",
    "expand_level",
    "gauge_degree",
    "is_gauge_invariant",
    "is_normal",
    "monomial_sort_key",
    "mul_monomial",
    "normalize_monomial",
    "residue_map_surjective",
    "CircleMapSpec",
    "OdometerSpec",
    "additive_order",
    "entropy_estimate",
    "entropy_report",
    "odometer_entropy_estimate",
    "odometer_orbit",
    "separated_count",
    "separated_counts",
    "BadTarget",
    "ContextMismatch",
    "DimensionError",
    "ExprSyntaxError",
    "GridTooCoarse",
    "InsufficientData",
    "InternalConsistencyError",
    "NegativeSPower",
    "NotCoprime",
    "NotInDomain",
    "NotInImage",
    "PreconditionError",
    "QpError",
    "RangeError",
    "ZeroWinding",
    "BACKEND",
    "OpMatrix",
    "PsiDecomposition",
    "ScalarMatrix",
    "check_norm_bounds",
    "corner_norm_check",
    "decompose",
    "psi",
    "psi_inverse",
    "parse",
    "render",
    "Window",
    "act_element",
    "act_monomial",
    "act_word",
    "basis_vector",
    "default_window",
    "op_norm_estimate",
    "power_iteration_norm",
    "truncated_matrix",
    "verify_relations",
    "decomposition_to_json",
    "element_from_json",
    "element_to_json",
    "opmatrix_from_json",
    "opmatrix_to_json",
    "rational_str",
    "ExpectationSpec",
    "QuasiBasis",
    "bezout_lift",
    "chi_preimage",
    "expectation",
    "expectation_by_averaging",
    "index_report",
    "quasi_basis",
    "relative_commutant_probe",
    "verify_quasi_basis",
    "watatani_index",
    "__version__",
]
