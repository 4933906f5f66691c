"""Workbench for set algebras with transposition-substitution operators
on finite sequence spaces: carriers, powerset algebras, a small term
language with equation/quasi-equation checkers, and executable versions
of the structural results (relativization homomorphisms, atom-wise
decomposition into small algebras, the sigma quasi-equation story, and
principal ultraproducts).
"""

from .algebra import (
    MAX_CARRIER_MEMBERS,
    MAX_SUBALGEBRA_ELEMS,
    Carrier,
    CarrierMismatch,
    Elem,
    ProductAlgebra,
    ProductElem,
    SizeCapExceeded,
    SmallAlgebra,
    atom,
    canonicalize_base,
    carrier_from_seqs,
    complement,
    elem_from_seqs,
    full_carrier,
    generate_subalgebra,
    is_permutable,
    join,
    make_product,
    meet,
    permutable_closure,
    permutable_subsets,
    relativize,
    subst,
)
from .seqspace import (
    DimensionMismatch,
    NotAPermutation,
    Perm,
    Seq,
    all_perms,
    all_seqs,
    compose_right,
    fmt_seq,
    identity_perm,
    is_constant,
    perm_compose,
    perm_from_images,
    perm_inverse,
    rank,
    transposition,
    unit_seq,
    unrank,
)
from .termlang import (
    DEFAULT_ASSIGNMENT_BUDGET,
    DEFAULT_SEED,
    BudgetExceeded,
    Equation,
    EvalError,
    Exhaustive,
    QuasiEquation,
    Random,
    TermSyntaxError,
    Verdict,
    check_equation,
    check_quasi,
    equation_violated,
    eval_term,
    parse_equation,
    parse_quasi,
    parse_term,
    print_equation,
    print_quasi,
    print_term,
    quasi_violated,
    sigma,
)
from .theorems import (
    DEFAULT_TRIALS,
    CounterexampleReport,
    DecompositionRecord,
    EscapeReport,
    HomReport,
    SeparationReport,
    SigmaSmallReport,
    UltraproductReport,
    backward_cycle,
    build_counterexample,
    decompose_small,
    forward_cycle,
    principal_ultraproduct,
    sigma_holds_small,
    unit_carrier,
    verify_h_escape,
    verify_relativization,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_CARRIER_MEMBERS",
    "MAX_SUBALGEBRA_ELEMS",
    "DEFAULT_ASSIGNMENT_BUDGET",
    "DEFAULT_SEED",
    "DEFAULT_TRIALS",
    "BudgetExceeded",
    "Carrier",
    "CarrierMismatch",
    "CounterexampleReport",
    "DecompositionRecord",
    "DimensionMismatch",
    "Elem",
    "Equation",
    "EscapeReport",
    "EvalError",
    "Exhaustive",
    "HomReport",
    "NotAPermutation",
    "Perm",
    "ProductAlgebra",
    "ProductElem",
    "QuasiEquation",
    "Random",
    "SeparationReport",
    "SigmaSmallReport",
    "SizeCapExceeded",
    "SmallAlgebra",
    "Seq",
    "TermSyntaxError",
    "UltraproductReport",
    "Verdict",
    "all_perms",
    "all_seqs",
    "atom",
    "backward_cycle",
    "build_counterexample",
    "canonicalize_base",
    "carrier_from_seqs",
    "check_equation",
    "check_quasi",
    "complement",
    "compose_right",
    "decompose_small",
    "elem_from_seqs",
    "equation_violated",
    "eval_term",
    "fmt_seq",
    "forward_cycle",
    "full_carrier",
    "generate_subalgebra",
    "identity_perm",
    "is_constant",
    "is_permutable",
    "join",
    "make_product",
    "meet",
    "parse_equation",
    "parse_quasi",
    "parse_term",
    "perm_compose",
    "perm_from_images",
    "perm_inverse",
    "permutable_closure",
    "permutable_subsets",
    "principal_ultraproduct",
    "print_equation",
    "print_quasi",
    "print_term",
    "quasi_violated",
    "rank",
    "relativize",
    "sigma",
    "sigma_holds_small",
    "subst",
    "transposition",
    "unit_carrier",
    "unit_seq",
    "unrank",
    "verify_h_escape",
    "verify_relativization",
]
