"""Exact algebraic postconditions, preconditions, and invariants for
polynomial ODE systems, on a self-contained Groebner-basis substrate."""

__version__ = "0.1.0"

from .poly import (  # noqa: F401
    BlockElim,
    GrevLex,
    Lex,
    Monomial,
    Polynomial,
    Symbol,
    SymbolUniverse,
    monomials_up_to_degree,
)
from .groebner import (  # noqa: F401
    DivisionResult,
    Ideal,
    ResourceLimitError,
    buchberger,
    divide,
    eliminate_parameters,
    ideal_contains,
    ideal_equal,
    member,
    normal_form,
    reduce_basis,
)
from .linalg import (  # noqa: F401
    LinearForm,
    Subspace,
    refine,
    solve_homogeneous,
    subspace_equal,
)
from .dynamics import (  # noqa: F401
    Template,
    VectorField,
    complete_template,
    lie_derivative,
    lie_iterate,
    lie_template,
    linear_combination_template,
    result_template,
    template_remainder,
    zero_constraints,
)
from .algorithms import (  # noqa: F401
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    ModeError,
    PostResult,
    Precondition,
    PreResult,
    SafetyResult,
    check_invariant_ideal,
    check_safety,
    post,
    pre,
    weakest_precondition_via_post,
)
from .parser import ParseError, parse_polynomial  # noqa: F401
from .sysspec import SpecError, SystemSpec  # noqa: F401
