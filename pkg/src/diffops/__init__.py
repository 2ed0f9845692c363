"""Exact computation of almost-commuting bases of ordinary differential
operators and the Gelfand-Dickey hierarchy polynomials, with an
independent truncated pseudo-differential oracle."""

from .basis import (
    AlmostCommutingResult,
    BracketSystem,
    TriangularSolution,
    almost_commuting,
    almost_commuting_basis,
    bracket_recursive,
    bracket_system,
    generic_L,
    generic_P,
    solve_triangular,
)
from .cache import ResultCache
from .hierarchy import (
    FlowEquation,
    RecursionOperator,
    gd_equations,
    kdv_recursion_operator,
    kdv_sequence,
    stationary_equations,
)
from .integration import (
    Decomposition,
    NotTotalDerivativeError,
    antiderivative,
    antiderivative_by_ansatz,
    decompose,
)
from .operators import DiffOperator, commutator
from .polynomials import (
    DiffPolynomial,
    IncompleteSolutionError,
    NotHomogeneousError,
    VarId,
    c,
    homogeneous_monomials,
    u,
    y,
)
from .pseudo import (
    InsufficientDepthError,
    TruncatedPDO,
    nth_root,
    pdo_mul,
    pdo_power,
    positive_part,
)

__version__ = "0.1.0"

__all__ = [
    "AlmostCommutingResult",
    "BracketSystem",
    "Decomposition",
    "DiffOperator",
    "DiffPolynomial",
    "FlowEquation",
    "IncompleteSolutionError",
    "InsufficientDepthError",
    "NotHomogeneousError",
    "NotTotalDerivativeError",
    "RecursionOperator",
    "ResultCache",
    "TriangularSolution",
    "TruncatedPDO",
    "VarId",
    "almost_commuting",
    "almost_commuting_basis",
    "antiderivative",
    "antiderivative_by_ansatz",
    "bracket_recursive",
    "bracket_system",
    "c",
    "commutator",
    "decompose",
    "gd_equations",
    "generic_L",
    "generic_P",
    "homogeneous_monomials",
    "kdv_recursion_operator",
    "kdv_sequence",
    "nth_root",
    "pdo_mul",
    "pdo_power",
    "positive_part",
    "solve_triangular",
    "stationary_equations",
    "u",
    "y",
]
