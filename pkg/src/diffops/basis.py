"""Homogeneous almost-commuting bases of differential operators.

For the generic normal-form operator

    L = d^n + u_2 d^{n-2} + ... + u_{n-1} d + u_n

an operator A almost commutes with L when ord([L, A]) <= n - 2.  The space
of such operators has a unique basis {P_m} of monic normal-form operators,
P_m homogeneous of weight m.  P_m is found entirely inside the operator
ring: bracket L against the ansatz

    P~_m = d^m + y_2 d^{m-2} + ... + y_m,

extract the coefficients of d^{n+m-3} down to d^{n-1} as equations on the
y's.  The system is triangular: the equation at d^{n+m-i} reads
n*y_{i-1}' + (terms in earlier y's), so each y is recovered by one
substitution and one closed-form integration.  Substituting the solution
into P~_m yields P_m together with the hierarchy polynomials H_{m,i}
defined by [P_m, L] = H_{m,0} + H_{m,1} d + ... + H_{m,n-2} d^{n-2}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ._ratio import Rational
from .integration import NotTotalDerivativeError, antiderivative
from .operators import DiffOperator, commutator
from .polynomials import DiffPolynomial, Y_FAMILY, u, y

_D = DiffOperator.d


def generic_L(n: int) -> DiffOperator:
    """The generic normal-form operator of order n over u_2..u_n."""
    if n < 2:
        raise ValueError("the operator order must be at least 2")
    coeffs = {n: DiffPolynomial.one()}
    for l in range(2, n + 1):
        coeffs[n - l] = u(l)
    return DiffOperator.from_dict(coeffs)


def generic_P(m: int) -> DiffOperator:
    """The order-m ansatz d^m + y_2 d^{m-2} + ... + y_m (P~_1 = d)."""
    if m < 1:
        raise ValueError("the ansatz order must be at least 1")
    coeffs = {m: DiffPolynomial.one()}
    for l in range(2, m + 1):
        coeffs[m - l] = y(l)
    return DiffOperator.from_dict(coeffs)


@dataclass(frozen=True)
class BracketSystem:
    """[L, P~_m] together with the equations that force almost commuting.

    ``equations[k]`` is the coefficient of d^{n+m-3-k}, i.e. the equation
    whose leading part is n * y_{k+2}'; there are m - 1 of them, covering
    the powers n+m-3 down to n-1.
    """

    n: int
    m: int
    full_bracket: DiffOperator
    equations: tuple


@dataclass(frozen=True)
class TriangularSolution:
    """The weighted solution: assignments y_i -> q_i in Q{U}, i = 2..m."""

    assignments: dict

    def __getitem__(self, index: int) -> DiffPolynomial:
        return self.assignments[index]

    def items(self):
        return self.assignments.items()


@dataclass(frozen=True)
class AlmostCommutingResult:
    """P_m plus the n-1 hierarchy polynomials H_i of [P_m, L] at d^i."""

    n: int
    m: int
    P: DiffOperator
    H: tuple


def _system_from_bracket(n: int, m: int, full: DiffOperator) -> BracketSystem:
    equations = tuple(
        full.coefficient_at(power) for power in range(n + m - 3, n - 2, -1)
    )
    return BracketSystem(n=n, m=m, full_bracket=full, equations=equations)


def bracket_system(n: int, m: int) -> BracketSystem:
    """Build [L, P~_m] and extract the triangular system."""
    if n < 2 or m < 2:
        raise ValueError("bracket systems need n >= 2 and m >= 2")
    full = commutator(generic_L(n), generic_P(m))
    return _system_from_bracket(n, m, full)


def bracket_recursive(n: int, max_m: int) -> list:
    """All brackets [L, P~_m] for m = 2..max_m, built incrementally.

    Uses [L, P~_{l+1}] = [L, P~_l] d + P~_l [L, d] + [L, y_{l+1}], so the
    incremental cost per level is one small product instead of a fresh
    full commutator.
    """
    if n < 2 or max_m < 2:
        raise ValueError("bracket recursion needs n >= 2 and max_m >= 2")
    L = generic_L(n)
    bracket_d = commutator(L, _D())
    brackets = []
    p_prev = _D()
    prev = bracket_d
    for l in range(1, max_m):
        y_next = DiffOperator.from_coeffs([y(l + 1)])
        nxt = prev.times_d() + p_prev * bracket_d + commutator(L, y_next)
        brackets.append(nxt)
        p_prev = p_prev.times_d() + y_next
        prev = nxt
    return brackets


def solve_triangular(
    system: BracketSystem,
    on_step: Callable[[int, DiffPolynomial, DiffPolynomial], None] | None = None,
) -> TriangularSolution:
    """The unique weighted solution of the bracket system.

    Equations are consumed in ascending order of the solved variable
    (y_2 first); each step substitutes the solution found so far, strips
    the n*y_i' head and integrates the remainder in closed form.  The
    remainder is guaranteed to be a total derivative; a failing
    integration therefore signals an internal inconsistency and surfaces
    as NotTotalDerivativeError with diagnostics.
    """
    n = system.n
    inv_n = Rational(1, n)
    assignments: dict = {}
    for offset, equation in enumerate(system.equations):
        index = offset + 2
        # substitute known q's; the pending y_index passes through unchanged
        partial = equation.evaluate({**assignments, index: y(index)})
        rest = partial - n * y(index, 1)
        if rest.has_family(Y_FAMILY):
            raise NotTotalDerivativeError(
                context=f"equation for y_{index} is not triangular"
            )
        try:
            integral = antiderivative(rest)
        except NotTotalDerivativeError as exc:
            raise NotTotalDerivativeError(
                exc.obstruction,
                context=(
                    f"triangular solve failed integrating the equation for "
                    f"y_{index} (n={system.n}, m={system.m})"
                ),
            ) from exc
        q_index = integral * (-inv_n)
        if on_step is not None:
            on_step(index, rest, q_index)
        assignments[index] = q_index
    return TriangularSolution(assignments)


def almost_commuting(n: int, m: int, cache=None) -> AlmostCommutingResult:
    """P_m and the hierarchy polynomials for the order-n generic operator.

    m = 1 short-circuits to P_1 = d.  When n divides m the computation
    degenerates gracefully: P_m = L^{m/n} and every H vanishes.
    """
    if n < 2:
        raise ValueError("the operator order must be at least 2")
    if m < 1:
        raise ValueError("the basis index must be at least 1")
    if cache is not None:
        hit = cache.get(n, m)
        if hit is not None:
            return hit
    if m == 1:
        full = commutator(generic_L(n), _D())
        result = AlmostCommutingResult(
            n=n,
            m=1,
            P=_D(),
            H=tuple(-full.coefficient_at(i) for i in range(n - 1)),
        )
    else:
        result = _result_from_bracket(n, m, bracket_system(n, m))
    if cache is not None:
        cache.put(n, m, result)
    return result


def _result_from_bracket(n: int, m: int, system: BracketSystem) -> AlmostCommutingResult:
    solution = solve_triangular(system)
    p_m = generic_P(m).evaluate(solution.assignments)
    hierarchy = tuple(
        -system.full_bracket.coefficient_at(i).evaluate(solution.assignments)
        for i in range(n - 1)
    )
    return AlmostCommutingResult(n=n, m=m, P=p_m, H=hierarchy)


def almost_commuting_basis(n: int, max_m: int, cache=None) -> list:
    """[P_1 .. P_max_m] with hierarchy polynomials, via recursive brackets."""
    if max_m < 1:
        raise ValueError("the basis bound must be at least 1")
    results = [almost_commuting(n, 1, cache=cache)]
    if max_m == 1:
        return results
    pending = [
        m for m in range(2, max_m + 1) if cache is None or cache.get(n, m) is None
    ]
    brackets = {}
    if pending:
        all_brackets = bracket_recursive(n, max(pending))
        brackets = {m: all_brackets[m - 2] for m in pending}
    for m in range(2, max_m + 1):
        if m in brackets:
            result = _result_from_bracket(n, m, _system_from_bracket(n, m, brackets[m]))
            if cache is not None:
                cache.put(n, m, result)
        else:
            result = almost_commuting(n, m, cache=cache)
        results.append(result)
    return results
