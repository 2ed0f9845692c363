"""Differential polynomial ring: arithmetic, derivation, grading, evaluation."""

import itertools
import random

import pytest

from diffops._ratio import Rational
from diffops.polynomials import (
    DiffPolynomial,
    IncompleteSolutionError,
    NotHomogeneousError,
    VarId,
    c,
    homogeneous_monomials,
    mono_sort_key,
    u,
    u_id,
    y,
)
from helpers import random_homogeneous, random_poly

HALF = Rational(1, 2)


class TestArithmetic:
    def test_additive_inverse(self):
        assert (u(2) + (-1) * u(2)).is_zero()

    def test_square(self):
        assert u(2) * u(2) == u(2) ** 2

    def test_symmetric_average(self):
        left = HALF * (u(2, 1) + u(3)) + HALF * (u(2, 1) - u(3))
        assert left == u(2, 1)

    def test_scalar_and_constant_mixing(self):
        p = 3 * u(2) - u(2) - u(2) - u(2)
        assert p.is_zero()
        assert (u(2) + 1) - 1 == u(2)

    def test_ring_axioms_random(self):
        rng = random.Random(101)
        for _ in range(25):
            p = random_poly(rng)
            q = random_poly(rng)
            r = random_poly(rng)
            assert p + q == q + p
            assert (p + q) + r == p + (q + r)
            assert p * q == q * p
            assert (p * q) * r == p * (q * r)
            assert p * (q + r) == p * q + p * r
            assert p + DiffPolynomial.zero() == p
            assert (p - p).is_zero()

    def test_pow_matches_repeated_product(self):
        rng = random.Random(7)
        p = random_poly(rng)
        assert p ** 3 == p * p * p
        assert p ** 0 == DiffPolynomial.one()


class TestDerivation:
    def test_single_variable(self):
        assert u(2).derive() == u(2, 1)

    def test_leibniz_example(self):
        assert (u(2) * u(3)).derive() == u(2, 1) * u(3) + u(2) * u(3, 1)

    def test_constants_killed(self):
        assert c(2, 1).derive().is_zero()
        assert (c(4, 2) * u(2)).derive() == c(4, 2) * u(2, 1)

    def test_iterated(self):
        assert u(2).derive(3) == u(2, 3)
        assert u(2).derive(0) == u(2)

    def test_leibniz_random(self):
        rng = random.Random(23)
        for _ in range(25):
            p = random_poly(rng)
            q = random_poly(rng)
            assert (p * q).derive() == p.derive() * q + p * q.derive()


class TestWeight:
    def test_variable_weights(self):
        assert u(2, 2).weight() == 4
        assert (u(2) * u(3, 1)).weight() == 6

    def test_mixed_raises(self):
        with pytest.raises(NotHomogeneousError):
            (u(2) + u(3)).weight()
        assert not (u(2) + u(3)).is_homogeneous()

    def test_zero_weight_is_any(self):
        assert DiffPolynomial.zero().weight() is None
        assert DiffPolynomial.zero().is_homogeneous(17)

    def test_constants_weight_transparent(self):
        assert (c(5, 2) * u(2)).weight() == 2
        assert c(5, 2).weight() == 0

    def test_grading_random(self):
        rng = random.Random(31)
        for _ in range(25):
            r = rng.randint(2, 6)
            s = rng.randint(2, 6)
            p = random_homogeneous(rng, r, nonzero=True)
            q = random_homogeneous(rng, s, nonzero=True)
            assert (p * q).weight() == r + s
            assert p.derive().weight() == r + 1


class TestEvaluate:
    def test_bracket_equation_solution(self):
        equation = 3 * y(2, 1) - 2 * u(2, 1)
        assert equation.evaluate({2: Rational(2, 3) * u(2)}).is_zero()

    def test_derivatives_of_assignment(self):
        assert y(2, 2).evaluate({2: u(3)}) == u(3, 2)

    def test_identity_on_u(self):
        assert u(2).evaluate({}) == u(2)
        assert (u(2) * c(3, 1)).evaluate({2: u(2) ** 2}) == u(2) * c(3, 1)

    def test_incomplete_solution(self):
        with pytest.raises(IncompleteSolutionError):
            (y(2) + y(5)).evaluate({2: u(2)})

    def test_is_differential_homomorphism(self):
        rng = random.Random(47)
        for _ in range(15):
            p = random_poly(rng) + random_homogeneous(rng, 4) * y(2) + y(3, 1) * random_homogeneous(rng, 3)
            z = {2: random_poly(rng, max_weight=4), 3: random_poly(rng, max_weight=4)}
            assert p.derive().evaluate(z) == p.evaluate(z).derive()

    def test_products_of_y_powers(self):
        p = y(2) ** 2 * u(2)
        assert p.evaluate({2: u(3)}) == u(3) ** 2 * u(2)


def brute_force_weighted_monomials(weight, indices):
    """Independent oracle: enumerate by combinations with repetition."""
    variables = [
        u_id(l, k) for l in indices for k in range(0, weight - l + 1) if l <= weight
    ]
    found = set()
    max_degree = weight // 2
    for degree in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(variables, degree):
            if sum(v.weight() for v in combo) == weight:
                mono = {}
                for v in combo:
                    mono[v] = mono.get(v, 0) + 1
                found.add(tuple(sorted(mono.items())))
    return found


class TestHomogeneousMonomials:
    def test_weight_two(self):
        assert homogeneous_monomials(2, {2, 3}) == [((u_id(2), 1),)]

    def test_weight_three(self):
        monos = homogeneous_monomials(3, {2, 3})
        assert set(monos) == {((u_id(2, 1), 1),), ((u_id(3), 1),)}

    def test_weight_four(self):
        monos = homogeneous_monomials(4, {2, 3})
        expected = {
            ((u_id(2, 2), 1),),
            ((u_id(3, 1), 1),),
            ((u_id(2), 2),),
        }
        assert set(monos) == expected

    @pytest.mark.parametrize("weight", range(2, 9))
    def test_against_brute_force(self, weight):
        for indices in ({2}, {2, 3}, {2, 3, 4}):
            fast = homogeneous_monomials(weight, indices)
            assert len(fast) == len(set(fast))
            assert set(fast) == brute_force_weighted_monomials(weight, sorted(indices))
            assert fast == sorted(fast, key=mono_sort_key)

    def test_all_results_have_exact_weight(self):
        for mono in homogeneous_monomials(9, {2, 5}):
            assert DiffPolynomial({mono: Rational(1)}).weight() == 9


class TestCanonicalForm:
    def test_no_zero_coefficients_stored(self):
        p = u(2) - u(2) + u(3)
        assert len(p) == 1

    def test_repr_stability(self):
        p = Rational(2, 3) * u(2) + u(3, 1) ** 2 - c(3, 1) * u(2, 4)
        assert str(p) == str(p + DiffPolynomial.zero())

    def test_from_dict_normalizes(self):
        vid = u_id(2, 1)
        p = DiffPolynomial.from_dict({((vid, 1),): "2/4"})
        assert p == HALF * u(2, 1)

    def test_varid_ordering(self):
        assert u_id(2, 1) < u_id(2, 2) < u_id(3, 0)
        assert u_id(5, 9) < VarId(1, 2, 0)  # any u before any y
        assert VarId(1, 9, 4) < VarId(2, (2, 1), 0)  # any y before any c
