"""Shared generators for randomized property tests (always seeded)."""

from __future__ import annotations

import random

from diffops._ratio import Rational
from diffops.operators import DiffOperator
from diffops.polynomials import DiffPolynomial, homogeneous_monomials


def rand_rational(rng: random.Random, lo: int = -9, hi: int = 9) -> Rational:
    return Rational(rng.randint(lo, hi), rng.randint(1, 6))


def random_homogeneous(
    rng: random.Random,
    weight: int,
    indices=(2, 3),
    max_terms: int = 4,
    nonzero: bool = False,
) -> DiffPolynomial:
    monos = homogeneous_monomials(weight, indices)
    if not monos:
        return DiffPolynomial.zero()
    count = min(len(monos), rng.randint(1, max_terms))
    terms = {}
    for mono in rng.sample(monos, k=count):
        coeff = rand_rational(rng)
        if coeff:
            terms[mono] = coeff
    p = DiffPolynomial(terms)
    if nonzero and p.is_zero():
        mono = rng.choice(monos)
        return DiffPolynomial({mono: Rational(rng.randint(1, 9))})
    return p


def random_poly(
    rng: random.Random,
    indices=(2, 3),
    min_weight: int = 2,
    max_weight: int = 7,
    max_terms: int = 3,
) -> DiffPolynomial:
    total = DiffPolynomial.zero()
    for w in range(min_weight, max_weight + 1):
        if rng.random() < 0.6:
            total = total + random_homogeneous(rng, w, indices, max_terms)
    return total


def random_normal_form(
    rng: random.Random, order: int, indices=(2, 3)
) -> DiffOperator:
    """Monic operator with zero subleading term and weight-homogeneous
    coefficients (weight of the d^i coefficient is order - i)."""
    coeffs = {order: DiffPolynomial.one()}
    for i in range(0, max(order - 1, 0)):
        if rng.random() < 0.85:
            poly = random_homogeneous(rng, order - i, indices)
            if poly:
                coeffs[i] = poly
    return DiffOperator.from_dict(coeffs)


def random_operator(rng: random.Random, max_order: int = 4, indices=(2, 3)) -> DiffOperator:
    order = rng.randint(0, max_order)
    coeffs = {}
    for i in range(order + 1):
        if i == order or rng.random() < 0.7:
            poly = random_poly(rng, indices, max_weight=5)
            if poly:
                coeffs[i] = poly
    if order not in coeffs or coeffs[order].is_zero():
        coeffs[order] = DiffPolynomial.one()
    return DiffOperator.from_dict(coeffs)


def flip_u_sign(p: DiffPolynomial) -> DiffPolynomial:
    """The substitution u_l^{(k)} -> -u_l^{(k)} on every variable."""
    terms = {}
    for mono, coeff in p.items():
        degree = sum(exp for _, exp in mono)
        terms[mono] = coeff if degree % 2 == 0 else -coeff
    return DiffPolynomial(terms)
