"""Ordinary differential operators over differential polynomials.

Elements of R[d] where R is the differential-polynomial ring: finite sums
sum_i a_i d^i with composition as multiplication, governed by the rule
d r = r d + r'.  Powers of d against a coefficient are expanded binomially:
d^k r = sum_j C(k,j) r^{(j)} d^{k-j}.

Coefficients are dense in the d-power index (orders stay small here);
sparsity lives inside the coefficients.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Mapping, Sequence

from ._ratio import Rational
from .polynomials import (
    DiffPolynomial,
    NotHomogeneousError,
    _acc,
    _derive_raw,
    _mono_mul,
)

NEG_INFINITY = float("-inf")

_ZERO_POLY = DiffPolynomial.zero()
_ONE_POLY = DiffPolynomial.one()


def _mul_into(dst: dict, a: dict, b: dict, scale) -> None:
    """dst += scale * a * b on raw term dicts."""
    for ma, ca in a.items():
        cs = ca * scale
        for mb, cb in b.items():
            _acc(dst, _mono_mul(ma, mb), cs * cb)


class DiffOperator:
    """A differential operator sum_i coeffs[i] * d^i."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Sequence[DiffPolynomial] = ()):
        # trusted: trailing coefficient nonzero unless the operator is zero
        self._coeffs = tuple(coeffs)

    # -- construction --------------------------------------------------

    @classmethod
    def zero(cls) -> "DiffOperator":
        return cls(())

    @classmethod
    def one(cls) -> "DiffOperator":
        return cls((_ONE_POLY,))

    @classmethod
    def d(cls, power: int = 1) -> "DiffOperator":
        if power < 0:
            raise ValueError("negative powers of d are not operators")
        return cls((_ZERO_POLY,) * power + (_ONE_POLY,))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable) -> "DiffOperator":
        polys = [_as_poly(c) for c in coeffs]
        while polys and polys[-1].is_zero():
            polys.pop()
        return cls(tuple(polys))

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, DiffPolynomial]) -> "DiffOperator":
        if not coeffs:
            return cls(())
        top = max(coeffs)
        polys = [_ZERO_POLY] * (top + 1)
        for power, poly in coeffs.items():
            if power < 0:
                raise ValueError("negative power in differential operator")
            polys[power] = _as_poly(poly)
        return cls.from_coeffs(polys)

    # -- queries ---------------------------------------------------------

    @property
    def order(self):
        """Order of the operator; -inf for the zero operator."""
        return len(self._coeffs) - 1 if self._coeffs else NEG_INFINITY

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def coefficient_at(self, power: int) -> DiffPolynomial:
        if 0 <= power < len(self._coeffs):
            return self._coeffs[power]
        return _ZERO_POLY

    def coefficients(self) -> tuple:
        return self._coeffs

    def leading_coefficient(self) -> DiffPolynomial:
        if not self._coeffs:
            raise ValueError("the zero operator has no leading coefficient")
        return self._coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self._coeffs) and self._coeffs[-1] == _ONE_POLY

    def is_normal_form(self) -> bool:
        """Monic with zero coefficient in degree order-1."""
        if not self.is_monic():
            return False
        if len(self._coeffs) < 2:
            return True
        return self._coeffs[-2].is_zero()

    def weight(self) -> int | None:
        """Weight r such that the coefficient of d^i has weight r - i.

        None for the zero operator; NotHomogeneousError when no single r
        works.
        """
        if not self._coeffs:
            return None
        r = None
        for i, coeff in enumerate(self._coeffs):
            if coeff.is_zero():
                continue
            w = coeff.weight() + i
            if r is None:
                r = w
            elif w != r:
                raise NotHomogeneousError(f"operator not weight-homogeneous: {self!r}")
        return r

    def is_homogeneous(self, weight: int | None = None) -> bool:
        try:
            w = self.weight()
        except NotHomogeneousError:
            return False
        return w is None or weight is None or w == weight

    def monomials_total(self) -> int:
        """Total monomial count across all coefficients."""
        return sum(len(c) for c in self._coeffs)

    # -- ring operations ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __add__(self, other) -> "DiffOperator":
        if not isinstance(other, DiffOperator):
            return NotImplemented
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, coeff in enumerate(b):
            out[i] = out[i] + coeff
        return DiffOperator.from_coeffs(out)

    def __sub__(self, other) -> "DiffOperator":
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "DiffOperator":
        return DiffOperator(tuple(-c for c in self._coeffs))

    def scale(self, scalar) -> "DiffOperator":
        cc = Rational(scalar)
        if not cc:
            return DiffOperator.zero()
        return DiffOperator(tuple(c * cc for c in self._coeffs))

    def times_d(self, power: int = 1) -> "DiffOperator":
        """Right-multiply by d^power (a pure coefficient shift)."""
        if not self._coeffs:
            return self
        return DiffOperator((_ZERO_POLY,) * power + self._coeffs)

    def __mul__(self, other) -> "DiffOperator":
        if not isinstance(other, DiffOperator):
            return NotImplemented
        if not self._coeffs or not other._coeffs:
            return DiffOperator.zero()
        a, b = self._coeffs, other._coeffs
        out = [dict() for _ in range(len(a) + len(b) - 1)]
        for j, bj in enumerate(b):
            if bj.is_zero():
                continue
            derivs = [bj._terms]
            for i, ai in enumerate(a):
                if ai.is_zero():
                    continue
                for s in range(i + 1):
                    while len(derivs) <= s:
                        derivs.append(_derive_raw(derivs[-1]))
                    _mul_into(out[i + j - s], ai._terms, derivs[s], comb(i, s))
        return DiffOperator.from_coeffs(
            DiffPolynomial({m: c for m, c in terms.items() if c}) for terms in out
        )

    def __pow__(self, exponent: int) -> "DiffOperator":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = DiffOperator.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def commutator(self, other: "DiffOperator") -> "DiffOperator":
        return self * other - other * self

    def apply(self, f: DiffPolynomial) -> DiffPolynomial:
        """Act on a differential polynomial: sum_i a_i * f^{(i)}."""
        out = DiffPolynomial.zero()
        df = f
        for i, coeff in enumerate(self._coeffs):
            if i:
                df = df.derive()
            if not coeff.is_zero():
                out = out + coeff * df
        return out

    def evaluate(self, assignments: Mapping) -> "DiffOperator":
        """Coefficient-wise differential substitution of y-variables."""
        return DiffOperator.from_coeffs(
            c.evaluate(assignments) for c in self._coeffs
        )

    # -- rendering -----------------------------------------------------------

    def __repr__(self) -> str:
        return f"DiffOperator({self})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for i in range(len(self._coeffs) - 1, -1, -1):
            coeff = self._coeffs[i]
            if coeff.is_zero():
                continue
            dpart = "" if i == 0 else ("D" if i == 1 else f"D^{i}")
            if not dpart:
                body = str(coeff)
            elif coeff == _ONE_POLY:
                body = dpart
            elif len(coeff) == 1:
                body = f"{coeff}*{dpart}"
            else:
                body = f"({coeff})*{dpart}"
            parts.append(body)
        return join_signed(parts)


def _as_poly(value) -> DiffPolynomial:
    if isinstance(value, DiffPolynomial):
        return value
    return DiffPolynomial.constant(value)


def join_signed(parts: Sequence[str]) -> str:
    """Join rendered summands, folding leading minus signs into the glue."""
    out = []
    for part in parts:
        if not out:
            out.append(part)
        elif part.startswith("-"):
            out.append(f"- {part[1:]}")
        else:
            out.append(f"+ {part}")
    return " ".join(out)


def commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    """[a, b] = ab - ba."""
    return a.commutator(b)
