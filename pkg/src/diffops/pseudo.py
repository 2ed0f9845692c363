"""Truncated pseudo-differential operators.

Laurent-style operators sum_{i <= top} a_i d^i with finitely many retained
coefficients (powers top down to ``low``).  Negative powers commute with
coefficients through the expansion

    d^i r = sum_{s >= 0} C(i, s) r^{(s)} d^{i-s}

with generalized binomial coefficients, which for i = -1 reproduces
d^{-1} r = r d^{-1} - r' d^{-2} + r'' d^{-3} - ...

Every product is truncated at a caller-chosen depth; depth bookkeeping
guarantees that each retained coefficient of a truncated product equals
the corresponding coefficient of the untruncated product, or the
multiplication refuses to proceed.
"""

from __future__ import annotations

from typing import Mapping

from ._ratio import ONE, Rational
from .operators import DiffOperator, _mul_into, join_signed
from .polynomials import DiffPolynomial, NotHomogeneousError, _derive_raw

_ZERO_POLY = DiffPolynomial.zero()
_ONE_POLY = DiffPolynomial.one()


class InsufficientDepthError(ValueError):
    """The inputs do not carry enough tail depth for an exact truncation."""


class TruncatedPDO:
    """A pseudo-differential operator retained on powers [low, top].

    ``exact_tail`` records whether coefficients below ``low`` are known to
    be exactly zero (False means they were discarded by truncation and are
    unknown).
    """

    __slots__ = ("_top", "_low", "_coeffs", "_exact_tail")

    def __init__(
        self,
        coeffs: Mapping[int, DiffPolynomial],
        top: int,
        low: int,
        exact_tail: bool = False,
    ):
        if low > top:
            raise ValueError("low power exceeds top power")
        self._coeffs = {p: c for p, c in coeffs.items() if not c.is_zero()}
        if any(p < low or p > top for p in self._coeffs):
            raise ValueError("coefficient outside the retained range")
        self._top = top
        self._low = low
        self._exact_tail = exact_tail

    # -- construction ------------------------------------------------------

    @classmethod
    def from_operator(cls, op: DiffOperator) -> "TruncatedPDO":
        if op.is_zero():
            return cls({}, top=0, low=0, exact_tail=True)
        coeffs = {
            i: op.coefficient_at(i)
            for i in range(op.order + 1)
            if not op.coefficient_at(i).is_zero()
        }
        return cls(coeffs, top=op.order, low=0, exact_tail=True)

    # -- queries ------------------------------------------------------------

    @property
    def top(self) -> int:
        return self._top

    @property
    def low(self) -> int:
        return self._low

    @property
    def depth(self) -> int:
        return max(0, -self._low)

    @property
    def exact_tail(self) -> bool:
        return self._exact_tail

    @property
    def truncated(self) -> bool:
        return not self._exact_tail

    def coefficient_at(self, power: int) -> DiffPolynomial:
        if power > self._top:
            return _ZERO_POLY
        if power < self._low and not self._exact_tail:
            raise InsufficientDepthError(
                f"coefficient of d^{power} was discarded (retained down to d^{self._low})"
            )
        return self._coeffs.get(power, _ZERO_POLY)

    def leading_coefficient(self) -> DiffPolynomial:
        if not self._coeffs:
            raise ValueError("zero operator has no leading coefficient")
        return self._coeffs[max(self._coeffs)]

    @property
    def order(self) -> int:
        if not self._coeffs:
            raise ValueError("zero operator has no order")
        return max(self._coeffs)

    def weight(self) -> int | None:
        """Weight r such that the coefficient of d^i has weight r - i."""
        r = None
        for i, coeff in self._coeffs.items():
            w = coeff.weight() + i
            if r is None:
                r = w
            elif w != r:
                raise NotHomogeneousError("pseudo-differential operator not homogeneous")
        return r

    def agrees_with(self, other: "TruncatedPDO", low: int) -> bool:
        """Coefficient-wise equality on powers >= low."""
        top = max(self._top, other._top)
        return all(
            self.coefficient_at(p) == other.coefficient_at(p)
            for p in range(low, top + 1)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedPDO):
            return NotImplemented
        return (
            self._coeffs == other._coeffs
            and self._top == other._top
            and self._low == other._low
            and self._exact_tail == other._exact_tail
        )

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "TruncatedPDO") -> "TruncatedPDO":
        if not isinstance(other, TruncatedPDO):
            return NotImplemented
        low = max(self._low, other._low)
        if self._exact_tail and other._exact_tail:
            low = min(self._low, other._low)
        exact = self._exact_tail and other._exact_tail
        out: dict = {}
        for p in set(self._coeffs) | set(other._coeffs):
            if p < low:
                continue
            out[p] = self._coeffs.get(p, _ZERO_POLY) + other._coeffs.get(p, _ZERO_POLY)
        return TruncatedPDO(out, top=max(self._top, other._top), low=low, exact_tail=exact)

    def __neg__(self) -> "TruncatedPDO":
        return TruncatedPDO(
            {p: -c for p, c in self._coeffs.items()},
            top=self._top,
            low=self._low,
            exact_tail=self._exact_tail,
        )

    def __sub__(self, other: "TruncatedPDO") -> "TruncatedPDO":
        if not isinstance(other, TruncatedPDO):
            return NotImplemented
        return self + (-other)

    def mul_keep_low(self, other: "TruncatedPDO", keep_low: int) -> "TruncatedPDO":
        """Product truncated at ``keep_low``; retained coefficients exact.

        Raises InsufficientDepthError when a discarded tail of either
        factor could contribute at or above ``keep_low``.
        """
        if not self._exact_tail and keep_low < self._low + other._top:
            raise InsufficientDepthError(
                f"left factor retained to d^{self._low}: product coefficients below "
                f"d^{self._low + other._top} are not exact (requested d^{keep_low})"
            )
        if not other._exact_tail and keep_low < self._top + other._low:
            raise InsufficientDepthError(
                f"right factor retained to d^{other._low}: product coefficients below "
                f"d^{self._top + other._low} are not exact (requested d^{keep_low})"
            )
        out: dict = {}
        for j, bj in other._coeffs.items():
            derivs = [bj._terms]
            for i, ai in self._coeffs.items():
                smax = i + j - keep_low
                if smax < 0:
                    continue
                ai_terms = ai._terms
                coef = ONE
                for s in range(smax + 1):
                    if s:
                        coef = coef * (i - s + 1) / s
                        if not coef:
                            break
                    while len(derivs) <= s:
                        derivs.append(_derive_raw(derivs[-1]))
                    dst = out.setdefault(i + j - s, {})
                    _mul_into(dst, ai_terms, derivs[s], coef)
        top = self._top + other._top
        # Negative left powers expand to infinite tails against non-constant
        # coefficients, so the product tail is known-zero only when the left
        # factor is purely differential, or the right coefficients are all
        # constants.
        exact = False
        if self._exact_tail and other._exact_tail:
            if self._low >= 0:
                exact = keep_low <= other._low
            elif keep_low <= self._low + other._low:
                exact = all(c.derive().is_zero() for c in other._coeffs.values())
        coeffs = {
            p: DiffPolynomial({m: c for m, c in terms.items() if c})
            for p, terms in out.items()
        }
        return TruncatedPDO(coeffs, top=top, low=min(keep_low, top), exact_tail=exact)

    def mul(self, other: "TruncatedPDO", keep_depth: int) -> "TruncatedPDO":
        if keep_depth < 0:
            raise ValueError("keep_depth must be non-negative")
        return self.mul_keep_low(other, -keep_depth)

    def power(self, exponent: int, tail_depth: int = 0) -> "TruncatedPDO":
        """exponent-th power with per-product depth bookkeeping.

        The result is exact on powers >= -tail_depth; each intermediate
        product keeps just enough extra depth for that.  For a truncated
        factor of top 1 (an n-th root) the factor must carry depth at
        least tail_depth + exponent - 1.
        """
        if exponent < 1:
            raise ValueError("exponent must be positive")
        acc = self
        for j in range(2, exponent + 1):
            acc = acc.mul_keep_low(self, -(tail_depth + exponent - j))
        return acc

    def positive_part(self) -> DiffOperator:
        """The nonnegative-power part as a differential operator."""
        if self._low > 0 and not self._exact_tail:
            raise InsufficientDepthError(
                "positive part not fully retained"
            )
        return DiffOperator.from_dict(
            {p: c for p, c in self._coeffs.items() if p >= 0}
        )

    # -- rendering ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"TruncatedPDO({self})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for p in sorted(self._coeffs, reverse=True):
            coeff = self._coeffs[p]
            if p == 0:
                body = str(coeff)
            else:
                dpart = "D" if p == 1 else f"D^{p}"
                if coeff == _ONE_POLY:
                    body = dpart
                elif len(coeff) == 1:
                    body = f"{coeff}*{dpart}"
                else:
                    body = f"({coeff})*{dpart}"
            parts.append(body)
        tail = "" if self._exact_tail else f" + O(D^{self._low - 1})"
        return join_signed(parts) + tail


def pdo_mul(a: TruncatedPDO, b: TruncatedPDO, keep_depth: int) -> TruncatedPDO:
    """Product of truncated pseudo-differential operators."""
    return a.mul(b, keep_depth)


def pdo_power(q: TruncatedPDO, exponent: int, tail_depth: int = 0) -> TruncatedPDO:
    return q.power(exponent, tail_depth)


def positive_part(a: TruncatedPDO) -> DiffOperator:
    return a.positive_part()


def nth_root(op: DiffOperator, depth: int) -> TruncatedPDO:
    """The monic n-th root Q = d + q_{-1} d^{-1} + ... of a normal-form L.

    Coefficients are found by matching Q^n against L: the coefficient
    equation at d^{n-1-t} is linear in q_{-t} with constant factor n, so
    the system is triangular and solved by direct recursion.  Q is again
    in normal form (zero d^0 term) and each q_{-t} is homogeneous of
    weight t + 1.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    n = op.order
    if not isinstance(n, int) or n < 2:
        raise ValueError("operator order must be at least 2")
    if not op.is_normal_form():
        raise ValueError("operator must be monic and in normal form")
    inv_n = Rational(1, n)
    found: dict = {1: _ONE_POLY}
    for t in range(1, depth + 1):
        target = n - 1 - t
        known = TruncatedPDO(found, top=1, low=1 - t, exact_tail=True)
        acc = known
        for factor in range(2, n + 1):
            acc = acc.mul_keep_low(known, target - (n - factor))
        mismatch = op.coefficient_at(target) - acc.coefficient_at(target)
        q_t = mismatch * inv_n
        if not q_t.is_zero():
            found[-t] = q_t
    return TruncatedPDO(found, top=1, low=-depth, exact_tail=False)
