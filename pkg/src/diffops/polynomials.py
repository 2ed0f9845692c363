"""Differential polynomials with exact rational coefficients.

The ring is Q{u_2,...,u_n}{y_2,...,y_m}[c_...]: differential variables
u_l, y_l (l >= 2) with derivatives u_l^{(k)}, y_l^{(k)}, plus formal
constants c_{m,j} that the derivation kills.  A single derivation acts by
bumping derivative orders and the Leibniz rule.

Variables carry the grading w(u_l^{(k)}) = w(y_l^{(k)}) = l + k; constants
are weight-transparent.  Monomials are kept canonical: sorted by variable
id, no zero exponents; polynomials store no zero coefficients.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, NamedTuple

from ._ratio import ONE, Rational, ZERO

U_FAMILY = 0
Y_FAMILY = 1
C_FAMILY = 2

FAMILY_LETTERS = ("u", "y", "c")


class NotHomogeneousError(ValueError):
    """Raised when a weight is requested for a mixed-weight polynomial."""


class IncompleteSolutionError(KeyError):
    """Raised when evaluation meets a y-variable with no assigned value."""

    def __init__(self, index: int):
        super().__init__(index)
        self.index = index

    def __str__(self) -> str:
        return f"incomplete solution: no assignment for y_{self.index}"


class VarId(NamedTuple):
    """A differential variable u_l^{(k)}, y_l^{(k)} or constant c_{m,j}.

    Ordering is the canonical one used everywhere: family u < y < c,
    then index ascending, then derivative order ascending.  ``index`` is
    an int (>= 2) for the u/y families and an (m, j) pair for constants.
    """

    family: int
    index: object
    order: int

    def weight(self) -> int:
        if self.family == C_FAMILY:
            return 0
        return self.index + self.order

    def derived(self, times: int = 1) -> "VarId":
        if self.family == C_FAMILY:
            raise ValueError("constants have no derivatives")
        return VarId(self.family, self.index, self.order + times)

    def __str__(self) -> str:
        return _var_text(self)


def u_id(l: int, k: int = 0) -> VarId:
    if l < 2 or k < 0:
        raise ValueError(f"invalid u-variable u_{l}^({k})")
    return VarId(U_FAMILY, l, k)


def y_id(l: int, k: int = 0) -> VarId:
    if l < 2 or k < 0:
        raise ValueError(f"invalid y-variable y_{l}^({k})")
    return VarId(Y_FAMILY, l, k)


def c_id(m: int, j: int) -> VarId:
    return VarId(C_FAMILY, (m, j), 0)


# A monomial is a tuple of (VarId, exponent) pairs, sorted by VarId,
# exponents > 0.  The empty tuple is the constant monomial 1.
Mono = tuple


def _mono_mul(m1: Mono, m2: Mono) -> Mono:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            out.append((v1, e1 + e2))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def _mono_weight(mono: Mono) -> int:
    w = 0
    for vid, exp in mono:
        if vid[0] != C_FAMILY:
            w += (vid[1] + vid[2]) * exp
    return w


def _mono_degree(mono: Mono) -> int:
    return sum(exp for _, exp in mono)


def mono_sort_key(mono: Mono):
    """Graded by weight (descending), ties broken lexicographically."""
    return (-_mono_weight(mono), mono)


def _acc(out: dict, mono: Mono, coeff) -> None:
    prev = out.get(mono)
    if prev is None:
        out[mono] = coeff
    else:
        s = prev + coeff
        if s:
            out[mono] = s
        else:
            del out[mono]


def _mul_raw(a: dict, b: dict) -> dict:
    out: dict = {}
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mono_mul(ma, mb)
            c = ca * cb
            prev = get(m)
            if prev is None:
                out[m] = c
            else:
                out[m] = prev + c
    return {m: c for m, c in out.items() if c}


def _derive_raw(terms: dict) -> dict:
    out: dict = {}
    for mono, coeff in terms.items():
        for i in range(len(mono)):
            vid, exp = mono[i]
            if vid[0] == C_FAMILY:
                continue
            up = (vid[0], vid[1], vid[2] + 1)
            # replace one factor vid by its derivative; keep sorted order
            head = list(mono[:i])
            if exp > 1:
                head.append((vid, exp - 1))
            tail = mono[i + 1 :]
            if tail and tail[0][0] == up:
                head.append((up, tail[0][1] + 1))
                head.extend(tail[1:])
            else:
                head.append((up, 1))
                head.extend(tail)
            _acc(out, tuple(head), coeff * exp if exp != 1 else coeff)
    return out


class DiffPolynomial:
    """Sparse differential polynomial over exact rationals."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict | None = None):
        # trusted constructor: terms must be canonical (no zeros)
        self._terms = terms if terms is not None else {}

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls) -> "DiffPolynomial":
        return cls({})

    @classmethod
    def one(cls) -> "DiffPolynomial":
        return cls({(): ONE})

    @classmethod
    def constant(cls, value) -> "DiffPolynomial":
        c = Rational(value)
        return cls({(): c} if c else {})

    @classmethod
    def variable(cls, vid: VarId) -> "DiffPolynomial":
        return cls({((vid, 1),): ONE})

    @classmethod
    def from_dict(cls, terms: Mapping) -> "DiffPolynomial":
        out: dict = {}
        for mono, coeff in terms.items():
            c = Rational(coeff)
            if c:
                _acc(out, tuple(sorted(mono)), c)
        return cls(out)

    # -- queries ------------------------------------------------------

    def items(self) -> Iterator:
        return iter(self._terms.items())

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda t: mono_sort_key(t[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, mono: Mono):
        return self._terms.get(tuple(sorted(mono)), ZERO)

    def total_degree(self) -> int:
        if not self._terms:
            return 0
        return max(_mono_degree(m) for m in self._terms)

    def variables(self) -> set:
        out = set()
        for mono in self._terms:
            for vid, _ in mono:
                out.add(VarId(*vid))
        return out

    def u_indices(self) -> set:
        return {
            vid[1]
            for mono in self._terms
            for vid, _ in mono
            if vid[0] == U_FAMILY
        }

    def has_family(self, family: int) -> bool:
        return any(
            vid[0] == family for mono in self._terms for vid, _ in mono
        )

    def weight(self) -> int | None:
        """Common weight of all monomials; None for the zero polynomial.

        Constants c_{m,j} are weight-transparent.  Raises
        NotHomogeneousError when monomial weights differ.
        """
        if not self._terms:
            return None
        it = iter(self._terms)
        w = _mono_weight(next(it))
        for mono in it:
            if _mono_weight(mono) != w:
                raise NotHomogeneousError(f"mixed weights in {self!r}")
        return w

    def is_homogeneous(self, weight: int | None = None) -> bool:
        try:
            w = self.weight()
        except NotHomogeneousError:
            return False
        return w is None or weight is None or w == weight

    # -- ring operations ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, DiffPolynomial):
            return self._terms == other._terms
        if isinstance(other, (int, type(ONE))):
            return self._terms == DiffPolynomial.constant(other)._terms
        return NotImplemented

    def __add__(self, other) -> "DiffPolynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            _acc(out, mono, coeff)
        return DiffPolynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "DiffPolynomial":
        return DiffPolynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "DiffPolynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            _acc(out, mono, -coeff)
        return DiffPolynomial(out)

    def __rsub__(self, other) -> "DiffPolynomial":
        return (-self).__add__(other)

    def __mul__(self, other) -> "DiffPolynomial":
        if isinstance(other, DiffPolynomial):
            return DiffPolynomial(_mul_raw(self._terms, other._terms))
        try:
            c = Rational(other)
        except (TypeError, ValueError):
            return NotImplemented
        if not c:
            return DiffPolynomial()
        return DiffPolynomial({m: v * c for m, v in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "DiffPolynomial":
        c = Rational(scalar)
        return DiffPolynomial({m: v / c for m, v in self._terms.items()})

    def __pow__(self, exponent: int) -> "DiffPolynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = DiffPolynomial.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- differential structure ----------------------------------------

    def derive(self, times: int = 1) -> "DiffPolynomial":
        if times < 0:
            raise ValueError("derivative count must be non-negative")
        terms = self._terms
        for _ in range(times):
            terms = _derive_raw(terms)
        return self if terms is self._terms else DiffPolynomial(terms)

    def evaluate(self, assignments: Mapping) -> "DiffPolynomial":
        """Differential substitution y_l^{(k)} -> derive(assignments[l], k).

        u- and c-variables pass through unchanged.  ``assignments`` maps
        the integer index l of each y-variable to a DiffPolynomial; a
        triangular solution object is accepted as well.
        """
        assignments = getattr(assignments, "assignments", assignments)
        if not self.has_family(Y_FAMILY):
            return self
        cache: dict = {}

        def replacement(l: int, k: int) -> dict:
            got = cache.get((l, k))
            if got is None:
                base = assignments.get(l)
                if base is None:
                    raise IncompleteSolutionError(l)
                got = base.derive(k)._terms
                cache[(l, k)] = got
            return got

        out: dict = {}
        for mono, coeff in self._terms.items():
            kept = []
            ys = []
            for vid, exp in mono:
                if vid[0] == Y_FAMILY:
                    ys.append((vid, exp))
                else:
                    kept.append((vid, exp))
            if not ys:
                _acc(out, mono, coeff)
                continue
            prod = {tuple(kept): coeff}
            for vid, exp in ys:
                q = replacement(vid[1], vid[2])
                for _ in range(exp):
                    prod = _mul_raw(prod, q)
            for m, c in prod.items():
                _acc(out, m, c)
        return DiffPolynomial(out)

    # -- rendering ------------------------------------------------------

    def __repr__(self) -> str:
        return f"DiffPolynomial({render_text(self)})"

    def __str__(self) -> str:
        return render_text(self)


def _coerce(value) -> "DiffPolynomial":
    if isinstance(value, DiffPolynomial):
        return value
    try:
        return DiffPolynomial.constant(value)
    except (TypeError, ValueError):
        return NotImplemented


# -- variable atoms ----------------------------------------------------


def u(l: int, k: int = 0) -> DiffPolynomial:
    """The polynomial u_l^{(k)}."""
    return DiffPolynomial.variable(u_id(l, k))


def y(l: int, k: int = 0) -> DiffPolynomial:
    """The polynomial y_l^{(k)}."""
    return DiffPolynomial.variable(y_id(l, k))


def c(m: int, j: int) -> DiffPolynomial:
    """The formal constant c_{m,j}."""
    return DiffPolynomial.variable(c_id(m, j))


# -- weighted monomial enumeration --------------------------------------


def homogeneous_monomials(weight: int, indices: Iterable[int]) -> list:
    """All monomials in {u_l^{(k)} : l in indices} of exact weight.

    Complete and duplicate-free; every u-variable has weight >= 2, so the
    list is finite.  Returned in the canonical monomial order.
    """
    if weight < 0:
        raise ValueError("weight must be non-negative")
    if weight == 0:
        return [()]
    inds = sorted(set(indices))
    if any(l < 2 for l in inds):
        raise ValueError("u-variable indices start at 2")
    variables = [
        (U_FAMILY, l, k) for l in inds for k in range(weight - l + 1) if l <= weight
    ]
    variables.sort()
    out: list = []
    acc: list = []

    def extend(pos: int, remaining: int) -> None:
        if remaining == 0:
            out.append(tuple(acc))
            return
        if pos == len(variables):
            return
        vid = variables[pos]
        extend(pos + 1, remaining)
        w = vid[1] + vid[2]
        e = 1
        while e * w <= remaining:
            acc.append((vid, e))
            extend(pos + 1, remaining - e * w)
            acc.pop()
            e += 1

    extend(0, weight)
    out.sort(key=mono_sort_key)
    return out


# -- plain-text rendering ------------------------------------------------


def _var_text(vid) -> str:
    fam, index, order = vid
    if fam == C_FAMILY:
        return f"c[{index[0]},{index[1]}]"
    name = f"{FAMILY_LETTERS[fam]}{index}"
    if order == 0:
        return name
    if order <= 3:
        return name + "'" * order
    return f"{name}^({order})"


def mono_text(mono: Mono) -> str:
    if not mono:
        return "1"
    parts = []
    for vid, exp in mono:
        base = _var_text(vid)
        parts.append(base if exp == 1 else f"{base}^{exp}")
    return "*".join(parts)


def render_text(p: DiffPolynomial) -> str:
    if p.is_zero():
        return "0"
    chunks = []
    for mono, coeff in p.sorted_terms():
        neg = coeff < 0
        mag = -coeff if neg else coeff
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono_text(mono)
        else:
            body = f"{mag}*{mono_text(mono)}"
        if not chunks:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(chunks)
