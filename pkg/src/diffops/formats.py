"""Serialization and pretty-printing.

Canonical JSON term encoding:

    term       = {"coeff": "p/q", "monomial": [[letter, index, order, exp], ...]}
    polynomial = [term, ...]                       (canonical monomial order)
    operator   = {"order": k, "coefficients": [polynomial_0, ..., polynomial_k]}

Coefficients are decimal-free rational text; the letter is "u", "y" or
"c"; the index is an integer for u/y and an [m, j] pair for constants.
Round-tripping a canonical file is the identity.  The LaTeX printer uses
u_2', u_2'', u_2''', u_2^{(4)} derivative marks.
"""

from __future__ import annotations

import json

from ._ratio import parse_rational, rational_str
from .basis import AlmostCommutingResult
from .operators import DiffOperator
from .polynomials import (
    C_FAMILY,
    DiffPolynomial,
    FAMILY_LETTERS,
    VarId,
)

FORMAT_VERSION = 1

_LETTER_TO_FAMILY = {letter: fam for fam, letter in enumerate(FAMILY_LETTERS)}


# -- JSON ----------------------------------------------------------------


def poly_to_json(p: DiffPolynomial) -> list:
    out = []
    for mono, coeff in p.sorted_terms():
        encoded = []
        for vid, exp in mono:
            family, index, order = vid
            if family == C_FAMILY:
                index = [index[0], index[1]]
            encoded.append([FAMILY_LETTERS[family], index, order, exp])
        out.append({"coeff": rational_str(coeff), "monomial": encoded})
    return out


def poly_from_json(data: list) -> DiffPolynomial:
    terms = {}
    for term in data:
        mono = []
        for letter, index, order, exp in term["monomial"]:
            family = _LETTER_TO_FAMILY[letter]
            if family == C_FAMILY:
                index = (index[0], index[1])
            mono.append((VarId(family, index, order), exp))
        terms[tuple(sorted(mono))] = parse_rational(term["coeff"])
    return DiffPolynomial.from_dict(terms)


def operator_to_json(op: DiffOperator) -> dict:
    if op.is_zero():
        return {"order": None, "coefficients": []}
    return {
        "order": op.order,
        "coefficients": [
            poly_to_json(op.coefficient_at(i)) for i in range(op.order + 1)
        ],
    }


def operator_from_json(data: dict) -> DiffOperator:
    return DiffOperator.from_coeffs(
        poly_from_json(entry) for entry in data["coefficients"]
    )


def result_to_json(result: AlmostCommutingResult) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "n": result.n,
        "m": result.m,
        "P": operator_to_json(result.P),
        "H": [poly_to_json(h) for h in result.H],
    }


def result_from_json(data: dict) -> AlmostCommutingResult:
    return AlmostCommutingResult(
        n=data["n"],
        m=data["m"],
        P=operator_from_json(data["P"]),
        H=tuple(poly_from_json(h) for h in data["H"]),
    )


def canonical_json_bytes(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


# -- LaTeX ------------------------------------------------------------------


def _coeff_latex(coeff) -> str:
    num, den = coeff.numerator, coeff.denominator
    if den == 1:
        return str(num)
    sign = "-" if num < 0 else ""
    return f"{sign}\\frac{{{abs(num)}}}{{{den}}}"


def _var_latex(vid) -> str:
    family, index, order = vid
    if family == C_FAMILY:
        return f"c_{{{index[0]},{index[1]}}}"
    name = f"{FAMILY_LETTERS[family]}_{{{index}}}" if index >= 10 else f"{FAMILY_LETTERS[family]}_{index}"
    if order == 0:
        return name
    if order <= 3:
        return name + "'" * order
    return f"{name}^{{({order})}}"


def mono_latex(mono) -> str:
    if not mono:
        return "1"
    parts = []
    for vid, exp in mono:
        base = _var_latex(vid)
        if exp == 1:
            parts.append(base)
        elif vid[2] == 0:
            parts.append(f"{base}^{exp}")
        else:
            parts.append(f"\\left({base}\\right)^{exp}")
    return " ".join(parts)


def poly_latex(p: DiffPolynomial) -> str:
    if p.is_zero():
        return "0"
    chunks = []
    for mono, coeff in p.sorted_terms():
        neg = coeff < 0
        mag = -coeff if neg else coeff
        if not mono:
            body = _coeff_latex(mag)
        elif mag == 1:
            body = mono_latex(mono)
        else:
            body = f"{_coeff_latex(mag)}{mono_latex(mono)}"
        if not chunks:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(chunks)


def operator_latex(op: DiffOperator) -> str:
    if op.is_zero():
        return "0"
    parts = []
    for i in range(op.order, -1, -1):
        coeff = op.coefficient_at(i)
        if coeff.is_zero():
            continue
        dpart = "" if i == 0 else ("\\partial" if i == 1 else f"\\partial^{{{i}}}")
        if not dpart:
            body = poly_latex(coeff)
        elif coeff == DiffPolynomial.one():
            body = dpart
        elif len(coeff) == 1:
            body = f"{poly_latex(coeff)}{dpart}"
        else:
            body = f"\\left({poly_latex(coeff)}\\right){dpart}"
        parts.append(body)
    return " + ".join(parts)


# -- plain text ---------------------------------------------------------------


def poly_text(p: DiffPolynomial) -> str:
    return str(p)


def operator_text(op: DiffOperator) -> str:
    return str(op)


def render_poly(p: DiffPolynomial, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(poly_to_json(p), indent=2)
    if fmt == "latex":
        return poly_latex(p)
    if fmt == "text":
        return poly_text(p)
    raise ValueError(f"unknown format: {fmt}")


def render_operator(op: DiffOperator, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(operator_to_json(op), indent=2)
    if fmt == "latex":
        return operator_latex(op)
    if fmt == "text":
        return operator_text(op)
    raise ValueError(f"unknown format: {fmt}")
