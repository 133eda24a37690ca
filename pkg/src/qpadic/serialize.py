"""JSON interchange for elements, corner matrices, and decompositions.

Exponents i, j and rational parts are decimal strings so arbitrary
precision survives every JSON parser untouched; m, n stay plain ints.
Term order in element payloads is the canonical sort (m - n, n, i, j).
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import AlgebraContext, Element, Monomial, is_normal, monomial_sort_key
from .errors import DimensionError, PreconditionError
from .matrixiso import OpMatrix, PsiDecomposition, ScalarMatrix

__all__ = [
    "rational_str",
    "parse_rational",
    "element_to_json",
    "element_from_json",
    "opmatrix_to_json",
    "opmatrix_from_json",
    "decomposition_to_json",
]


def rational_str(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def element_to_json(x: Element) -> dict:
    terms = []
    for t, c in sorted(x.term_map().items(), key=lambda tc: monomial_sort_key(tc[0])):
        terms.append(
            {
                "i": str(t.i),
                "m": t.m,
                "n": t.n,
                "j": str(t.j),
                "num": str(c.numerator),
                "den": str(c.denominator),
            }
        )
    return {"p": x.ctx.p, "terms": terms}


def element_from_json(d: dict, ctx: AlgebraContext | None = None) -> Element:
    p = int(d["p"])
    if ctx is None:
        ctx = AlgebraContext(p)
    elif ctx.p != p:
        raise PreconditionError(f"payload is at p={p}, context at p={ctx.p}")
    acc: dict[Monomial, Fraction] = {}
    for row in d["terms"]:
        t = Monomial(int(row["i"]), int(row["m"]), int(row["n"]), int(row["j"]))
        if not is_normal(ctx, t):
            raise PreconditionError(f"term {tuple(t)} is not in normal form at p={p}")
        c = Fraction(int(row["num"]), int(row["den"]))
        s = acc.get(t, Fraction(0)) + c
        if s:
            acc[t] = s
        else:
            acc.pop(t, None)
    return Element(ctx, acc)


def opmatrix_to_json(M: OpMatrix) -> dict:
    entries = [
        [element_to_json(M.entry(r, c)) for c in range(M.dim)] for r in range(M.dim)
    ]
    return {"h": M.h, "p": M.ctx.p, "entries": entries}


def opmatrix_from_json(d: dict, ctx: AlgebraContext | None = None) -> OpMatrix:
    p = int(d["p"])
    if ctx is None:
        ctx = AlgebraContext(p)
    elif ctx.p != p:
        raise PreconditionError(f"payload is at p={p}, context at p={ctx.p}")
    h = int(d["h"])
    rows = d["entries"]
    dim = ctx.p**h
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise DimensionError(f"entries must form a {dim} x {dim} grid")
    entries = {}
    for r, row in enumerate(rows):
        for c, cell in enumerate(row):
            el = element_from_json(cell, ctx)
            if el:
                entries[(r, c)] = el
    return OpMatrix(ctx, h, entries)


def _matrix_rows(R: ScalarMatrix) -> list[list[str]]:
    return [[rational_str(v) for v in row] for row in R.rows]


def decomposition_to_json(dec: PsiDecomposition) -> dict:
    terms = []
    for g in sorted(dec.terms):
        terms.append(
            {
                "g": g,
                "tag": dec.tag_name(g),
                "matrix": _matrix_rows(dec.terms[g]),
            }
        )
    return {
        "p": dec.ctx.p,
        "h": dec.h,
        "case": dec.case,
        "d": dec.d,
        "subcase": dec.subcase,
        "terms": terms,
    }
