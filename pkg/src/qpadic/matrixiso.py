"""The corner isomorphism onto matrices over the algebra, and its closed form.

Conjugating by the partial isometries U^i S^h gives mutually orthogonal
corners that tile the algebra: the map

    psi_h(x)[i, j]  =  S*^h U^{-i} x U^j S^h          (0 <= i, j < p^h)

is a unital *-isomorphism onto p^h x p^h matrices over the algebra itself,
with inverse
x = sum_{i,j} U^i S^h M[i,j] S*^h U^{-j}.

For a single normal monomial U^a S^m S*^n U^d with h > max(m, n) and
|a|, |d| < p^h, the matrix psi_h(x) has a closed form: a sum of 0/1
scalar matrices tensored with a short list of operator tags,

    m > n:   U^g S^{m-n} for 0 <= g < p^{m-n}, plus S^{m-n} U and U* S^{m-n},
    m = n:   1, U, U*,
    m < n:   adjoints of the m > n tags.

decompose() computes those scalar matrices directly from the index
formulas (digit split a = p^m b + r, fold of the U-exponent
-i2 + b (+1) + j3 into a carry of +-1 on the tag), never by reading
entries off psi_h; psi() stays an independent cross-check.  Each scalar
matrix has operator norm at most ||x|| = 1, which the norm-bound checks
certify numerically through the window compression of qpadic.rep.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .algebra import (
    AlgebraContext,
    Element,
    Monomial,
    adjoint_monomial,
    mul_monomial,
)
from .errors import DimensionError, InternalConsistencyError, PreconditionError
from .rep import Window, default_window, op_norm_estimate, power_iteration_norm, truncated_matrix

__all__ = [
    "OpMatrix",
    "ScalarMatrix",
    "PsiDecomposition",
    "psi",
    "psi_inverse",
    "decompose",
    "check_norm_bounds",
    "corner_norm_check",
]

_F0 = Fraction(0)
_F1 = Fraction(1)


class OpMatrix:
    """Square matrix over the algebra, indexed 0..p^h-1, sparse over nonzero entries."""

    __slots__ = ("ctx", "h", "dim", "_entries")

    def __init__(self, ctx: AlgebraContext, h: int, entries: dict[tuple[int, int], Element] | None = None):
        if h < 0:
            raise DimensionError("h must be >= 0")
        self.ctx = ctx
        self.h = h
        self.dim = ctx.p**h
        self._entries: dict[tuple[int, int], Element] = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < self.dim and 0 <= c < self.dim):
                    raise DimensionError(f"entry ({r}, {c}) outside dim {self.dim}")
                if v:
                    self._entries[(r, c)] = v

    @classmethod
    def identity(cls, ctx: AlgebraContext, h: int) -> "OpMatrix":
        one = Element.one(ctx)
        return cls(ctx, h, {(i, i): one for i in range(ctx.p**h)})

    def entry(self, r: int, c: int) -> Element:
        return self._entries.get((r, c), Element.zero(self.ctx))

    def entries(self) -> dict[tuple[int, int], Element]:
        return dict(self._entries)

    def _check(self, other: "OpMatrix") -> None:
        if self.ctx.p != other.ctx.p or self.h != other.h:
            raise DimensionError(
                f"matrix shapes differ: (p={self.ctx.p}, h={self.h}) vs (p={other.ctx.p}, h={other.h})"
            )

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        self._check(other)
        acc = dict(self._entries)
        for k, v in other._entries.items():
            s = acc.get(k)
            acc[k] = v if s is None else s + v
        return OpMatrix(self.ctx, self.h, acc)

    def __sub__(self, other: "OpMatrix") -> "OpMatrix":
        self._check(other)
        acc = dict(self._entries)
        for k, v in other._entries.items():
            s = acc.get(k)
            acc[k] = -v if s is None else s - v
        return OpMatrix(self.ctx, self.h, acc)

    def __mul__(self, other: "OpMatrix") -> "OpMatrix":
        self._check(other)
        rows: dict[int, list[tuple[int, Element]]] = {}
        for (k, j), v in other._entries.items():
            rows.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], Element] = {}
        for (i, k), u in self._entries.items():
            for j, v in rows.get(k, ()):
                w = u * v
                if not w:
                    continue
                s = acc.get((i, j))
                acc[(i, j)] = w if s is None else s + w
        return OpMatrix(self.ctx, self.h, acc)

    def adjoint(self) -> "OpMatrix":
        return OpMatrix(
            self.ctx, self.h,
            {(c, r): v.adjoint() for (r, c), v in self._entries.items()},
        )

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self._entries.values())

    def equals(self, other: "OpMatrix") -> bool:
        self._check(other)
        keys = set(self._entries) | set(other._entries)
        return all(self.entry(*k).equals(other.entry(*k)) for k in keys)

    def __eq__(self, other) -> bool:
        if isinstance(other, OpMatrix):
            return self.equals(other)
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"OpMatrix(p={self.ctx.p}, h={self.h}, nnz={len(self._entries)})"


def psi(h: int, x: Element) -> OpMatrix:
    """The corner matrix of x: entry (i, j) = S*^h U^{-i} x U^j S^h, canonical."""
    if h < 1:
        raise PreconditionError("psi requires h >= 1")
    ctx = x.ctx
    dim = ctx.p**h
    terms = x.term_map()
    acc: dict[tuple[int, int], dict[Monomial, Fraction]] = {}
    for col in range(dim):
        right = Monomial(col, h, 0, 0)
        for t, c in terms.items():
            w = mul_monomial(ctx, t, right)
            if w is None:
                continue
            for row in range(dim):
                left = Monomial(0, 0, h, -row)
                z = mul_monomial(ctx, left, w)
                if z is None:
                    continue
                cell = acc.setdefault((row, col), {})
                s = cell.get(z, _F0) + c
                if s:
                    cell[z] = s
                else:
                    cell.pop(z, None)
    entries = {
        k: Element(ctx, cell).canonical() for k, cell in acc.items() if cell
    }
    return OpMatrix(ctx, h, entries)


def psi_inverse(h: int, M: OpMatrix) -> Element:
    """Reassemble sum_{i,j} U^i S^h M[i,j] S*^h U^{-j}."""
    if h != M.h:
        raise DimensionError(f"h={h} does not match matrix built at h={M.h}")
    ctx = M.ctx
    out = Element.zero(ctx)
    for (i, j), v in M.entries().items():
        left = Element.monomial(ctx, i, h, 0, 0)
        right = Element.monomial(ctx, 0, 0, h, -j)
        out = out + left * v * right
    return out


@dataclass(frozen=True)
class ScalarMatrix:
    """Dense square matrix of exact rationals (rows of tuples)."""

    rows: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_entries(cls, dim: int, entries: dict[tuple[int, int], Fraction | int]) -> "ScalarMatrix":
        data = [[_F0] * dim for _ in range(dim)]
        for (r, c), v in entries.items():
            data[r][c] = Fraction(v)
        return cls(tuple(tuple(row) for row in data))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, rc: tuple[int, int]) -> Fraction:
        return self.rows[rc[0]][rc[1]]

    def transpose(self) -> "ScalarMatrix":
        return ScalarMatrix(tuple(zip(*self.rows)))

    def scale(self, q: Fraction | int) -> "ScalarMatrix":
        q = Fraction(q)
        return ScalarMatrix(tuple(tuple(q * v for v in row) for row in self.rows))

    def to_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.rows])

    def nonzero(self) -> dict[tuple[int, int], Fraction]:
        return {
            (r, c): v
            for r, row in enumerate(self.rows)
            for c, v in enumerate(row)
            if v
        }


_CASE_GT, _CASE_EQ, _CASE_LT = "m>n", "m=n", "m<n"


@dataclass(frozen=True)
class PsiDecomposition:
    """psi_h(x) written as sum_g R_g (x) tag_g over the short tag list.

    g indexes the U-power carried by the tag: for m >= n the tag is
    U^g S^(m-n) with g in [-1, p^(m-n)] (g = p^(m-n) is S^(m-n) U written
    in normal form, g = -1 is U* S^(m-n)); for m < n the tags are the
    adjoints and the matrices the transposes.  subcase records which sign
    pattern of (a, d) = (x.i, x.j) drove the index formulas.
    """

    ctx: AlgebraContext
    h: int
    case: str
    d: int
    source: Monomial
    subcase: str
    terms: dict[int, ScalarMatrix]

    def tag_element(self, g: int) -> Element:
        base = Element.monomial(self.ctx, g, self.d, 0, 0)
        return base.adjoint() if self.case == _CASE_LT else base

    def tag_name(self, g: int) -> str:
        if self.d == 0:
            return {0: "1", 1: "U", -1: "U'"}[g]
        D = self.d
        if self.case == _CASE_LT:
            if g == 0:
                return f"S'^{D}"
            if g == -1:
                return f"S'^{D}*U"
            if g == self.ctx.p**D:
                return f"U'*S'^{D}"
            return f"S'^{D}*U^-{g}"
        if g == 0:
            return f"S^{D}"
        if g == -1:
            return f"U'*S^{D}"
        if g == self.ctx.p**D:
            return f"S^{D}*U"
        return f"U^{g}*S^{D}"

    def scaled(self, q: Fraction | int) -> "PsiDecomposition":
        return PsiDecomposition(
            self.ctx, self.h, self.case, self.d, self.source, self.subcase,
            {g: R.scale(q) for g, R in self.terms.items()},
        )

    def reassemble(self) -> OpMatrix:
        acc: dict[tuple[int, int], Element] = {}
        for g, R in self.terms.items():
            tag = self.tag_element(g)
            for (r, c), v in R.nonzero().items():
                piece = tag * v
                s = acc.get((r, c))
                acc[(r, c)] = piece if s is None else s + piece
        return OpMatrix(self.ctx, self.h, acc)


def _decompose_word(p: int, h: int, a: int, m: int, n: int, d: int):
    """Index formulas for the m >= n word U^a S^m S*^n U^d at matrix size p^h.

    Enumerates the triple sum (i2, j3, j4); the inner U-exponent
    b - i2 + j3 (+1 when d > 0) survives only when divisible by p^(h-m),
    and the quotient is a carry of -1, 0 or +1 onto the tag index g.
    Any entry the fold pushes outside the matrix (or lands twice) is an
    internal consistency failure, not a droppable term.
    """
    P1 = p ** (h - m)
    P2 = p ** (m - n)
    pm, pn, ph = p**m, p**n, p**h
    b, r = a // pm, a % pm
    if d <= 0:
        j1, shift = -d, 0
    else:
        j1, shift = pn - d, 1
    subcase = ("a>=0" if a >= 0 else "a<0") + ("," + ("d<=0" if d <= 0 else "d>0"))
    buckets: dict[int, dict[tuple[int, int], Fraction]] = {}
    for i2 in range(P1):
        row = r + i2 * pm
        base = b + shift - i2
        for j3 in range(P1):
            v = base + j3
            if v % P1:
                continue
            carry = v // P1
            if carry not in (-1, 0, 1):
                raise InternalConsistencyError(f"carry {carry} out of range")
            for j4 in range(P2):
                g = j4 + carry
                if not -1 <= g <= P2:
                    raise InternalConsistencyError(f"tag index {g} out of range")
                col = j1 + pn * (j3 + j4 * P1)
                if not (0 <= row < ph and 0 <= col < ph):
                    raise InternalConsistencyError(f"entry ({row}, {col}) escapes")
                bucket = buckets.setdefault(g, {})
                if (row, col) in bucket:
                    raise InternalConsistencyError(f"duplicate entry ({row}, {col})")
                bucket[(row, col)] = _F1
    return buckets, subcase


def decompose(h: int, x: Monomial, ctx: AlgebraContext) -> PsiDecomposition:
    """Closed-form psi_h(x) for a normal monomial; h > max(m, n) required."""
    p = ctx.p
    if h <= max(x.m, x.n):
        raise PreconditionError(f"need h > max(m, n) = {max(x.m, x.n)}, got {h}")
    ph = p**h
    if abs(x.i) >= ph or abs(x.j) >= ph:
        raise PreconditionError(f"U-exponents must have magnitude < p^h = {ph}")
    dim = ph
    if x.m >= x.n:
        buckets, subcase = _decompose_word(p, h, x.i, x.m, x.n, x.j)
        case = _CASE_GT if x.m > x.n else _CASE_EQ
        terms = {g: ScalarMatrix.from_entries(dim, b) for g, b in buckets.items()}
        return PsiDecomposition(ctx, h, case, x.m - x.n, x, subcase, terms)
    adjoint_raw = (-x.j, x.n, x.m, -x.i)
    buckets, subcase = _decompose_word(p, h, *adjoint_raw)
    terms = {
        g: ScalarMatrix.from_entries(dim, b).transpose() for g, b in buckets.items()
    }
    return PsiDecomposition(ctx, h, _CASE_LT, x.n - x.m, x, subcase, terms)


def check_norm_bounds(dec: PsiDecomposition, x: Monomial | Element,
                      w: Window | None = None) -> dict:
    """Certify ||R_g|| <= ||x|| for every scalar matrix in the decomposition.

    ||x|| is estimated from the window compression (exact for a single
    normal monomial: a partial isometry of norm 1); each ||R_g|| comes
    from power iteration on R^T R.  Slack 1e-6 absorbs float rounding.
    """
    w = w or default_window()
    ctx = dec.ctx
    xe = x if isinstance(x, Element) else Element(ctx, {x: _F1})
    est = op_norm_estimate(xe, w)
    rows = []
    for g in sorted(dec.terms):
        nr = power_iteration_norm(dec.terms[g].to_float(), w.tolerance, w.max_iter)
        rows.append({"tag": dec.tag_name(g), "norm": nr, "ok": nr <= est + 1e-6})
    return {
        "norm_x_estimate": est,
        "window": w.N,
        "terms": rows,
        "ok": all(r["ok"] for r in rows),
    }


def corner_norm_check(ctx: AlgebraContext, D: int, mats: list[ScalarMatrix],
                      w: Window | None = None) -> dict:
    """Witness inequalities for A = Q1 (x) S^D + Q2 (x) S^D U + Q3 (x) S^D U*
    + Q4 (x) U S^D + Q5 (x) U* S^D: every ||Q_i|| is a lower bound for ||A||.

    The five tags send e_1 to five distinct basis vectors (p^D, 2 p^D, 0,
    p^D + 1, p^D - 1), so pairing A against x (x) e_1 and x' (x) tag_i e_1
    isolates (Q_i x, x'); maximizing over unit x, x' gives ||Q_i|| <= ||A||.
    The check builds the window compression of A, power-iterates it, and
    verifies each ||Q_i|| (its own witness inner product at the top
    singular pair) stays below the estimate plus 1e-6.
    """
    if D < 1:
        raise PreconditionError("witness separation needs D >= 1")
    if len(mats) != 5:
        raise DimensionError("exactly five scalar matrices required")
    dims = {Q.dim for Q in mats}
    if len(dims) != 1:
        raise DimensionError("scalar matrices must share a dimension")
    w = w or default_window()
    p = ctx.p
    pD = p**D
    tags = [
        Element.monomial(ctx, 0, D, 0, 0),      # S^D
        Element.monomial(ctx, pD, D, 0, 0),     # S^D U
        Element.monomial(ctx, -pD, D, 0, 0),    # S^D U*
        Element.monomial(ctx, 1, D, 0, 0),      # U S^D
        Element.monomial(ctx, -1, D, 0, 0),     # U* S^D
    ]
    names = ["S^D", "S^D*U", "S^D*U'", "U*S^D", "U'*S^D"]
    tms = [truncated_matrix(t, w) for t in tags]
    bcols = set().union(*(tm.boundary_cols for tm in tms))
    brows = set().union(*(tm.boundary_rows for tm in tms))
    big = None
    for Q, tm in zip(mats, tms):
        tm.boundary_cols = bcols
        tm.boundary_rows = brows
        piece = sp.kron(sp.csr_matrix(Q.to_float()), tm.interior_csr(), format="csr")
        big = piece if big is None else big + piece
    # the 1e-6 slack below absorbs a 1e-7 relative stop; near-degenerate
    # spectra make tighter stops burn the full iteration budget for digits
    # the inequality cannot see
    est = power_iteration_norm(big, max(w.tolerance, 1e-7), w.max_iter)
    rows = []
    for name, Q in zip(names, mats):
        nq = power_iteration_norm(Q.to_float(), w.tolerance, w.max_iter)
        rows.append({"tag": name, "witness": nq, "ok": nq <= est + 1e-6})
    return {
        "norm_estimate": est,
        "window": w.N,
        "tags": rows,
        "ok": all(r["ok"] for r in rows),
    }
