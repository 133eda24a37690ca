"""The canonical representation of the algebra on l2(Z): the exact oracle.

S sends e_k to e_{pk} and U sends e_k to e_{k+1}, so a monomial word
U^i S^m S*^n U^j acts by

    e_k  |->  e_{p^m (k+j)/p^n + i}    if p^n divides k + j,   else 0.

This holds for any exponent tuple, normalized or not, which is what makes
the representation an independent check on the rewrite engine: two
symbolic expressions are compared by acting on a window of basis vectors
with exact integer arithmetic.  Norm estimates compress the action to a
finite window; entries are kept as exact rationals and boundary
rows/columns (whose true image escapes the window) are flagged so the
power iteration runs on a certified compression, hence always a lower
bound on the true operator norm.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .algebra import AlgebraContext, Element, Monomial
from . import kernels

__all__ = [
    "RepVector",
    "Window",
    "default_window",
    "act_monomial",
    "act_word",
    "act_element",
    "basis_vector",
    "verify_relations",
    "TruncatedMatrix",
    "truncated_matrix",
    "op_norm_estimate",
    "power_iteration_norm",
]

RepVector = dict[int, Fraction]

DEFAULT_WINDOW_N = 2**12
DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_ITER = 10**4


@dataclass(frozen=True)
class Window:
    """Finite basis window e_{-N}..e_N plus power-iteration controls."""

    N: int = DEFAULT_WINDOW_N
    tolerance: float = DEFAULT_TOLERANCE
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("window half-width N must be >= 1")


def default_window(tolerance: float = DEFAULT_TOLERANCE) -> Window:
    """Window with N from QP_DEFAULT_WINDOW when set, else 2^12."""
    n = os.environ.get("QP_DEFAULT_WINDOW")
    return Window(N=int(n) if n else DEFAULT_WINDOW_N, tolerance=tolerance)


def act_word(p: int, i: int, m: int, n: int, j: int, k: int) -> int | None:
    """Image index of e_k under the word U^i S^m S*^n U^j, or None if killed."""
    t = k + j
    pn = p**n
    if t % pn:
        return None
    return p**m * (t // pn) + i


def act_monomial(ctx: AlgebraContext, t: Monomial, k: int) -> int | None:
    return act_word(ctx.p, t.i, t.m, t.n, t.j, k)


def basis_vector(k: int) -> RepVector:
    return {k: Fraction(1)}


def act_element(x: Element, vec: RepVector) -> RepVector:
    """Exact action of an element on a finitely supported l2(Z) vector."""
    p = x.ctx.p
    out: RepVector = {}
    for k, c in vec.items():
        for t, ct in x.term_map().items():
            img = act_word(p, t.i, t.m, t.n, t.j, k)
            if img is None:
                continue
            s = out.get(img, _F0) + c * ct
            if s:
                out[img] = s
            else:
                out.pop(img, None)
    return out


_F0 = Fraction(0)


# -- defining-relation sweeps -------------------------------------------------


def _word_vs_word(p, wa, wb, krange):
    """k values where two single words act differently (capped list)."""
    bad = kernels.count_mismatch(p, [wa], [wb], -krange, krange)
    if not bad:
        return []
    img_a, al_a = kernels.act_window(p, wa, -krange, krange)
    img_b, al_b = kernels.act_window(p, wb, -krange, krange)
    mask = (al_a != al_b) | (al_a & al_b & (img_a != img_b))
    return (np.nonzero(mask)[0][:100] - krange).tolist()


def _partition_of_unity(p, level, krange):
    """k values where sum_{l<p^level} U^l S^lev S*^lev U^{-l} e_k != e_k."""
    ks = np.arange(-krange, krange + 1, dtype=np.int64)
    onto = np.zeros(ks.shape[0], dtype=np.int64)
    stray = np.zeros(ks.shape[0], dtype=bool)
    for l in range(p**level):
        img, alive = kernels.act_window(p, (l, level, level, -l), -krange, krange)
        onto += (alive & (img == ks)).astype(np.int64)
        stray |= alive & (img != ks)
    mask = (onto != 1) | stray
    return (np.nonzero(mask)[0][:100] - krange).tolist()


def verify_relations(p: int, krange: int, delta_max_level: int = 3) -> list[dict]:
    """Check every defining (and derived) relation on e_k for |k| <= krange.

    Each report lists the relation, the checked range, and the offending k
    values (empty when the relation holds, as it must).  The delta
    relations S*^m U^{j-i} S^m = delta_ij are swept over all pairs
    0 <= i, j < p^m for m up to delta_max_level.
    """
    reports = []

    def report(name, violations):
        reports.append(
            {"relation": name, "checked_range": krange, "violations": violations}
        )

    report("U^p S = S U", _word_vs_word(p, (p, 1, 0, 0), (0, 1, 0, 1), krange))
    report("U S* = S* U^p", _word_vs_word(p, (1, 0, 1, 0), (0, 0, 1, p), krange))
    report("U* S* = S* U^-p", _word_vs_word(p, (-1, 0, 1, 0), (0, 0, 1, -p), krange))
    for level in (1, 2, 3):
        report(
            f"sum_l U^l S^{level} S*^{level} U^-l = 1",
            _partition_of_unity(p, level, krange),
        )
    for m in range(1, delta_max_level + 1):
        pm = p**m
        bad: list = []
        for i in range(pm):
            for j in range(pm):
                chain = [(j - i, m, 0, 0), (0, 0, m, 0)]
                expect = [(0, 0, 0, 0)] if i == j else None
                c = kernels.count_mismatch(p, chain, expect, -krange, krange)
                if c and len(bad) < 100:
                    bad.append({"i": i, "j": j, "count": c})
        report(f"S*^{m} U^(j-i) S^{m} = delta_ij (0 <= i,j < p^{m})", bad)
    return reports


# -- window truncation and norm estimation -----------------------------------


@dataclass
class TruncatedMatrix:
    """Exact compression of an element to the window, with boundary flags.

    entries maps (row, col) -> Fraction over indices -N..N.  A column k is
    boundary when some monomial maps e_k outside the window; a row r is
    boundary when the adjoint does (i.e. r receives mass from outside).
    Excluding both leaves a submatrix of the true operator, so its norm
    never exceeds the operator norm.
    """

    N: int
    entries: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    boundary_rows: set[int] = field(default_factory=set)
    boundary_cols: set[int] = field(default_factory=set)

    def interior_csr(self) -> sp.csr_matrix:
        dim = 2 * self.N + 1
        brows, bcols = self.boundary_rows, self.boundary_cols
        rows, cols, vals = [], [], []
        for (r, c), v in self.entries.items():
            if r in brows or c in bcols:
                continue
            rows.append(r + self.N)
            cols.append(c + self.N)
            vals.append(float(v))
        return sp.csr_matrix(
            (vals, (rows, cols)), shape=(dim, dim), dtype=np.float64
        )

    def dense(self) -> np.ndarray:
        dim = 2 * self.N + 1
        out = np.zeros((dim, dim))
        for (r, c), v in self.entries.items():
            out[r + self.N, c + self.N] = float(v)
        return out


def _mark_escapes(x: Element, N: int, out: set[int]) -> None:
    p = x.ctx.p
    for t, _ in x.term_map().items():
        try:
            img, alive = kernels.act_window(p, tuple(t), -N, N)
            esc = alive & (np.abs(img) > N)
            out.update((np.nonzero(esc)[0] - N).tolist())
        except ValueError:  # exponents beyond int64: exact per-index loop
            for k in range(-N, N + 1):
                v = act_word(p, t.i, t.m, t.n, t.j, k)
                if v is not None and abs(v) > N:
                    out.add(k)


def truncated_matrix(x: Element, w: Window) -> TruncatedMatrix:
    """Exact rational window compression of x with boundary flags."""
    p = x.ctx.p
    N = w.N
    tm = TruncatedMatrix(N=N)
    for t, c in x.term_map().items():
        try:
            img, alive = kernels.act_window(p, tuple(t), -N, N)
            idx = np.nonzero(alive & (np.abs(img) <= N))[0]
            for q in idx:
                key = (int(img[q]), int(q) - N)
                s = tm.entries.get(key, _F0) + c
                if s:
                    tm.entries[key] = s
                else:
                    tm.entries.pop(key, None)
        except ValueError:
            for k in range(-N, N + 1):
                v = act_word(p, t.i, t.m, t.n, t.j, k)
                if v is not None and abs(v) <= N:
                    key = (v, k)
                    s = tm.entries.get(key, _F0) + c
                    if s:
                        tm.entries[key] = s
                    else:
                        tm.entries.pop(key, None)
    _mark_escapes(x, N, tm.boundary_cols)
    _mark_escapes(x.adjoint(), N, tm.boundary_rows)
    return tm


def power_iteration_norm(A: sp.spmatrix | np.ndarray, tolerance: float = DEFAULT_TOLERANCE,
                         max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Largest singular value of A via power iteration on A^T A.

    Deterministic seeded start; stops when the Rayleigh quotient moves
    less than tolerance (relative) or after max_iter rounds.  Converges
    from below, so paired with a window compression the result is a
    certified lower bound on the operator norm.
    """
    if sp.issparse(A):
        if A.nnz == 0:
            return 0.0
    elif not np.any(A):
        return 0.0
    dim = A.shape[1]
    v = np.random.default_rng(9001).standard_normal(dim)
    v /= np.linalg.norm(v)
    lam_prev = 0.0
    At = A.T
    for _ in range(max_iter):
        u = A @ v
        lam = float(u @ u)
        if lam == 0.0:
            return 0.0
        w2 = At @ u
        v = w2 / np.linalg.norm(w2)
        if abs(lam - lam_prev) <= tolerance * max(lam, 1.0):
            lam_prev = lam
            break
        lam_prev = lam
    return float(np.sqrt(lam_prev))


def op_norm_estimate(x: Element, w: Window | None = None) -> float:
    """Certified lower estimate of ||pi(x)|| from the interior window compression.

    Monotone nondecreasing in N and bounded by sum |coefficients|; for
    partial isometries and their finite sums it reaches the exact norm at
    finite N.
    """
    w = w or default_window()
    tm = truncated_matrix(x, w)
    return power_iteration_norm(tm.interior_csr(), w.tolerance, w.max_iter)
