"""Exact symbolic arithmetic in the p-adic ring C*-algebra.

The algebra is the universal C*-algebra generated by a unitary U and an
isometry S subject to

    U^p S = S U           and           sum_{l=0}^{p-1} U^l S S* U^{-l} = 1.

Taking adjoints gives U S* = S* U^p and U* S* = S* U^{-p}, and iterating
the unit decomposition gives sum_{j=0}^{p^k - 1} U^j S^k S*^k U^{-j} = 1
for every k >= 1.  Products of generators therefore reduce to the
spanning monomials

    U^i S^m S*^n U^j        (i, j in Z;  m, n >= 0),

and every monomial has a unique normal form once the redundant U-power is
folded through the S-block:

    m >= n:  0 <= j < p^n   (m = n = 0 forces j = 0),
    m <  n:  0 <= i < p^m.

Monomials at a fixed (m, n) with these constraints are linearly
independent, but across levels they are not (the unit decomposition
rewrites level n as level n+1), so equality of general elements is
decided by expanding each fixed-degree part to a common level
(``canonicalize``).  All arithmetic is exact: exponents are Python ints,
coefficients are fractions.Fraction.  Everything here is immutable and
pure; the canonical representation on l2(Z) (see qpadic.rep) is the
independent oracle for all of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import (
    BadTarget,
    ContextMismatch,
    NotCoprime,
    RangeError,
    ZeroWinding,
)

__all__ = [
    "AlgebraContext",
    "Monomial",
    "Element",
    "normalize_monomial",
    "mul_monomial",
    "adjoint_monomial",
    "chi_monomial",
    "expand_level",
    "canonicalize",
    "equals",
    "chi",
    "gauge_degree",
    "is_gauge_invariant",
    "residue_map_surjective",
    "cuntz_generator",
    "monomial_sort_key",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class AlgebraContext:
    """Fixes the prime p; all exponent folding happens modulo powers of p."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p must be a prime >= 2, got {self.p}")


class Monomial(NamedTuple):
    """Exponent tuple of U^i S^m S*^n U^j.  Construct via normalize_monomial."""

    i: int
    m: int
    n: int
    j: int


def monomial_sort_key(t: Monomial) -> tuple[int, int, int, int]:
    """Deterministic term order: by gauge degree, then level, then U-powers."""
    return (t.m - t.n, t.n, t.i, t.j)


def normalize_monomial(ctx: AlgebraContext, i: int, m: int, n: int, j: int) -> Monomial:
    """Fold the redundant U-power through the S-block.

    For m >= n the relation S^m U^a = U^{a p^m} S^m pulls multiples of p^n
    out of j and deposits them on the left scaled by p^m; for m < n the
    mirror image pulls multiples of p^m out of i.  The result satisfies
    the half-open range constraints in the module docstring.
    """
    if m < 0 or n < 0:
        raise ValueError("S-exponents must be nonnegative")
    p = ctx.p
    if m >= n:
        a, b = divmod(j, p**n)
        return Monomial(i + p**m * a, m, n, b)
    a, b = divmod(i, p**m)
    return Monomial(b, m, n, j + p**n * a)


def is_normal(ctx: AlgebraContext, t: Monomial) -> bool:
    """Check the normal-form range constraint for ctx.p."""
    if t.m < 0 or t.n < 0:
        return False
    if t.m >= t.n:
        return 0 <= t.j < ctx.p**t.n
    return 0 <= t.i < ctx.p**t.m


def mul_monomial(ctx: AlgebraContext, x: Monomial, y: Monomial) -> Monomial | None:
    """Product of two normal monomials: a normal monomial or None (= 0).

    The middle block S*^{x.n} U^{x.j + y.i} S^{y.m} vanishes unless
    p^q | (x.j + y.i) with q = min(x.n, y.m); otherwise the shared power
    of S contracts and the quotient c shifts whichever side survives.
    """
    p = ctx.p
    t = x.j + y.i
    q = min(x.n, y.m)
    pq = p**q
    if t % pq:
        return None
    c = t // pq
    if x.n <= y.m:
        return normalize_monomial(
            ctx, x.i + p**x.m * c, x.m + y.m - q, x.n + y.n - q, y.j
        )
    return normalize_monomial(
        ctx, x.i, x.m, x.n + y.n - y.m, p**y.n * c + y.j
    )


def adjoint_monomial(ctx: AlgebraContext, x: Monomial) -> Monomial:
    """(U^i S^m S*^n U^j)* = U^{-j} S^n S*^m U^{-i}, renormalized."""
    return normalize_monomial(ctx, -x.j, x.n, x.m, -x.i)


def chi_monomial(ctx: AlgebraContext, k: int, x: Monomial) -> Monomial:
    """Winding endomorphism on a monomial: scale both U-exponents by k."""
    _check_winding(ctx, k)
    return normalize_monomial(ctx, k * x.i, x.m, x.n, k * x.j)


def _check_winding(ctx: AlgebraContext, k: int) -> None:
    if k == 0:
        raise ZeroWinding("k = 0 does not define a winding endomorphism")
    if math.gcd(k, ctx.p) != 1:
        raise NotCoprime(f"gcd(k, p) must be 1: k={k}, p={ctx.p}")


def gauge_degree(t: Monomial) -> int:
    """Degree under the gauge circle action: m - n."""
    return t.m - t.n


def _expand_terms(ctx: AlgebraContext, x: Monomial, target: int) -> list[Monomial]:
    """Rewrite x at S*-level target >= x.n via the unit decomposition.

    Inserting 1 = sum_{l < p^D} U^l S^D S*^D U^{-l} between the S- and
    S*-blocks (D = target - x.n) and folding U-powers through gives

        x = sum_l  U^{x.i + l p^{x.m}} S^{x.m+D} S*^{x.n+D} U^{x.j - l p^{x.n}}.
    """
    p = ctx.p
    delta = target - x.n
    if delta < 0:
        raise BadTarget(f"target level {target} below current level {x.n}")
    if delta == 0:
        return [x]
    pm, pn = p**x.m, p**x.n
    return [
        normalize_monomial(ctx, x.i + l * pm, x.m + delta, x.n + delta, x.j - l * pn)
        for l in range(p**delta)
    ]


def _coerce_coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class Element:
    """Finite rational combination of normal monomials over one context.

    Immutable by convention: every operation returns a new Element, and
    the term map never stores an explicit zero.  Mathematical equality
    (==) canonicalizes the difference, so structurally distinct term maps
    that rewrite to each other compare equal.
    """

    __slots__ = ("ctx", "_terms")

    def __init__(self, ctx: AlgebraContext, terms: dict[Monomial, Fraction] | None = None):
        self.ctx = ctx
        self._terms: dict[Monomial, Fraction] = dict(terms) if terms else {}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, ctx: AlgebraContext) -> "Element":
        return cls(ctx)

    @classmethod
    def one(cls, ctx: AlgebraContext) -> "Element":
        return cls.monomial(ctx, 0, 0, 0, 0)

    @classmethod
    def monomial(cls, ctx: AlgebraContext, i: int, m: int, n: int, j: int, coeff=1) -> "Element":
        c = _coerce_coeff(coeff)
        if not c:
            return cls(ctx)
        return cls(ctx, {normalize_monomial(ctx, i, m, n, j): c})

    @classmethod
    def from_terms(cls, ctx: AlgebraContext, terms: Iterable[tuple[Monomial, Fraction]]) -> "Element":
        acc: dict[Monomial, Fraction] = {}
        for t, c in terms:
            c = _coerce_coeff(c)
            if not c:
                continue
            s = acc.get(t, _ZERO) + c
            if s:
                acc[t] = s
            else:
                acc.pop(t, None)
        return cls(ctx, acc)

    # -- views -----------------------------------------------------------

    def terms(self) -> list[tuple[Monomial, Fraction]]:
        """Term list in the canonical (m-n, n, i, j) order."""
        return sorted(self._terms.items(), key=lambda kv: monomial_sort_key(kv[0]))

    def term_map(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- ring operations --------------------------------------------------

    def _check_ctx(self, other: "Element") -> None:
        if self.ctx.p != other.ctx.p:
            raise ContextMismatch(f"p={self.ctx.p} vs p={other.ctx.p}")

    def __add__(self, other) -> "Element":
        other = self._coerce(other)
        self._check_ctx(other)
        acc = dict(self._terms)
        for t, c in other._terms.items():
            s = acc.get(t, _ZERO) + c
            if s:
                acc[t] = s
            else:
                acc.pop(t, None)
        return Element(self.ctx, acc)

    def __radd__(self, other) -> "Element":
        return self.__add__(other)

    def __neg__(self) -> "Element":
        return Element(self.ctx, {t: -c for t, c in self._terms.items()})

    def __sub__(self, other) -> "Element":
        return self.__add__(self._coerce(other).__neg__())

    def __rsub__(self, other) -> "Element":
        return self._coerce(other).__sub__(self)

    def __mul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction)):
            c = _coerce_coeff(other)
            if not c:
                return Element(self.ctx)
            return Element(self.ctx, {t: v * c for t, v in self._terms.items()})
        other = self._coerce(other)
        self._check_ctx(other)
        ctx = self.ctx
        acc: dict[Monomial, Fraction] = {}
        for tx, cx in self._terms.items():
            for ty, cy in other._terms.items():
                tz = mul_monomial(ctx, tx, ty)
                if tz is None:
                    continue
                s = acc.get(tz, _ZERO) + cx * cy
                if s:
                    acc[tz] = s
                else:
                    acc.pop(tz, None)
        return Element(ctx, acc)

    def __rmul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return self._coerce(other).__mul__(self)

    def __pow__(self, k: int) -> "Element":
        if not isinstance(k, int) or k < 0:
            raise ValueError("Element powers must be nonnegative ints")
        out = Element.one(self.ctx)
        for _ in range(k):
            out = out * self
        return out

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            return other
        if isinstance(other, (int, Fraction)):
            return Element.monomial(self.ctx, 0, 0, 0, 0, other)
        raise TypeError(f"cannot combine Element with {type(other).__name__}")

    def adjoint(self) -> "Element":
        """*-operation: reverse each monomial; rational coefficients are fixed."""
        ctx = self.ctx
        return Element(ctx, {adjoint_monomial(ctx, t): c for t, c in self._terms.items()})

    # -- canonical form ----------------------------------------------------

    def canonical(self) -> "Element":
        """Expand each gauge-degree part to its maximal S*-level and merge.

        Within one degree d = m - n, all terms are rewritten to the largest
        n occurring there; at a fixed (m, n) normal monomials are linearly
        independent, so the merged form is zero iff the element is zero.
        """
        ctx = self.ctx
        by_degree: dict[int, list[tuple[Monomial, Fraction]]] = {}
        for t, c in self._terms.items():
            by_degree.setdefault(t.m - t.n, []).append((t, c))
        acc: dict[Monomial, Fraction] = {}
        for group in by_degree.values():
            level = max(t.n for t, _ in group)
            for t, c in group:
                for e in _expand_terms(ctx, t, level):
                    s = acc.get(e, _ZERO) + c
                    if s:
                        acc[e] = s
                    else:
                        acc.pop(e, None)
        return Element(ctx, acc)

    def is_zero(self) -> bool:
        return not self.canonical()._terms

    def equals(self, other) -> bool:
        other = self._coerce(other)
        self._check_ctx(other)
        return (self - other).is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (Element, int, Fraction)):
            return self.equals(other)
        return NotImplemented

    __hash__ = None  # mathematical equality is not hash-compatible

    def __repr__(self) -> str:
        if not self._terms:
            return f"Element(p={self.ctx.p}, 0)"
        body = " + ".join(f"{c}*{tuple(t)}" for t, c in self.terms())
        return f"Element(p={self.ctx.p}, {body})"


_ZERO = Fraction(0)


# -- module-level operation aliases (the op vocabulary) ---------------------


def expand_level(ctx: AlgebraContext, x: Monomial, target: int) -> Element:
    """The unit-decomposition rewrite of x at S*-level target, as an Element."""
    return Element.from_terms(ctx, ((t, Fraction(1)) for t in _expand_terms(ctx, x, target)))


def canonicalize(x: Element) -> Element:
    return x.canonical()


def equals(x: Element, y: Element) -> bool:
    return x.equals(y)


def chi(k: int, x: Element) -> Element:
    """Winding endomorphism chi_k: U -> U^k, S -> S; requires gcd(k, p) = 1.

    chi_{k1} o chi_{k2} = chi_{k1 k2}, and chi_k is surjective exactly
    when k is invertible mod p (see residue_map_surjective).
    """
    ctx = x.ctx
    _check_winding(ctx, k)
    return Element.from_terms(
        ctx, ((chi_monomial(ctx, k, t), c) for t, c in x._terms.items())
    )


def is_gauge_invariant(x: Element) -> bool:
    """True iff x lies in the fixed-point algebra of the gauge action."""
    return all(t.m == t.n for t, _ in x.canonical()._terms.items())


def residue_map_surjective(k: int, p: int) -> bool:
    """Does l |-> l*k mod p hit every residue class?  (Iff gcd(k, p) = 1.)"""
    return {(l * k) % p for l in range(p)} == set(range(p))


def cuntz_generator(ctx: AlgebraContext, j: int) -> Element:
    """T_j = U^j S for 0 <= j < p: the Cuntz-family picture of (U, S)."""
    if not 0 <= j < ctx.p:
        raise RangeError(f"generator index must satisfy 0 <= j < p, got {j}")
    return Element.monomial(ctx, j, 1, 0, 0)
