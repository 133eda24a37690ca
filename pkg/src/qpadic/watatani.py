"""Conditional expectations onto winding subalgebras, quasi-bases, index.

Averaging the order-|k| cyclic action U -> zeta U (zeta a primitive |k|-th
root of unity, S fixed) defines a conditional expectation onto the
fixed-point subalgebra, which coincides with the image of the winding
endomorphism chi_k.  On the monomial basis the average is a congruence
filter, no roots of unity needed: U^i S^m S*^n U^j survives iff

    p^n * i + p^m * j == 0  (mod |k|).

For gauge-invariant monomials (m = n) this is the plain net-winding test
i + j == 0 mod |k|, and that form is only well defined on the
gauge-invariant subalgebra: rewriting by the unit decomposition shifts
i + j of an m != n monomial by multiples of p^m - p^n.  The p-power
weights above are exactly invariant under that rewriting, which is what
lets the F-kind expectation act on the whole algebra, including the
composed iterates with |k| = (p-1)^iota.

The expectation has quasi-basis {U^j : 0 <= j < |k|} and Watatani index
|k| * 1.  bezout_lift and chi_preimage invert chi_k constructively on
the gauge-invariant monomials; relative_commutant_probe checks the
finite-level shadow of the commutant argument (translation by k on
Z/p^level is transitive iff gcd(k, p) = 1).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .algebra import (
    AlgebraContext,
    Element,
    Monomial,
    _check_winding,
    chi_monomial,
    is_gauge_invariant,
    normalize_monomial,
)
from .dynamics import additive_order
from .errors import (
    InternalConsistencyError,
    NotCoprime,
    NotInDomain,
    NotInImage,
    PreconditionError,
)
from .serialize import rational_str

__all__ = [
    "ExpectationSpec",
    "QuasiBasis",
    "expectation",
    "expectation_by_averaging",
    "quasi_basis",
    "verify_quasi_basis",
    "watatani_index",
    "index_report",
    "bezout_lift",
    "chi_preimage",
    "relative_commutant_probe",
]

_F1 = Fraction(1)

KIND_GAUGE = "E"
KIND_FULL = "F"


@dataclass(frozen=True)
class ExpectationSpec:
    """Which expectation: kind E lives on the gauge-invariant subalgebra
    (any k coprime to p); kind F lives on the full algebra and needs
    |k| = (p-1)^iota for some iota >= 1, the orders where U -> zeta U
    extends to the whole relation set."""

    ctx: AlgebraContext
    kind: str
    k: int

    def __post_init__(self) -> None:
        if self.kind not in (KIND_GAUGE, KIND_FULL):
            raise PreconditionError(f"kind must be {KIND_GAUGE!r} or {KIND_FULL!r}, got {self.kind!r}")
        _check_winding(self.ctx, self.k)
        if self.kind == KIND_FULL and not _is_power_of(abs(self.k), self.ctx.p - 1):
            raise PreconditionError(
                f"F-kind needs |k| = (p-1)^iota with iota >= 1, got k={self.k} at p={self.ctx.p}"
            )

    @property
    def group_order(self) -> int:
        return abs(self.k)


def _is_power_of(v: int, base: int) -> bool:
    if base == 1:
        return v == 1
    w = base
    while w <= v:
        if w == v:
            return True
        w *= base
    return False


def _survives(p: int, order: int, t: Monomial) -> bool:
    return (pow(p, t.n, order) * t.i + pow(p, t.m, order) * t.j) % order == 0


def expectation(spec: ExpectationSpec, x: Element) -> Element:
    """Project x onto the image of chi_k by the congruence filter.

    Linear, unital, idempotent, and a bimodule map over the image; E-kind
    input must be gauge invariant.
    """
    if x.ctx.p != spec.ctx.p:
        raise PreconditionError(f"element lives at p={x.ctx.p}, spec at p={spec.ctx.p}")
    xc = x.canonical()
    if spec.kind == KIND_GAUGE and not is_gauge_invariant(xc):
        raise NotInDomain("E-kind expectation is defined on gauge-invariant elements only")
    p, order = spec.ctx.p, spec.group_order
    kept = {t: c for t, c in xc.term_map().items() if _survives(p, order, t)}
    return Element(spec.ctx, kept)


def expectation_by_averaging(spec: ExpectationSpec, x: Element) -> dict[Monomial, complex]:
    """Floating cross-check: average the phases zeta^(l*(i+j)) over l < |k|.

    The single-phase model is valid exactly where i + j is
    rewriting-invariant: gauge-invariant input, or F-kind with |k|
    dividing p - 1.  Composite F iterates have no one-phase picture and
    are rejected.
    """
    order = spec.group_order
    if spec.kind == KIND_FULL and order > 1 and (spec.ctx.p - 1) % order != 0:
        raise PreconditionError("phase averaging cross-check needs |k| dividing p-1")
    xc = x.canonical()
    if spec.kind == KIND_GAUGE and not is_gauge_invariant(xc):
        raise NotInDomain("E-kind expectation is defined on gauge-invariant elements only")
    out: dict[Monomial, complex] = {}
    for t, c in xc.term_map().items():
        z = sum(cmath.exp(2j * cmath.pi * l * (t.i + t.j) / order) for l in range(order))
        out[t] = complex(c) * z / order
    return out


@dataclass(frozen=True)
class QuasiBasis:
    spec: ExpectationSpec
    elements: tuple[Element, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> Element:
        return self.elements[i]


def quasi_basis(spec: ExpectationSpec) -> QuasiBasis:
    """{U^j : 0 <= j < |k|}: a quasi-basis for the expectation."""
    ctx = spec.ctx
    els = tuple(Element.monomial(ctx, j, 0, 0, 0) for j in range(spec.group_order))
    return QuasiBasis(spec, els)


def verify_quasi_basis(spec: ExpectationSpec, x: Element) -> bool:
    """Exact check of x = sum_j u_j E(u_j* x) over the quasi-basis."""
    acc = Element.zero(spec.ctx)
    for u in quasi_basis(spec):
        acc = acc + u * expectation(spec, u.adjoint() * x)
    return acc.equals(x)


def watatani_index(spec: ExpectationSpec) -> Element:
    """Sum u_j u_j* over the quasi-basis: exactly |k| * 1."""
    out = Element.zero(spec.ctx)
    for u in quasi_basis(spec):
        out = out + u * u.adjoint()
    return out


def index_report(spec: ExpectationSpec) -> dict:
    """Index summary with a quasi-basis verification sweep.

    The sweep runs the exact quasi-basis identity over the projective
    family U^i S^h S*^h U^(-i + t|k|) for |i| <= 5, t in {-1, 0, 1},
    h <= 2 (99 monomials, all inside both domains).
    """
    ctx, order = spec.ctx, spec.group_order
    idx = watatani_index(spec)
    scalar = idx.term_map().get(Monomial(0, 0, 0, 0), Fraction(0))
    count = 0
    for h in range(3):
        for i in range(-5, 6):
            for t in (-1, 0, 1):
                x = Element.monomial(ctx, i, h, h, -i + t * order)
                if not verify_quasi_basis(spec, x):
                    raise InternalConsistencyError(
                        f"quasi-basis identity failed on U^{i} S^{h} S*^{h} U^{-i + t * order}"
                    )
                count += 1
    return {
        "k": spec.k,
        "p": ctx.p,
        "index": rational_str(scalar),
        "quasi_basis_size": order,
        "verified_on": count,
    }


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def bezout_lift(i: int, h: int, k: int, p: int) -> tuple[int, int]:
    """Solve i + b*p^h = m*k for integers (b, m); needs gcd(k, p) = 1.

    From 1 = c*k + d*p^h (extended Euclid), b = -i*d and m = i*c.
    """
    if h < 0:
        raise PreconditionError("h must be >= 0")
    ph = p**h
    if gcd(k, ph) != 1:
        raise NotCoprime(f"gcd(k, p) must be 1: k={k}, p={p}")
    g, c, d = _xgcd(abs(k), ph)
    if k < 0:
        c = -c
    b, m = -i * d, i * c
    if i + b * ph != m * k:
        raise InternalConsistencyError("Bezout lift failed substitution check")
    return b, m


def _preimage_monomial(ctx: AlgebraContext, k: int, t: Monomial) -> Monomial:
    _check_winding(ctx, k)
    if t.m != t.n:
        raise PreconditionError("chi preimages are computed for gauge-invariant monomials (m = n)")
    if k < 0:
        return _preimage_monomial(ctx, -k, chi_monomial(ctx, -1, t))
    total = t.i + t.j
    if total % k:
        raise NotInImage(f"net winding {total} is not divisible by k={k}")
    steps = total // k
    h = t.m
    _, mprime = bezout_lift(t.i, h, k, ctx.p)
    y = normalize_monomial(ctx, mprime, h, h, steps - mprime)
    if chi_monomial(ctx, k, y) != t:
        raise InternalConsistencyError(f"preimage of {t} failed the chi round-trip")
    return y


def chi_preimage(ctx: AlgebraContext, k: int, x: Monomial | Element) -> Element:
    """Constructive y with chi(k, y) = x, for gauge-invariant x.

    Writes j = -i + steps*k, lifts i to i + b*p^h = m'*k, and returns
    U^m' S^h S*^h U^(steps - m') termwise; exact by construction, and
    re-checked by applying chi.  Negative k routes through chi_{-1}.
    """
    if isinstance(x, Monomial):
        return Element(ctx, {_preimage_monomial(ctx, k, x): _F1})
    xc = x.canonical()
    if not is_gauge_invariant(xc):
        raise PreconditionError("chi preimages are computed for gauge-invariant elements")
    out: dict[Monomial, Fraction] = {}
    for t, c in xc.term_map().items():
        y = _preimage_monomial(ctx, k, t)
        s = out.get(y, Fraction(0)) + c
        if s:
            out[y] = s
        else:
            out.pop(y, None)
    return Element(ctx, out)


def relative_commutant_probe(k: int, p: int, level: int) -> bool:
    """Finite-level commutant shadow: is translation by k on Z/p^level transitive?

    Enumerates the orbit size (the additive order of k) and compares to
    p^level; true iff gcd(k, p^level) = 1, mirroring the argument that an
    element of the diagonal commuting with U^k is scalar.
    """
    if level < 0:
        raise PreconditionError("level must be >= 0")
    if p < 2:
        raise PreconditionError("p must be >= 2")
    modulus = p**level
    return additive_order(k, modulus) == modulus
