"""Shared random generators for the test suite.

Every test seeds its own random.Random so failures replay in isolation;
these helpers only shape the draws.
"""

from fractions import Fraction

from qpadic.algebra import AlgebraContext, Element, Monomial, normalize_monomial


def rand_normal_monomial(rng, ctx: AlgebraContext, max_exp: int = 3,
                         span: int = 50) -> Monomial:
    m = rng.randint(0, max_exp)
    n = rng.randint(0, max_exp)
    i = rng.randint(-span, span)
    j = rng.randint(-span, span)
    return normalize_monomial(ctx, i, m, n, j)


def rand_raw_word(rng, max_exp: int = 3, span: int = 50) -> tuple[int, int, int, int]:
    return (rng.randint(-span, span), rng.randint(0, max_exp),
            rng.randint(0, max_exp), rng.randint(-span, span))


def rand_coeff(rng) -> Fraction:
    num = rng.randint(-4, 4) or 1
    return Fraction(num, rng.randint(1, 4))


def rand_element(rng, ctx: AlgebraContext, max_terms: int = 4,
                 max_exp: int = 2, span: int = 20) -> Element:
    pairs = []
    for _ in range(rng.randint(1, max_terms)):
        pairs.append((rand_normal_monomial(rng, ctx, max_exp, span),
                      rand_coeff(rng)))
    return Element.from_terms(ctx, pairs)


def rand_gauge_element(rng, ctx: AlgebraContext, max_terms: int = 4,
                       max_level: int = 3, span: int = 20) -> Element:
    """Random element of the gauge-invariant subalgebra (every term m = n)."""
    pairs = []
    for _ in range(rng.randint(1, max_terms)):
        n = rng.randint(0, max_level)
        t = normalize_monomial(ctx, rng.randint(-span, span), n, n,
                               rng.randint(-span, span))
        pairs.append((t, rand_coeff(rng)))
    return Element.from_terms(ctx, pairs)
