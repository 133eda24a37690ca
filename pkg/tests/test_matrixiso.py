"""Corner isomorphism into matrices, structured decomposition, norm checks."""

import random
from fractions import Fraction

import pytest

from qpadic.algebra import Element, Monomial, equals, normalize_monomial
from qpadic.errors import DimensionError, InternalConsistencyError, PreconditionError
from qpadic.matrixiso import (
    OpMatrix,
    ScalarMatrix,
    check_norm_bounds,
    corner_norm_check,
    decompose,
    psi,
    psi_inverse,
)
from qpadic.rep import Window
from util import rand_element


def test_psi_of_unitary_shift(ctx2):
    U = Element.monomial(ctx2, 1, 0, 0, 0)
    M = psi(1, U)
    assert equals(M.entry(0, 1), U)
    assert equals(M.entry(1, 0), Element.one(ctx2))
    assert M.entry(0, 0).is_zero() and M.entry(1, 1).is_zero()


def test_psi_unital(ctx2, ctx3):
    for ctx, h in ((ctx2, 2), (ctx3, 1)):
        M = psi(h, Element.one(ctx))
        assert M.equals(OpMatrix.identity(ctx, h))


def test_psi_of_range_projection(ctx2):
    M = psi(1, Element.monomial(ctx2, 0, 1, 1, 0))
    assert equals(M.entry(0, 0), Element.one(ctx2))
    for r, c in ((0, 1), (1, 0), (1, 1)):
        assert M.entry(r, c).is_zero()


def test_psi_precondition(ctx2):
    with pytest.raises(PreconditionError):
        psi(0, Element.one(ctx2))


def test_psi_multiplicative_sample(ctx2, ctx3):
    rng = random.Random(401)
    for ctx in (ctx2, ctx3):
        for _ in range(25):
            h = rng.randint(1, 2)
            x = rand_element(rng, ctx, max_terms=2, max_exp=2, span=6)
            y = rand_element(rng, ctx, max_terms=2, max_exp=2, span=6)
            assert psi(h, x * y).equals(psi(h, x) * psi(h, y))


def test_psi_zero_iff_zero(ctx2):
    rng = random.Random(402)
    for _ in range(20):
        x = rand_element(rng, ctx2)
        assert psi(2, x).is_zero() == x.is_zero()
    assert psi(2, Element.zero(ctx2)).is_zero()


def test_psi_inverse_round_trips(ctx2, ctx3):
    rng = random.Random(403)
    for ctx in (ctx2, ctx3):
        for _ in range(15):
            h = rng.randint(1, 2)
            x = rand_element(rng, ctx, max_terms=3, max_exp=2, span=8)
            assert equals(psi_inverse(h, psi(h, x)), x)
            entries = {}
            for r in range(ctx.p ** h):
                for c in range(ctx.p ** h):
                    if rng.random() < 0.2:
                        entries[(r, c)] = rand_element(rng, ctx, max_terms=2,
                                                       max_exp=1, span=4)
            M = OpMatrix(ctx, h, entries)
            assert psi(h, psi_inverse(h, M)).equals(M)


def test_psi_inverse_dimension_error(ctx2):
    with pytest.raises(DimensionError):
        psi_inverse(2, psi(1, Element.one(ctx2)))


def test_opmatrix_algebra(ctx2):
    rng = random.Random(404)
    h = 1
    def rand_mat():
        return psi(h, rand_element(rng, ctx2, max_terms=2, max_exp=1, span=4))
    A, B = rand_mat(), rand_mat()
    assert (A * B).adjoint().equals(B.adjoint() * A.adjoint())
    assert (A + B - B).equals(A)
    I = OpMatrix.identity(ctx2, h)
    assert (A * I).equals(A) and (I * A).equals(A)


def test_decompose_shift_case(ctx2):
    dec = decompose(1, Monomial(1, 0, 0, 0), ctx2)
    assert dec.case == "m=n"
    e10 = ScalarMatrix.from_entries(2, {(1, 0): 1})
    e01 = ScalarMatrix.from_entries(2, {(0, 0): 0, (0, 1): 1})
    assert dec.terms[0].rows == e10.rows
    assert dec.terms[1].rows == e01.rows
    minus = dec.terms.get(-1)
    assert minus is None or not minus.nonzero()
    assert dec.reassemble().equals(psi(1, Element.monomial(ctx2, 1, 0, 0, 0)))


def test_decompose_identity(ctx2):
    dec = decompose(2, Monomial(0, 0, 0, 0), ctx2)
    assert dec.case == "m=n"
    assert set(dec.terms) == {0}
    ident = ScalarMatrix.from_entries(4, {(r, r): 1 for r in range(4)})
    assert dec.terms[0].rows == ident.rows


def test_decompose_creation_case(ctx2):
    dec = decompose(2, Monomial(0, 1, 0, 0), ctx2)
    assert dec.case == "m>n"
    assert dec.reassemble().equals(psi(2, Element.monomial(ctx2, 0, 1, 0, 0)))


def test_decompose_tag_count_bound(ctx2):
    rng = random.Random(405)
    for _ in range(60):
        m = rng.randint(1, 2)
        n = rng.randint(0, m - 1)
        t = Monomial(rng.randint(-7, 7), m, n, rng.randint(0, 2**n - 1))
        dec = decompose(3, t, ctx2)
        live = [g for g, R in dec.terms.items() if R.nonzero()]
        assert len(live) <= 2 ** (t.m - t.n) + 2


def test_decompose_preconditions(ctx2):
    with pytest.raises(PreconditionError):
        decompose(1, Monomial(0, 1, 1, 0), ctx2)
    with pytest.raises(PreconditionError):
        decompose(2, Monomial(4, 0, 0, 0), ctx2)


def test_decompose_matches_psi_cross_p(ctx3):
    rng = random.Random(406)
    for _ in range(40):
        m, n = rng.randint(0, 1), rng.randint(0, 1)
        if m >= n:
            i, j = rng.randint(-8, 8), rng.randint(0, 3**n - 1)
        else:
            i, j = rng.randint(0, 3**m - 1), rng.randint(-8, 8)
        dec = decompose(2, Monomial(i, m, n, j), ctx3)
        target = psi(2, Element.monomial(ctx3, i, m, n, j))
        assert dec.reassemble().equals(target)


def test_scaled_decomposition(ctx2):
    dec = decompose(2, Monomial(1, 1, 0, 0), ctx2).scaled(Fraction(3, 2))
    target = psi(2, Element.monomial(ctx2, 1, 1, 0, 0, coeff=Fraction(3, 2)))
    assert dec.reassemble().equals(target)


def test_check_norm_bounds_examples(ctx2):
    w = Window(N=256)
    for word, h in ((Monomial(1, 0, 0, 0), 1), (Monomial(0, 0, 0, 0), 1),
                    (Monomial(3, 1, 1, 0), 3)):
        t = normalize_monomial(ctx2, *word)
        dec = decompose(h, t, ctx2)
        report = check_norm_bounds(dec, t, w)
        assert report["ok"], report
        for row in report["terms"]:
            assert row["norm"] <= 1 + 1e-6


def test_corner_norm_check_validation(ctx2):
    ident = ScalarMatrix.from_entries(2, {(0, 0): 1, (1, 1): 1})
    with pytest.raises(PreconditionError):
        corner_norm_check(ctx2, 0, [ident] * 5)
    with pytest.raises(DimensionError):
        corner_norm_check(ctx2, 1, [ident] * 4)
    bad = [ident] * 4 + [ScalarMatrix.from_entries(3, {})]
    with pytest.raises(DimensionError):
        corner_norm_check(ctx2, 1, bad)


def test_corner_norm_check_passes(ctx2):
    rng = random.Random(407)
    w = Window(N=512)
    for _ in range(4):
        d = rng.randint(2, 4)
        mats = []
        for _ in range(5):
            ent = {}
            for r in range(d):
                for c in range(d):
                    v = rng.choice((0, 0, 1, -1))
                    if v:
                        ent[(r, c)] = Fraction(v)
            mats.append(ScalarMatrix.from_entries(d, ent))
        report = corner_norm_check(ctx2, rng.randint(1, 2), mats, w)
        assert report["ok"], report


def test_scalar_matrix_helpers():
    Q = ScalarMatrix.from_entries(2, {(0, 1): Fraction(3, 2)})
    assert Q.transpose().rows[1][0] == Fraction(3, 2)
    assert Q.scale(2).rows[0][1] == 3
    assert Q.nonzero() and not ScalarMatrix.from_entries(2, {}).nonzero()
