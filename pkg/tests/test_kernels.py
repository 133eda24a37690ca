"""Kernel dispatch: compiled and fallback paths agree, big ints stay exact."""

import random

import numpy as np
import pytest

import qpadic._kernels_py as kpy
from qpadic import kernels
from qpadic.rep import act_word

try:
    import qpadic._kernels_cy as kcy
except ImportError:
    kcy = None


def _prepared(p, chain):
    rows = [(i, p**m, p**n, j) for (i, m, n, j) in chain]
    return np.array(rows, dtype=np.int64).reshape(len(rows), 4)


def test_backend_reported():
    assert kernels.BACKEND in ("c", "py")


def test_act_window_matches_act_word():
    rng = random.Random(101)
    for _ in range(50):
        p = rng.choice((2, 3, 5))
        word = (rng.randint(-20, 20), rng.randint(0, 3),
                rng.randint(0, 3), rng.randint(-20, 20))
        img, alive = kernels.act_window(p, word, -30, 30)
        for off, k in enumerate(range(-30, 31)):
            want = act_word(p, *word, k)
            if want is None:
                assert not alive[off]
            else:
                assert alive[off] and img[off] == want


def test_count_mismatch_matches_bruteforce():
    rng = random.Random(102)
    for _ in range(60):
        p = rng.choice((2, 3))
        la = rng.randint(1, 3)
        lb = rng.randint(1, 3)
        chain_a = [(rng.randint(-9, 9), rng.randint(0, 2), rng.randint(0, 2),
                    rng.randint(-9, 9)) for _ in range(la)]
        chain_b = [(rng.randint(-9, 9), rng.randint(0, 2), rng.randint(0, 2),
                    rng.randint(-9, 9)) for _ in range(lb)]
        if rng.random() < 0.25:
            chain_b = None

        def run(chain, k):
            for w in chain:
                k = act_word(p, *w, k)
                if k is None:
                    return None
            return k

        want = 0
        for k in range(-40, 41):
            a = run(chain_a, k)
            if chain_b is None:
                want += a is not None
            else:
                want += a != run(chain_b, k)
        assert kernels.count_mismatch(p, chain_a, chain_b, -40, 40) == want


def test_count_mismatch_zero_on_equal_chains():
    # S* U^p S acts exactly like U on every e_k
    assert kernels.count_mismatch(2, [(0, 1, 0, 0), (2, 0, 0, 0), (0, 0, 1, 0)],
                                  [(1, 0, 0, 0)], -500, 500) == 0


def test_big_int_route_is_exact():
    # p^m overflows int64, so the dispatcher must take the Python-int path
    w = (5, 70, 1, 3)
    assert kernels.count_mismatch(2, [w], [w], -100, 100) == 0
    hits = sum(1 for k in range(-100, 101) if (k + 3) % 2 == 0)
    assert kernels.count_mismatch(2, [w], None, -100, 100) == hits
    # huge against small: both sides routed, still exact
    assert kernels.count_mismatch(2, [w], [(1, 0, 0, 0)], -100, 100) == 201


def test_big_int_shift_identity():
    big = 1 << 80
    a = [(big, 0, 0, 0), (-big, 0, 0, 0)]
    assert kernels.count_mismatch(2, a, [(0, 0, 0, 0)], -50, 50) == 0


def test_act_window_rejects_oversized_word():
    with pytest.raises(ValueError):
        kernels.act_window(2, (1 << 80, 0, 0, 0), -10, 10)


def test_greedy_count_matches_reference():
    rng = random.Random(103)
    for _ in range(40):
        size = rng.randint(4, 120)
        raw = sorted({0} | {rng.randrange(size) for _ in range(rng.randint(0, 10))})
        close = sorted({d for d in raw} | {(size - d) % size for d in raw})
        blocked = [False] * size
        want = 0
        for g in range(size):
            if blocked[g]:
                continue
            want += 1
            for d in close:
                blocked[(g + d) % size] = True
        got = kernels.greedy_count(np.array(close, dtype=np.int64), size)
        assert got == want


@pytest.mark.skipif(kcy is None, reason="compiled kernels not built")
def test_compiled_matches_fallback():
    rng = random.Random(104)
    for _ in range(40):
        p = rng.choice((2, 3, 5))
        chain_a = [(rng.randint(-9, 9), rng.randint(0, 2), rng.randint(0, 2),
                    rng.randint(-9, 9)) for _ in range(rng.randint(1, 3))]
        chain_b = [(rng.randint(-9, 9), rng.randint(0, 2), rng.randint(0, 2),
                    rng.randint(-9, 9)) for _ in range(rng.randint(1, 3))]
        pa, pb = _prepared(p, chain_a), _prepared(p, chain_b)
        for b_zero in (False, True):
            assert kcy.count_mismatch(pa, pb, b_zero, -60, 60) == \
                kpy.count_mismatch(pa, pb, b_zero, -60, 60)

        i, m, n, j = chain_a[0]
        L = 121
        img_c = np.empty(L, dtype=np.int64)
        alive_c = np.empty(L, dtype=np.uint8)
        img_p = np.empty(L, dtype=np.int64)
        alive_p = np.empty(L, dtype=np.uint8)
        kcy.act_fill(i, p**m, p**n, j, -60, img_c, alive_c)
        kpy.act_fill(i, p**m, p**n, j, -60, img_p, alive_p)
        assert np.array_equal(alive_c, alive_p)
        assert np.array_equal(img_c[alive_c.astype(bool)],
                              img_p[alive_p.astype(bool)])


@pytest.mark.skipif(kcy is None, reason="compiled kernels not built")
def test_compiled_greedy_matches_fallback():
    rng = random.Random(105)
    for _ in range(25):
        size = rng.randint(4, 200)
        close = np.array(sorted({0} | {rng.randrange(size) for _ in range(6)}),
                         dtype=np.int64)
        bc = np.zeros(size, dtype=np.uint8)
        bp = np.zeros(size, dtype=np.uint8)
        assert kcy.greedy_count(close.copy(), bc) == kpy.greedy_count(close.copy(), bp)
