"""Fallback kernels: numpy-vectorized fast paths plus arbitrary-precision loops.

Mirrors the compiled module's surface exactly (prepared words are int64
rows (i, p^m, p^n, j); chains apply row 0 first).  The *_big functions
take raw exponent tuples and run on Python ints, so they have no
magnitude limit; the dispatcher in qpadic.kernels routes to them when an
int64 bound check fails.
"""

from __future__ import annotations

import numpy as np


def act_fill(i, pm, pn, j, k0, img, alive):
    """Fill img/alive with the one-monomial action on e_k, k = k0 + index."""
    L = img.shape[0]
    ks = np.arange(k0, k0 + L, dtype=np.int64)
    t = ks + j
    ok = (t % pn) == 0
    img[:] = pm * (t // pn) + i
    img[~ok] = 0
    alive[:] = ok


def _apply_chain(w, ks):
    cur = ks.copy()
    alive = np.ones(ks.shape[0], dtype=bool)
    for s in range(w.shape[0]):
        t = cur + w[s, 3]
        alive &= (t % w[s, 2]) == 0
        cur = w[s, 1] * (t // w[s, 2]) + w[s, 0]
    return cur, alive


def count_mismatch(wa, wb, b_zero, k0, k1):
    """Count k in [k0, k1] where chain a and chain b act differently on e_k."""
    ks = np.arange(k0, k1 + 1, dtype=np.int64)
    img_a, alive_a = _apply_chain(wa, ks)
    if b_zero:
        return int(alive_a.sum())
    img_b, alive_b = _apply_chain(wb, ks)
    bad = (alive_a != alive_b) | (alive_a & alive_b & (img_a != img_b))
    return int(bad.sum())


def greedy_count(close, blocked):
    """Greedy maximal scan over Z/G: select unblocked g ascending, block g + C.

    close holds the difference classes that are NOT separated (0 included,
    symmetric under negation mod G), so blocking g + close after each
    selection is exactly "skip every later point not separated from g".
    """
    G = blocked.shape[0]
    count = 0
    for g in range(G):
        if blocked[g]:
            continue
        count += 1
        idx = close + g
        idx[idx >= G] -= G
        blocked[idx] = 1
    return count


# -- arbitrary-precision paths (no magnitude limit) --------------------------


def _act_big(chain, p, k):
    for (i, m, n, j) in chain:
        t = k + j
        pn = p**n
        if t % pn:
            return None
        k = p**m * (t // pn) + i
    return k


def count_mismatch_big(p, chain_a, chain_b, k0, k1):
    """Python-int version of count_mismatch; chain_b None means the zero map."""
    bad = 0
    for k in range(k0, k1 + 1):
        a = _act_big(chain_a, p, k)
        if chain_b is None:
            bad += a is not None
        else:
            if a != _act_big(chain_b, p, k):
                bad += 1
    return bad
