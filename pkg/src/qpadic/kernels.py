"""Kernel dispatch: compiled extension when available, numpy fallback otherwise.

Set QPADIC_KERNELS=py to force the fallback, =c to require the compiled
module (import error if missing).  The exported functions take raw
exponent words (i, m, n, j); a conservative Python-int bound on every
intermediate decides whether the int64 backends are safe, and oversized
inputs route to the arbitrary-precision path so results are exact at any
magnitude.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py as _py

_choice = os.environ.get("QPADIC_KERNELS", "auto")
if _choice == "py":
    _impl = _py
    BACKEND = "py"
elif _choice == "c":
    from . import _kernels_cy as _impl  # noqa: F401

    BACKEND = "c"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        _impl = _py
        BACKEND = "py"

_SAFE = 1 << 62

Word = tuple[int, int, int, int]


def _prepare(p: int, chain: list[Word], kmax: int):
    """Prepared int64 rows (i, p^m, p^n, j) plus an all-intermediates bound."""
    bound = kmax
    rows = []
    safe = True
    for (i, m, n, j) in chain:
        pm, pn = p**m, p**n
        # dead vectorized lanes still compute floor quotients: +1 slack
        bound = pm * ((bound + abs(j)) // pn + 1) + abs(i)
        if bound >= _SAFE or pm >= _SAFE:
            safe = False
            break
        rows.append((i, pm, pn, j))
    if not safe:
        return None
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), 4)
    return arr


def act_window(p: int, word: Word, k0: int, k1: int):
    """Action of one monomial word on e_k for k0 <= k <= k1.

    Returns (img, alive): int64 images and a bool mask (False = annihilated).
    Words must pass the int64 bound check; the callers that need huge
    exponents use qpadic.rep.act_monomial instead.
    """
    prep = _prepare(p, [word], max(abs(k0), abs(k1)))
    if prep is None:
        raise ValueError("word exponents exceed the compiled kernel range")
    L = k1 - k0 + 1
    img = np.empty(L, dtype=np.int64)
    alive = np.empty(L, dtype=np.uint8)
    i, pm, pn, j = (int(v) for v in prep[0])
    _impl.act_fill(i, pm, pn, j, k0, img, alive)
    return img, alive.astype(bool)


def count_mismatch(p: int, chain_a: list[Word], chain_b: list[Word] | None,
                   k0: int, k1: int) -> int:
    """Count basis vectors e_k, k0 <= k <= k1, where two chains act differently.

    Chains apply their first word first; chain_b=None compares against the
    zero operator (counts every k chain_a does not annihilate).
    """
    kmax = max(abs(k0), abs(k1))
    pa = _prepare(p, chain_a, kmax)
    pb = _prepare(p, chain_b, kmax) if chain_b is not None else np.zeros((0, 4), dtype=np.int64)
    if pa is None or pb is None:
        return _py.count_mismatch_big(p, chain_a, chain_b, k0, k1)
    return int(_impl.count_mismatch(pa, pb, chain_b is None, k0, k1))


def greedy_count(close_idx: np.ndarray, size: int) -> int:
    """Greedy maximal selection on Z/size with non-separated differences close_idx."""
    close = np.ascontiguousarray(close_idx, dtype=np.int64)
    blocked = np.zeros(size, dtype=np.uint8)
    return int(_impl.greedy_count(close, blocked))
