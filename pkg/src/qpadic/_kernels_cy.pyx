# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: monomial window actions and the greedy separated scan.

Same surface as qpadic._kernels_py; the dispatcher guarantees every value
fits in int64 before calling in (cdivision truncation equals floor here
because quotients are only consumed when the division is exact).
"""


def act_fill(long long i, long long pm, long long pn, long long j,
             long long k0, long long[::1] img, unsigned char[::1] alive):
    cdef Py_ssize_t t, L = img.shape[0]
    cdef long long w
    for t in range(L):
        w = k0 + t + j
        if w % pn == 0:
            img[t] = pm * (w // pn) + i
            alive[t] = 1
        else:
            img[t] = 0
            alive[t] = 0


def count_mismatch(long long[:, ::1] wa, long long[:, ::1] wb, bint b_zero,
                   long long k0, long long k1):
    cdef long long k, w, cur_a = 0, cur_b = 0, bad = 0
    cdef Py_ssize_t s, La = wa.shape[0], Lb = wb.shape[0]
    cdef bint alive_a, alive_b
    for k in range(k0, k1 + 1):
        cur_a = k
        alive_a = 1
        for s in range(La):
            w = cur_a + wa[s, 3]
            if w % wa[s, 2] != 0:
                alive_a = 0
                break
            cur_a = wa[s, 1] * (w // wa[s, 2]) + wa[s, 0]
        if b_zero:
            if alive_a:
                bad += 1
            continue
        cur_b = k
        alive_b = 1
        for s in range(Lb):
            w = cur_b + wb[s, 3]
            if w % wb[s, 2] != 0:
                alive_b = 0
                break
            cur_b = wb[s, 1] * (w // wb[s, 2]) + wb[s, 0]
        if alive_a != alive_b:
            bad += 1
        elif alive_a and cur_a != cur_b:
            bad += 1
    return bad


def greedy_count(long long[::1] close, unsigned char[::1] blocked):
    cdef Py_ssize_t G = blocked.shape[0], C = close.shape[0]
    cdef Py_ssize_t g, c
    cdef long long idx, count = 0
    for g in range(G):
        if blocked[g]:
            continue
        count += 1
        for c in range(C):
            idx = g + close[c]
            if idx >= G:
                idx -= G
            blocked[idx] = 1
    return count
