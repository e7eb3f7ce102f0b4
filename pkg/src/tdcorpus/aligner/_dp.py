"""Pure-Python alignment DP; reference for the compiled kernel in _dpcore.pyx.

Both kernels share one contract:

    dp_align(src_len, tgt_len, prior, c, s2, sim, weight)
        -> (total_cost, [(kind_index, src_end, tgt_end, cost), ...])

``prior`` is -log(prior) in KINDS order. ``sim`` is None or a CSR triple
(rowptr, cols, vals) where row i lists, for each target prefix length j,
the dictionary similarity of the four substitution beads ending at (i, j)
in KINDS order. Beads come back in document order.
"""

import math

from .model import indel_length_cost, substitution_length_cost

_INF = math.inf
# (source step, target step) per kind index, in KINDS order
_STEPS = ((1, 1), (2, 1), (1, 2), (2, 2), (1, 0), (0, 1))
_NONE = 255


def _make_costs(ls, lt, prior, c, s2):
    sub_cache = {}
    del_cache = {}

    def sub(k, l1, l2):
        key = (l1, l2)
        g = sub_cache.get(key)
        if g is None:
            g = sub_cache[key] = substitution_length_cost(l1, l2, c, s2)
        return prior[k] + g

    def indel(k, l):
        g = del_cache.get(l)
        if g is None:
            g = del_cache[l] = indel_length_cost(l, s2)
        return prior[k] + g

    return sub, indel


def _sim_rows(sim, n):
    if sim is None:
        return None
    rowptr, cols, vals = sim
    rows = []
    for i in range(n + 1):
        rows.append({int(cols[p]): tuple(float(v) for v in vals[p]) for p in range(rowptr[i], rowptr[i + 1])})
    return rows


def bead_cost(k, i, j, ls, lt, sub, indel, srow, weight):
    """Cost of the bead of kind index ``k`` ending at prefix lengths (i, j)."""
    a, b = _STEPS[k]
    if b == 0:
        return indel(k, ls[i - 1])
    if a == 0:
        return indel(k, lt[j - 1])
    l1 = ls[i - 1] + (ls[i - 2] if a == 2 else 0)
    l2 = lt[j - 1] + (lt[j - 2] if b == 2 else 0)
    cost = sub(k, l1, l2)
    if srow is not None:
        s = srow.get(j)
        if s is not None:
            cost = cost - weight * s[k]
            if cost < 0.0:
                cost = 0.0
    return cost


def dp_align(src_len, tgt_len, prior, c, s2, sim=None, weight=0.0):
    ls = [int(x) for x in src_len]
    lt = [int(x) for x in tgt_len]
    n, m = len(ls), len(lt)
    sub, indel = _make_costs(ls, lt, prior, c, s2)
    rows = _sim_rows(sim, n)

    D = [[_INF] * (m + 1) for _ in range(n + 1)]
    back = [bytearray(m + 1) for _ in range(n + 1)]
    D[0][0] = 0.0
    for i in range(n + 1):
        srow = rows[i] if rows is not None else None
        Di = D[i]
        bi = back[i]
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            best = _INF
            bk = _NONE
            for k in range(6):
                a, b = _STEPS[k]
                if i < a or j < b:
                    continue
                prev = D[i - a][j - b]
                if prev == _INF:
                    continue
                v = prev + bead_cost(k, i, j, ls, lt, sub, indel, srow, weight)
                if v < best:
                    best = v
                    bk = k
            Di[j] = best
            bi[j] = bk

    path = []
    i, j = n, m
    while i > 0 or j > 0:
        k = back[i][j]
        srow = rows[i] if rows is not None else None
        path.append((k, i, j, bead_cost(k, i, j, ls, lt, sub, indel, srow, weight)))
        a, b = _STEPS[k]
        i -= a
        j -= b
    path.reverse()
    return D[n][m], path
