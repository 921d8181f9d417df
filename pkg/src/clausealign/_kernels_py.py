"""Pure-Python kernels.

Same signatures and bit-identical results as the compiled ``_kernels``
module; used when the extension is not built or ``CLAUSEALIGN_PURE`` is set.
"""

import numpy as np

NEG_INF = float("-inf")

# back-pointer codes, in tie-breaking preference order
BP_NONE = 0
BP_11 = 1
BP_21 = 2
BP_12 = 3
BP_22 = 4
BP_10 = 5
BP_01 = 6


def levenshtein(a, b):
    """Unit-cost edit distance over code points."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cost = prev[j - 1] + (ca != cb)
            ins = cur[j - 1] + 1
            dele = prev[j] + 1
            if ins < cost:
                cost = ins
            if dele < cost:
                cost = dele
            cur.append(cost)
        prev = cur
    return prev[-1]


def lcs_length(a, b):
    """Length of the longest common subsequence of two strings."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return 0
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        for j, cb in enumerate(b, 1):
            if ca == cb:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(cur[j - 1] if cur[j - 1] > prev[j] else prev[j])
        prev = cur
    return prev[-1]


def dp_fill(d11, d21, d12, d22, d10, d01):
    """Fill the alignment table.

    ``dXY[i, j]`` scores the transition that ends on source clause ``i`` and
    target clause ``j`` (0-based), so ``d21[i, j]`` covers source clauses
    ``i-1, i``.  ``d10[i]`` / ``d01[j]`` score dropping a single clause.

    Returns ``(D, back)`` with shapes ``(m+1, n+1)``.  Ties keep the earlier
    transition in the order 1-1, 2-1, 1-2, 2-2, 1-0, 0-1.
    """
    m = len(d10)
    n = len(d01)
    s11 = np.asarray(d11, dtype=np.float64).tolist()
    s21 = np.asarray(d21, dtype=np.float64).tolist()
    s12 = np.asarray(d12, dtype=np.float64).tolist()
    s22 = np.asarray(d22, dtype=np.float64).tolist()
    s10 = np.asarray(d10, dtype=np.float64).tolist()
    s01 = np.asarray(d01, dtype=np.float64).tolist()

    D = [[NEG_INF] * (n + 1) for _ in range(m + 1)]
    back = [[BP_NONE] * (n + 1) for _ in range(m + 1)]
    D[0][0] = 0.0
    for i in range(m + 1):
        for j in range(n + 1):
            if i == 0 and j == 0:
                continue
            best = NEG_INF
            code = BP_NONE
            if i >= 1 and j >= 1 and D[i - 1][j - 1] != NEG_INF:
                v = D[i - 1][j - 1] + s11[i - 1][j - 1]
                if v > best:
                    best, code = v, BP_11
            if i >= 2 and j >= 1 and D[i - 2][j - 1] != NEG_INF:
                v = D[i - 2][j - 1] + s21[i - 1][j - 1]
                if v > best:
                    best, code = v, BP_21
            if i >= 1 and j >= 2 and D[i - 1][j - 2] != NEG_INF:
                v = D[i - 1][j - 2] + s12[i - 1][j - 1]
                if v > best:
                    best, code = v, BP_12
            if i >= 2 and j >= 2 and D[i - 2][j - 2] != NEG_INF:
                v = D[i - 2][j - 2] + s22[i - 1][j - 1]
                if v > best:
                    best, code = v, BP_22
            if i >= 1 and D[i - 1][j] != NEG_INF:
                v = D[i - 1][j] + s10[i - 1]
                if v > best:
                    best, code = v, BP_10
            if j >= 1 and D[i][j - 1] != NEG_INF:
                v = D[i][j - 1] + s01[j - 1]
                if v > best:
                    best, code = v, BP_01
            D[i][j] = best
            back[i][j] = code
    return np.array(D, dtype=np.float64), np.array(back, dtype=np.int8)
