"""Independent reference computations used only by the tests.

Nothing here calls the library's linear algebra: ranks are computed by
Gaussian elimination over exact fractions, invariant factors by
determinantal divisors, and boundary matrices are rebuilt from raw faces.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import List, Sequence


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by Gaussian elimination on exact fractions."""
    m = [[Fraction(v) for v in r] for r in rows]
    if not m or not m[0]:
        return 0
    rank = 0
    for c in range(len(m[0])):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rank + 1, len(m)):
            if m[r][c] != 0:
                q = m[r][c] / m[rank][c]
                m[r] = [x - q * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def _det(rows: List[List[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign, prev = 1, 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for r in range(c + 1, n):
            for k in range(c + 1, n):
                m[r][k] = (m[r][k] * m[c][c] - m[c][k] * m[r][c]) // prev
        prev = m[c][c]
    return sign * m[n - 1][n - 1]


def determinantal_factors(rows: Sequence[Sequence[int]]) -> List[int]:
    """Invariant factors ``d_k = D_k / D_{k-1}`` with ``D_k`` the gcd of k-minors."""
    if not rows or not rows[0]:
        return []
    nrows, ncols = len(rows), len(rows[0])
    out, prev = [], 1
    for k in range(1, min(nrows, ncols) + 1):
        g = 0
        for rs in combinations(range(nrows), k):
            for cs in combinations(range(ncols), k):
                g = gcd(g, _det([[rows[r][c] for c in cs] for r in rs]))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def boundary_rows(X, k: int) -> List[List[int]]:
    """Dense matrix of the normalized boundary ``C_k -> C_{k-1}``, from faces."""
    src = X.simplices(k)
    tgt = X.simplices(k - 1)
    pos = {y: i for i, y in enumerate(tgt)}
    rows = [[0] * len(src) for _ in tgt]
    for j, x in enumerate(src):
        for i, (op, y) in enumerate(X.faces(x)):
            if len(set(op)) == len(op):
                rows[pos[y]][j] += (-1) ** i
    return rows


def rational_betti(X, upto: int) -> List[int]:
    ranks = [0] + [rational_rank(boundary_rows(X, k)) for k in range(1, upto + 2)]
    return [len(X.simplices(i)) - ranks[i] - ranks[i + 1] for i in range(upto + 1)]


def shuffle_count(a: int, b: int, k: int) -> int:
    """Nondegenerate ``k``-simplices of ``h(a) x h(b)`` over the top cells."""
    if not max(a, b) <= k <= a + b:
        return 0
    return comb(k, a) * comb(a, k - b)


def product_count_brute(X, Y, k: int) -> int:
    """Pairs of ``k``-simplices with no common degeneracy direction."""
    count = 0
    xs = list(X.all_simplices(k))
    ys = list(Y.all_simplices(k))
    for sx, _ in xs:
        for sy, _ in ys:
            if not any(sx[j] == sx[j + 1] and sy[j] == sy[j + 1] for j in range(k)):
                count += 1
    return count
