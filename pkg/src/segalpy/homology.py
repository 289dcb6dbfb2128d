"""Integer chain complexes, Smith normal form and homology with torsion."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import IndexBeyondCap, NotSimplyConnected


class SparseIntMatrix:
    """Integer matrix stored column-wise; zero entries are never kept."""

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns: Optional[List[Dict[int, int]]] = None):
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [{} for _ in range(cols)]
        self.columns = columns

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[Tuple[int, int, int]]):
        M = cls(rows, cols)
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside a {rows}x{cols} matrix")
            col = M.columns[c]
            v = col.get(r, 0) + v
            if v:
                col[r] = v
            else:
                col.pop(r, None)
        return M

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]):
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        return cls.from_entries(nr, nc, ((r, c, int(v)) for r, row in enumerate(rows)
                                         for c, v in enumerate(row) if v))

    def entries(self):
        for c, col in enumerate(self.columns):
            for r in sorted(col):
                yield r, c, col[r]

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def to_dense(self) -> List[List[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries():
            out[r][c] = v
        return out

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for ocol in other.columns:
            acc: Dict[int, int] = {}
            for k, w in ocol.items():
                for r, v in self.columns[k].items():
                    acc[r] = acc.get(r, 0) + v * w
            out.append({r: v for r, v in acc.items() if v})
        return SparseIntMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return all(not c for c in self.columns)

    def __eq__(self, other):
        return (isinstance(other, SparseIntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.columns == other.columns)

    def to_text(self) -> str:
        """One ``row col value`` line per nonzero entry, after a shape line."""
        lines = [f"{self.rows} {self.cols}"]
        lines += [f"{r} {c} {v}" for r, c, v in self.entries()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseIntMatrix":
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        rows, cols = map(int, lines[0])
        return cls.from_entries(rows, cols, ((int(r), int(c), int(v)) for r, c, v in lines[1:]))


@dataclass(frozen=True)
class HomologyGroup:
    """``Z^rank`` plus cyclic torsion summands ``Z/d`` with ``d_1 | d_2 | ...``."""

    rank: int
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t):
            raise ValueError("torsion coefficients must be at least 2")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError("torsion coefficients must form a divisibility chain")
        object.__setattr__(self, "torsion", t)

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, doc: dict) -> "HomologyGroup":
        return cls(int(doc["rank"]), tuple(doc.get("torsion", ())))

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


Z = HomologyGroup(1)
ZERO = HomologyGroup(0)


# ----------------------------------------------------------------------
# Smith normal form
# ----------------------------------------------------------------------

def _normalize_chain(diag: List[int]) -> List[int]:
    """Turn any list of nonzero diagonal entries into a divisibility chain."""
    d = sorted(abs(v) for v in diag if v)
    # repeated gcd/lcm sweeps; the list is short after unit elimination
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                a, b = d[i], d[j]
                if b % a:
                    g = gcd(a, b)
                    d[i], d[j] = g, a // g * b
                    changed = True
        d.sort()
    return d


def _dense_snf_factors(rows: List[List[int]]) -> List[int]:
    """Invariant factors of a small dense integer matrix (destroys ``rows``)."""
    A = rows
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        best = None
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                v = Ai[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                v = A[i][t]
                if v:
                    q = v // p
                    if q:
                        Ai, At = A[i], A[t]
                        for j in range(t, n):
                            if At[j]:
                                Ai[j] -= q * At[j]
                    if A[i][t]:
                        dirty = True
            At = A[t]
            for j in range(t + 1, n):
                v = At[j]
                if v:
                    q = v // p
                    if q:
                        for i in range(t, m):
                            if A[i][t]:
                                A[i][j] -= q * A[i][t]
                    if At[j]:
                        dirty = True
            if not dirty:
                break
            # move the smallest remaining entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if At[j] and abs(At[j]) < best[0]:
                    best = (abs(At[j]), t, j)
            _, i, j = best
            if i != t:
                A[t], A[i] = A[i], A[t]
            if j != t:
                for row in A:
                    row[t], row[j] = row[j], row[t]
        diag.append(A[t][t])
        t += 1
    return diag


def invariant_factors(M: SparseIntMatrix) -> List[int]:
    """Nonzero invariant factors ``d_1 | d_2 | ...`` of ``M``.

    Unit pivots are eliminated sparsely first (cheapest row/column first);
    whatever is left has no unit entry and goes through a dense reduction.
    """
    rows: Dict[int, Dict[int, int]] = {}
    colsets: Dict[int, set] = {}
    for c, col in enumerate(M.columns):
        for r, v in col.items():
            rows.setdefault(r, {})[c] = v
            colsets.setdefault(c, set()).add(r)
    units = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(colsets, key=lambda c: (len(colsets[c]), c)):
            rs = colsets.get(c)
            if not rs:
                continue
            best = None
            for r in rs:
                v = rows[r][c]
                if v == 1 or v == -1:
                    if best is None or len(rows[r]) < best[0]:
                        best = (len(rows[r]), r)
            if best is None:
                continue
            r = best[1]
            prow = rows.pop(r)
            pv = prow[c]
            for c2 in prow:
                colsets[c2].discard(r)
            for r2 in list(colsets[c]):
                row2 = rows[r2]
                q = row2[c] * pv
                for c2, v in prow.items():
                    nv = row2.get(c2, 0) - q * v
                    if nv:
                        if c2 not in row2:
                            colsets[c2].add(r2)
                        row2[c2] = nv
                    elif c2 in row2:
                        del row2[c2]
                        colsets[c2].discard(r2)
                if not row2:
                    del rows[r2]
            del colsets[c]
            units += 1
            progress = True
    rest_rows = [r for r in sorted(rows) if rows[r]]
    rest_cols = sorted(c for c, rs in colsets.items() if rs)
    factors = [1] * units
    if rest_rows and rest_cols:
        cidx = {c: i for i, c in enumerate(rest_cols)}
        dense = []
        for r in rest_rows:
            row = [0] * len(rest_cols)
            for c, v in rows[r].items():
                row[cidx[c]] = v
            dense.append(row)
        factors += _normalize_chain(_dense_snf_factors(dense))
    return factors


def smith_normal_form(M: SparseIntMatrix, transforms: bool = False):
    """Invariant factors of ``M``; with ``transforms`` also ``(U, V)``.

    When transforms are requested the computation is dense and returns
    unimodular ``U`` and ``V`` with ``U @ M @ V`` diagonal, the diagonal
    being the invariant factors followed by zeros.
    """
    if not transforms:
        return invariant_factors(M)
    return _snf_with_transforms(M.to_dense(), M.rows, M.cols)


def _snf_with_transforms(A, m, n):
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        done = False
            if done:
                # divisibility: fold in any entry the pivot does not divide
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if A[i][j] % A[t][t]), None)
                if bad is None:
                    break
                add_row(t, bad[0], -1)
                continue
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            _, i, j = min(cand)
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    factors = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    return factors, SparseIntMatrix.from_dense(U) if m else SparseIntMatrix(0, 0), \
        SparseIntMatrix.from_dense(V) if n else SparseIntMatrix(0, 0)


def rank(M: SparseIntMatrix) -> int:
    return len(invariant_factors(M))


# ----------------------------------------------------------------------
# chain complexes
# ----------------------------------------------------------------------

@dataclass
class ChainComplex:
    """``boundaries[k]`` is the differential ``C_k -> C_{k-1}``.

    ``top`` is the highest degree whose outgoing differential is known;
    homology is certified up to ``top - 1``.
    """

    ranks: List[int]
    boundaries: List[SparseIntMatrix]
    _factors: Dict[int, List[int]] = field(default_factory=dict, repr=False)

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def factors(self, k: int) -> List[int]:
        if k not in self._factors:
            if k <= 0 or k > self.top:
                self._factors[k] = []
            else:
                self._factors[k] = invariant_factors(self.boundaries[k])
        return self._factors[k]

    def d_squared_violations(self) -> List[int]:
        return [k for k in range(2, self.top + 1)
                if not (self.boundaries[k - 1] @ self.boundaries[k]).is_zero()]

    def homology(self, i: int) -> HomologyGroup:
        if i < 0:
            raise ValueError("negative degree")
        if i >= self.top:
            raise IndexBeyondCap(f"H_{i} needs the differential out of degree {i + 1}; "
                                 f"complex is known up to degree {self.top}")
        r_out = len(self.factors(i))
        f_in = self.factors(i + 1)
        free = self.ranks[i] - r_out - len(f_in)
        return HomologyGroup(free, tuple(d for d in f_in if d > 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * r for k, r in enumerate(self.ranks))


def chain_complex(X) -> "ChainComplex":
    """Normalized chain complex on nondegenerate simplices up to the cap."""
    index = [{x: i for i, x in enumerate(X.simplices(k))} for k in range(X.cap + 1)]
    ranks = [len(ix) for ix in index]
    boundaries = [SparseIntMatrix(0, ranks[0])]
    for k in range(1, X.cap + 1):
        prev = index[k - 1]
        cols = []
        for x in X.simplices(k):
            col: Dict[int, int] = {}
            for i, (op, y) in enumerate(X.faces(x)):
                if len(op) == X.dim(y) + 1:  # nondegenerate face
                    r = prev[y]
                    v = col.get(r, 0) + (-1 if i & 1 else 1)
                    if v:
                        col[r] = v
                    else:
                        del col[r]
            cols.append(col)
        boundaries.append(SparseIntMatrix(ranks[k - 1], ranks[k], cols))
    return ChainComplex(ranks, boundaries)


def homology(X, i: int) -> HomologyGroup:
    """``H_i(X; Z)`` for ``i <= cap - 1``."""
    if i >= X.cap:
        raise IndexBeyondCap(f"H_{i} of a set capped at {X.cap} is not determined")
    return chain_complex(X).homology(i)


def homology_all(X, upto: Optional[int] = None) -> List[HomologyGroup]:
    cc = chain_complex(X)
    top = X.cap - 1 if upto is None else upto
    return [cc.homology(i) for i in range(top + 1)]


def relative_complex(X, sub_ids) -> ChainComplex:
    """Chain complex of the pair ``(X, L)`` for a face-closed set ``sub_ids``."""
    sub = set(sub_ids)
    index = [{x: i for i, x in enumerate(y for y in X.simplices(k) if y not in sub)}
             for k in range(X.cap + 1)]
    ranks = [len(ix) for ix in index]
    boundaries = [SparseIntMatrix(0, ranks[0])]
    for k in range(1, X.cap + 1):
        prev = index[k - 1]
        cols = []
        for x in index[k]:
            col: Dict[int, int] = {}
            for i, (op, y) in enumerate(X.faces(x)):
                if len(op) == X.dim(y) + 1 and y in prev:
                    r = prev[y]
                    v = col.get(r, 0) + (-1 if i & 1 else 1)
                    if v:
                        col[r] = v
                    else:
                        del col[r]
            cols.append(col)
        boundaries.append(SparseIntMatrix(ranks[k - 1], ranks[k], cols))
    return ChainComplex(ranks, boundaries)


def pi2_simply_connected(X) -> HomologyGroup:
    """``pi_2(X) = H_2(X)`` for a simply connected ``X`` (Hurewicz).

    Simple connectivity is the caller's assertion; the necessary condition
    ``H_1(X) = 0`` is checked and a violation raises.
    """
    if X.cap < 3:
        raise IndexBeyondCap("pi_2 needs the 3-simplices; raise the cap to at least 3")
    cc = chain_complex(X)
    if not cc.homology(1).is_zero() or cc.homology(0) != Z:
        raise NotSimplyConnected("input has nontrivial H_0 or H_1; it is not simply connected")
    return cc.homology(2)
