"""Bisimplicial sets and one-object Segal precats.

A :class:`Bisimplicial` stores its *bi-nondegenerate* cells: cells of
bidegree ``(p, q)`` that are neither horizontally nor vertically
degenerate.  Any cell is addressed by ``(sh, sv, x)``: surjections ``sh``
(first index) and ``sv`` (second index) applied to the bi-nondegenerate
``x``.  Each cell stores ``p + 1`` horizontal faces and ``q + 1`` vertical
faces in that form.

The first index ``p`` is the simplicial direction of the precat (columns
``A_{p/}``); the second index ``q`` is the "space" direction.
"""

from __future__ import annotations

import heapq
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from . import monotone as mono
from .budget import charge
from .errors import MultiObject, NonInjectiveLeg, NotGlobular
from .homology import ChainComplex, SparseIntMatrix
from .simplicial import (SimplicialMap, SimplicialSet, _normal_tuple, into_product,
                         product_many)

BiRef = Tuple[Tuple[int, ...], Tuple[int, ...], int]


class Bisimplicial:
    """A bisimplicial set truncated at ``p <= pcap`` and ``q <= qcap``.

    Faces of a cell always point at smaller ids.
    """

    __slots__ = ("pcap", "qcap", "_bideg", "_hf", "_vf", "_by_bideg", "names", "meta",
                 "_cache")

    def __init__(self, pcap: int, qcap: int, bidegs: List[Tuple[int, int]],
                 hfaces: List[tuple], vfaces: List[tuple], names: Optional[List[str]] = None):
        self.pcap = pcap
        self.qcap = qcap
        self._bideg = bidegs
        self._hf = hfaces
        self._vf = vfaces
        self._by_bideg: Dict[Tuple[int, int], List[int]] = {}
        for x, pq in enumerate(bidegs):
            self._by_bideg.setdefault(pq, []).append(x)
        self.names = names
        self.meta: dict = {}
        self._cache: Dict[tuple, BiRef] = {}

    def __len__(self):
        return len(self._bideg)

    def __repr__(self):
        return f"{type(self).__name__}(pcap={self.pcap}, qcap={self.qcap}, cells={len(self)})"

    def ids(self) -> range:
        return range(len(self._bideg))

    def bidegree(self, x: int) -> Tuple[int, int]:
        return self._bideg[x]

    def cells(self, p: int, q: int) -> List[int]:
        return self._by_bideg.get((p, q), [])

    def hfaces(self, x: int) -> tuple:
        return self._hf[x]

    def vfaces(self, x: int) -> tuple:
        return self._vf[x]

    def name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    def counts(self) -> Dict[Tuple[int, int], int]:
        """Bi-nondegenerate cell count per bidegree (only nonzero entries)."""
        return {pq: len(ids) for pq, ids in sorted(self._by_bideg.items())}

    def ref(self, x: int) -> BiRef:
        p, q = self._bideg[x]
        return (mono.identity(p), mono.identity(q), x)

    # -- operators -----------------------------------------------------
    def apply(self, ref: BiRef, alpha: Tuple[int, ...], beta: Tuple[int, ...]) -> BiRef:
        """``(alpha, beta)^*`` of a cell, in normal form."""
        sh, sv, x = ref
        hi, hs = mono.factor(mono.compose(sh, alpha))
        vi, vs = mono.factor(mono.compose(sv, beta))
        s2, t2, y = self._restrict(x, hi, vi)
        return (mono.compose(s2, hs), mono.compose(t2, vs), y)

    def _restrict(self, x: int, dh: Tuple[int, ...], dv: Tuple[int, ...]) -> BiRef:
        p, q = self._bideg[x]
        fullh = len(dh) == p + 1
        fullv = len(dv) == q + 1
        if fullh and fullv:
            return (mono.identity(p), mono.identity(q), x)
        key = (x, dh, dv)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if not fullh:
            j = p
            while j in dh:
                j -= 1
            rest = tuple(v if v < j else v - 1 for v in dh)
            out = self.apply(self._hf[x][j], rest, dv)
        else:
            j = q
            while j in dv:
                j -= 1
            rest = tuple(v if v < j else v - 1 for v in dv)
            out = self.apply(self._vf[x][j], dh, rest)
        self._cache[key] = out
        return out

    def hface(self, ref: BiRef, i: int) -> BiRef:
        p, q = len(ref[0]) - 1, len(ref[1]) - 1
        return self.apply(ref, mono.coface(p, i), mono.identity(q))

    def vface(self, ref: BiRef, i: int) -> BiRef:
        p, q = len(ref[0]) - 1, len(ref[1]) - 1
        return self.apply(ref, mono.identity(p), mono.coface(q, i))

    def horizontal(self, ref: BiRef, alpha: Tuple[int, ...]) -> BiRef:
        return self.apply(ref, alpha, mono.identity(len(ref[1]) - 1))

    # -- globularity ---------------------------------------------------
    def objects(self) -> List[int]:
        return self.cells(0, 0)

    def is_globular(self) -> bool:
        """``k -> A_{0,k}`` is constant: no bi-nondegenerate ``(0, q)`` cell for q > 0."""
        return not any(p == 0 and q > 0 for (p, q) in self._by_bideg)


class BisimplicialBuilder:
    def __init__(self, pcap: int, qcap: int):
        self.pcap = pcap
        self.qcap = qcap
        self.bidegs: List[Tuple[int, int]] = []
        self.hf: List[tuple] = []
        self.vf: List[tuple] = []
        self.names: List[str] = []

    def add(self, p: int, q: int, hfaces=(), vfaces=(), name: Optional[str] = None) -> int:
        x = len(self.bidegs)
        self.bidegs.append((p, q))
        self.hf.append(tuple(hfaces))
        self.vf.append(tuple(vfaces))
        self.names.append(str(x) if name is None else name)
        charge()
        return x

    def build(self, cls=None):
        cls = cls or Bisimplicial
        return cls(self.pcap, self.qcap, self.bidegs, self.hf, self.vf, self.names)


class SegalPrecat(Bisimplicial):
    """A globular bisimplicial set; ``objects()`` is the set ``A_0``."""

    __slots__ = ()

    @classmethod
    def of(cls, B: Bisimplicial) -> "SegalPrecat":
        if not B.is_globular():
            raise NotGlobular("the zeroth column is not constant")
        if isinstance(B, SegalPrecat):
            return B
        out = cls(B.pcap, B.qcap, B._bideg, B._hf, B._vf, B.names)
        out.meta = B.meta
        out._cache = B._cache
        return out

    @property
    def basepoint(self) -> int:
        objs = self.objects()
        if len(objs) != 1:
            raise NotGlobular(f"expected one object, found {len(objs)}")
        return objs[0]


class BisimplicialMap:
    __slots__ = ("source", "target", "assignment")

    def __init__(self, source: Bisimplicial, target: Bisimplicial, assignment: List[BiRef]):
        self.source = source
        self.target = target
        self.assignment = assignment

    def __call__(self, ref: BiRef) -> BiRef:
        sh, sv, x = ref
        return self.target.apply(self.assignment[x], sh, sv)

    def __matmul__(self, other: "BisimplicialMap") -> "BisimplicialMap":
        return BisimplicialMap(other.source, self.target, [self(r) for r in other.assignment])

    def is_injective(self) -> bool:
        seen = set()
        for sh, sv, y in self.assignment:
            if not (mono.is_identity(sh) and mono.is_identity(sv)) or y in seen:
                return False
            seen.add(y)
        return True

    def violations(self) -> List[str]:
        out = []
        src, tgt = self.source, self.target
        for x in src.ids():
            p, q = src.bidegree(x)
            fx = self.assignment[x]
            for i in range(p + 1 if p else 0):
                if self(src.hfaces(x)[i]) != tgt.hface(fx, i):
                    out.append(f"map does not commute with horizontal d_{i} on {src.name(x)}")
            for i in range(q + 1 if q else 0):
                if self(src.vfaces(x)[i]) != tgt.vface(fx, i):
                    out.append(f"map does not commute with vertical d_{i} on {src.name(x)}")
        return out

    @classmethod
    def identity(cls, A: Bisimplicial) -> "BisimplicialMap":
        return cls(A, A, [A.ref(x) for x in A.ids()])


class BisPushout(NamedTuple):
    space: Bisimplicial
    left: BisimplicialMap
    right: BisimplicialMap

    def induced(self, h_left: BisimplicialMap, h_right: BisimplicialMap) -> BisimplicialMap:
        P = self.space
        origin = P.meta["pushout_origin"]
        assignment = [(h_left if side == 0 else h_right).assignment[y] for side, y in origin]
        return BisimplicialMap(P, h_left.target, assignment)


# ----------------------------------------------------------------------
# validation
# ----------------------------------------------------------------------

def validate(A: Bisimplicial) -> List[str]:
    """Normal forms, both sets of simplicial identities and their commutation."""
    out = []
    n = len(A)
    for x in A.ids():
        p, q = A.bidegree(x)
        hf, vf = A.hfaces(x), A.vfaces(x)
        if len(hf) != (p + 1 if p else 0) or len(vf) != (q + 1 if q else 0):
            out.append(f"cell {A.name(x)} has the wrong number of faces")
            continue
        bad = False
        for kind, faces, (dp, dq) in (("horizontal", hf, (p - 1, q)), ("vertical", vf, (p, q - 1))):
            for i, (sh, sv, y) in enumerate(faces):
                if not (0 <= y < n) or y >= x:
                    out.append(f"{kind} d_{i} of {A.name(x)} refers to an unknown cell")
                    bad = True
                    continue
                a, b = A.bidegree(y)
                if (len(sh) != dp + 1 or len(sv) != dq + 1 or not mono.is_surjection(sh)
                        or not mono.is_surjection(sv) or sh[-1] != a or sv[-1] != b):
                    out.append(f"{kind} d_{i} of {A.name(x)} is not in normal form")
                    bad = True
        if bad:
            continue
        r = A.ref(x)
        for j in range(p + 1 if p >= 2 else 0):
            for i in range(j):
                if A.hface(A.hface(r, j), i) != A.hface(A.hface(r, i), j - 1):
                    out.append(f"horizontal identity d_{i} d_{j} fails on {A.name(x)}")
        for j in range(q + 1 if q >= 2 else 0):
            for i in range(j):
                if A.vface(A.vface(r, j), i) != A.vface(A.vface(r, i), j - 1):
                    out.append(f"vertical identity d_{i} d_{j} fails on {A.name(x)}")
        for i in range(p + 1 if p else 0):
            for j in range(q + 1 if q else 0):
                if A.vface(A.hface(r, i), j) != A.hface(A.vface(r, j), i):
                    out.append(f"horizontal d_{i} and vertical d_{j} do not commute on {A.name(x)}")
    return out


# ----------------------------------------------------------------------
# constructions
# ----------------------------------------------------------------------

def constant_precat(X: SimplicialSet, qcap: Optional[int] = None) -> SegalPrecat:
    """``A_{p,k} := X_p``, constant in the second variable."""
    if len(X.vertices()) != 1:
        raise NotGlobular(f"constant precat needs one vertex, found {len(X.vertices())}")
    qcap = X.cap if qcap is None else qcap
    b = BisimplicialBuilder(X.cap, qcap)
    for x in X.ids():
        hf = tuple((op, (0,), y) for op, y in X.faces(x))
        b.add(X.dim(x), 0, hf, (), X.name(x))
    return b.build(SegalPrecat)


def exterior_product(X: SimplicialSet, B: SimplicialSet) -> Bisimplicial:
    """``(X (x) B)_{p,q} = X_p x B_q``."""
    b = BisimplicialBuilder(X.cap, B.cap)
    index: Dict[Tuple[int, int], int] = {}
    for x in X.ids():
        p = X.dim(x)
        for y in B.ids():
            q = B.dim(y)
            idq, idp = mono.identity(q), mono.identity(p)
            hf = tuple((op, idq, index[(z, y)]) for op, z in X.faces(x))
            vf = tuple((idp, op, index[(x, z)]) for op, z in B.faces(y))
            index[(x, y)] = b.add(p, q, hf, vf, f"{X.name(x)}|{B.name(y)}")
    out = b.build()
    out.meta["exterior_index"] = index
    return out


def exterior_map(f: SimplicialMap, g: SimplicialMap, source: Bisimplicial,
                 target: Bisimplicial) -> BisimplicialMap:
    """``f (x) g`` between two exterior products."""
    src_index = source.meta["exterior_index"]
    tgt_index = target.meta["exterior_index"]
    assignment: List[BiRef] = [None] * len(source)  # type: ignore[list-item]
    for (x, y), c in src_index.items():
        s, x2 = f.assignment[x]
        t, y2 = g.assignment[y]
        assignment[c] = (s, t, tgt_index[(x2, y2)])
    return BisimplicialMap(source, target, assignment)


def bis_pushout(f: BisimplicialMap, incl: BisimplicialMap) -> BisPushout:
    """Pushout of ``A <-f- U -incl-> V`` with ``incl`` injective, bidegree by bidegree."""
    A, V, U = f.target, incl.target, incl.source
    if f.source is not U:
        raise ValueError("pushout legs must share their source")
    if not incl.is_injective():
        raise NonInjectiveLeg("the inclusion leg of the bisimplicial pushout is not injective")
    if V.pcap < A.pcap or V.qcap < A.qcap:
        raise ValueError("the attached bisimplicial set has smaller caps than the base")
    hit = {ref[2]: u for u, ref in enumerate(incl.assignment)}
    bidegs = list(A._bideg)
    hf = list(A._hf)
    vf = list(A._vf)
    names = [A.name(x) for x in A.ids()]
    origin = [(0, x) for x in A.ids()]
    new: Dict[int, int] = {}

    def move(ref):
        sh, sv, z = ref
        if z in hit:
            return A.apply(f.assignment[hit[z]], sh, sv)
        return (sh, sv, new[z])

    for y in V.ids():
        if y in hit:
            continue
        p, q = V.bidegree(y)
        if p > A.pcap or q > A.qcap:
            continue
        new[y] = len(bidegs)
        bidegs.append((p, q))
        hf.append(tuple(move(r) for r in V.hfaces(y)))
        vf.append(tuple(move(r) for r in V.vfaces(y)))
        names.append(V.name(y))
        origin.append((1, y))
    charge(len(new))
    cls = SegalPrecat if isinstance(A, SegalPrecat) else Bisimplicial
    P = Bisimplicial(A.pcap, A.qcap, bidegs, hf, vf, names)
    if cls is SegalPrecat and P.is_globular():
        P = SegalPrecat.of(P)
    P.meta["pushout_origin"] = origin
    left = BisimplicialMap(A, P, [A.ref(x) for x in A.ids()])
    right = []
    for y in V.ids():
        if y in hit:
            right.append(f.assignment[hit[y]])
        elif y in new:
            right.append(V.ref(y)[:2] + (new[y],))
        else:
            right.append(None)
    return BisPushout(P, left, BisimplicialMap(V, P, right))


# ----------------------------------------------------------------------
# columns, Segal maps, diagonal
# ----------------------------------------------------------------------

def column(A: Bisimplicial, p: int) -> SimplicialSet:
    """The simplicial set ``A_{p/} : q -> A_{p,q}``.

    Its nondegenerate simplices are the vertically nondegenerate cells
    ``(sh, x)``; ``meta["column_index"]`` maps such pairs to ids.
    """
    if p > A.pcap:
        raise ValueError(f"column {p} above pcap {A.pcap}")
    cached = A.meta.setdefault("columns", {})
    if p in cached:
        return cached[p]
    index: Dict[Tuple[tuple, int], int] = {}
    keys: List[Tuple[tuple, int]] = []
    dims: List[int] = []
    faces: List[tuple] = []
    names: List[str] = []
    idp = mono.identity(p)
    for q in range(A.qcap + 1):
        for a in range(p + 1):
            surjs = mono.surjections(p, a)
            for x in A.cells(a, q):
                for sh in surjs:
                    ref = (sh, mono.identity(q), x)
                    fx = []
                    for i in range(q + 1 if q else 0):
                        s2, t2, y = A.apply(ref, idp, mono.coface(q, i))
                        fx.append((t2, index[(s2, y)]))
                    index[(sh, x)] = len(keys)
                    keys.append((sh, x))
                    dims.append(q)
                    faces.append(tuple(fx))
                    names.append(A.name(x) if mono.is_identity(sh)
                                 else f"{A.name(x)}@{''.join(map(str, sh))}")
    charge(len(keys))
    col = SimplicialSet(A.qcap, dims, faces, names)
    col.meta["column_index"] = index
    col.meta["column_keys"] = keys
    cached[p] = col
    return col


def column_ref(A: Bisimplicial, p: int, ref: BiRef):
    """Translate a bisimplicial ``(p, q)`` cell to a reference in ``column(A, p)``."""
    sh, sv, x = ref
    return (sv, column(A, p).meta["column_index"][(sh, x)])


def bis_ref(A: Bisimplicial, p: int, cref) -> BiRef:
    """Inverse of :func:`column_ref`."""
    sv, c = cref
    sh, x = column(A, p).meta["column_keys"][c]
    return (sh, sv, x)


def principal_edge(m: int, i: int) -> Tuple[int, int]:
    """The ``i``-th principal edge ``[1] -> [m]`` (``i`` from 1 to ``m``)."""
    return (i - 1, i)


def column_map(A: Bisimplicial, theta: Tuple[int, ...], m: int) -> SimplicialMap:
    """``theta^*: A_{m/} -> A_{p/}`` for ``theta: [p] -> [m]``."""
    p = len(theta) - 1
    src, tgt = column(A, m), column(A, p)
    tindex = tgt.meta["column_index"]
    assignment = []
    for q_dim, (sh, x) in zip(src._dim, src.meta["column_keys"]):
        s2, t2, y = A.apply((sh, mono.identity(q_dim), x), theta, mono.identity(q_dim))
        assignment.append((t2, tindex[(s2, y)]))
    return SimplicialMap(src, tgt, assignment)


def segal_product(A: Bisimplicial, m: int) -> Tuple[SimplicialSet, List[SimplicialMap]]:
    """``A_{1/} x ... x A_{1/}`` (``m`` factors), cached on ``A``."""
    cached = A.meta.setdefault("segal_products", {})
    if m not in cached:
        col1 = column(A, 1)
        cached[m] = product_many([col1] * m)
    return cached[m]


def segal_map(A: Bisimplicial, m: int, upto: Optional[int] = None) -> SimplicialMap:
    """``A_{m/} -> A_{1/} x ... x A_{1/}`` induced by the principal edges of ``[m]``.

    With ``upto`` the target is only the ``upto``-skeleton of the product
    together with the image of the map.
    """
    if len(A.objects()) != 1 or not A.is_globular():
        raise MultiObject("the Segal map is only formed for one-object precats")
    if m < 1 or m > A.pcap:
        raise ValueError(f"Segal map in degree {m} outside 1..{A.pcap}")
    comps = [column_map(A, principal_edge(m, i), m) for i in range(1, m + 1)]
    if upto is None or upto >= A.qcap:
        P, _ = segal_product(A, m)
    else:
        src = comps[0].source
        image = [_normal_tuple([f.assignment[x] for f in comps])[1] for x in src.ids()]
        P, _ = product_many([column(A, 1)] * m, upto=upto, extra=image)
    return into_product(P, comps)


def diagonal(A: Bisimplicial) -> SimplicialSet:
    """``n -> A_{n,n}`` with faces ``d_i = d_i^h d_i^v``, capped at ``min(pcap, qcap)``."""
    cap = min(A.pcap, A.qcap)
    index: Dict[tuple, int] = {}
    dims, faces, names = [], [], []
    for n in range(cap + 1):
        found = []
        for (a, b), ids in A._by_bideg.items():
            if a > n or b > n:
                continue
            for sh in mono.surjections(n, a):
                fh = mono.flat_steps(sh)
                for sv in mono.surjections(n, b):
                    if fh & mono.flat_steps(sv):
                        continue
                    for x in ids:
                        found.append((x, sh, sv))
        found.sort()
        for x, sh, sv in found:
            fx = []
            for i in range(n + 1 if n else 0):
                d = mono.coface(n, i)
                s2, t2, y = A.apply((sh, sv, x), d, d)
                sigma = mono.common_flattening([s2, t2])
                sec = mono.section(sigma)
                key = (mono.compose(s2, sec), mono.compose(t2, sec), y)
                fx.append((sigma, index[key]))
            index[(sh, sv, x)] = len(dims)
            dims.append(n)
            faces.append(tuple(fx))
            names.append(f"{A.name(x)}@{''.join(map(str, sh))}/{''.join(map(str, sv))}")
    charge(len(dims))
    D = SimplicialSet(cap, dims, faces, names)
    D.meta["diagonal_index"] = index
    return D


def total_complex(A: Bisimplicial) -> ChainComplex:
    """Total complex of the bi-normalized double complex.

    Its homology equals that of the diagonal (Eilenberg-Zilber-Cartier) in
    degrees up to ``min(pcap, qcap) - 1``, at a fraction of the size.
    """
    top = min(A.pcap, A.qcap)
    index: List[Dict[int, int]] = []
    for t in range(top + 1):
        ix = {}
        for p in range(t + 1):
            for x in A.cells(p, t - p):
                ix[x] = len(ix)
        index.append(ix)
    ranks = [len(ix) for ix in index]
    boundaries = [SparseIntMatrix(0, ranks[0])]
    for t in range(1, top + 1):
        prev = index[t - 1]
        cols = []
        for x in index[t]:
            p, q = A.bidegree(x)
            col: Dict[int, int] = {}
            for i, (sh, sv, y) in enumerate(A.hfaces(x)):
                if len(sh) == p and len(sv) == q + 1 and A.bidegree(y) == (p - 1, q):
                    r = prev[y]
                    col[r] = col.get(r, 0) + (-1 if i & 1 else 1)
            vsign = -1 if p & 1 else 1
            for j, (sh, sv, y) in enumerate(A.vfaces(x)):
                if len(sv) == q and A.bidegree(y) == (p, q - 1):
                    r = prev[y]
                    col[r] = col.get(r, 0) + vsign * (-1 if j & 1 else 1)
            cols.append({r: v for r, v in col.items() if v})
        boundaries.append(SparseIntMatrix(ranks[t - 1], ranks[t], cols))
    return ChainComplex(ranks, boundaries)


def diagonal_homology(A: Bisimplicial, upto: Optional[int] = None):
    """``H_i(|A|)`` for ``i <= upto`` (default ``min(pcap, qcap) - 1``)."""
    cc = total_complex(A)
    top = cc.top - 1 if upto is None else upto
    return [cc.homology(i) for i in range(top + 1)]


def sub_bisimplicial(A: Bisimplicial, ids) -> Tuple[Bisimplicial, BisimplicialMap]:
    """The sub-bisimplicial set on the face-closed set of cells ``ids``."""
    keep = sorted(set(ids))
    new = {x: i for i, x in enumerate(keep)}
    bidegs, hf, vf, names = [], [], [], []
    for x in keep:
        hf.append(tuple((sh, sv, new[y]) for sh, sv, y in A.hfaces(x)))
        vf.append(tuple((sh, sv, new[y]) for sh, sv, y in A.vfaces(x)))
        bidegs.append(A.bidegree(x))
        names.append(A.name(x))
    S = Bisimplicial(A.pcap, A.qcap, bidegs, hf, vf, names)
    if isinstance(A, SegalPrecat) and S.is_globular():
        S = SegalPrecat.of(S)
    return S, BisimplicialMap(S, A, [A.ref(x) for x in keep])


def vertical_collapse(A: Bisimplicial) -> Tuple[Bisimplicial, BisimplicialMap]:
    """Remove vertically free pairs of cells for as long as possible.

    A pair ``(s, t)`` with ``s`` the vertical face of ``t`` qualifies when
    ``t`` is a face of nothing and ``s`` is referenced exactly once.  Every
    column then shrinks by elementary collapses, so the inclusion of the
    result is a homotopy equivalence on each column and on realizations.
    """
    n = len(A)
    uses = [0] * n
    users: List[List[int]] = [[] for _ in range(n)]
    for x in A.ids():
        for faces in (A.hfaces(x), A.vfaces(x)):
            for _, _, y in faces:
                uses[y] += 1
                users[y].append(x)
    alive = [True] * n
    heap = [y for y in A.ids() if uses[y] == 1 and A.bidegree(y)[0] > 0]
    heapq.heapify(heap)

    def drop(x):
        alive[x] = False
        for faces in (A.hfaces(x), A.vfaces(x)):
            for _, _, y in faces:
                uses[y] -= 1
                if uses[y] == 1 and alive[y] and A.bidegree(y)[0] > 0:
                    heapq.heappush(heap, y)

    while heap:
        s = heapq.heappop(heap)
        if not alive[s] or uses[s] != 1:
            continue
        t = next(x for x in users[s] if alive[x])
        if uses[t] != 0:
            continue
        p, q = A.bidegree(s)
        if A.bidegree(t) != (p, q + 1):
            continue
        if not any(y == s and len(sv) == q + 1 for _, sv, y in A.vfaces(t)):
            continue
        drop(t)
        drop(s)
    if all(alive):
        return A, BisimplicialMap.identity(A)
    return sub_bisimplicial(A, [x for x in A.ids() if alive[x]])
