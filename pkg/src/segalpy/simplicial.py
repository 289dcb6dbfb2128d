"""Finitely presented simplicial sets.

A :class:`SimplicialSet` stores only its nondegenerate simplices.  Every
simplex, degenerate or not, is addressed by a *reference* ``(op, target)``:
``target`` is the id of a nondegenerate simplex of dimension ``a`` and
``op`` is a surjection ``[k] -> [a]`` given by its value tuple.  By the
Eilenberg-Zilber lemma this presentation is unique, so two references denote
the same simplex exactly when they are equal as tuples.

Each nondegenerate ``p``-simplex carries its ``p + 1`` faces as references.
All other structure (arbitrary simplicial operators, maps, products) is
computed from these faces, never above the dimension cap.
"""

from __future__ import annotations

import heapq
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from . import monotone as mono
from .budget import charge
from .errors import NonInjectiveLeg

Ref = Tuple[Tuple[int, ...], int]


class SimplexRef(NamedTuple):
    """Normal-form address of a simplex: ``op`` applied to ``target``."""

    op: Tuple[int, ...]
    target: int


class SimplicialSet:
    """A simplicial set truncated at dimension ``cap``.

    Ids are consecutive integers assigned in construction order; faces of a
    simplex always point at smaller ids.
    """

    __slots__ = ("cap", "_dim", "_faces", "_by_dim", "names", "meta", "_cache")

    def __init__(self, cap: int, dims: List[int], faces: List[tuple],
                 names: Optional[List[str]] = None):
        self.cap = cap
        self._dim = dims
        self._faces = faces
        self._by_dim: List[List[int]] = [[] for _ in range(cap + 1)]
        for x, d in enumerate(dims):
            self._by_dim[d].append(x)
        self.names = names
        self.meta: dict = {}
        self._cache: Dict[tuple, Ref] = {}

    # -- basic queries -------------------------------------------------
    def __len__(self) -> int:
        return len(self._dim)

    def __repr__(self) -> str:
        return f"SimplicialSet(cap={self.cap}, dims={self.counts()})"

    def counts(self) -> List[int]:
        """Number of nondegenerate simplices in each dimension 0..cap."""
        return [len(ids) for ids in self._by_dim]

    def simplices(self, k: int) -> List[int]:
        if k < 0 or k > self.cap:
            return []
        return self._by_dim[k]

    def ids(self) -> range:
        return range(len(self._dim))

    def dim(self, x: int) -> int:
        return self._dim[x]

    def faces(self, x: int) -> tuple:
        return self._faces[x]

    def name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    def vertices(self) -> List[int]:
        return self._by_dim[0] if self.cap >= 0 else []

    def ref(self, x: int) -> Ref:
        return (mono.identity(self._dim[x]), x)

    # -- simplicial operators ------------------------------------------
    def apply(self, ref: Ref, theta: Tuple[int, ...]) -> Ref:
        """The simplex ``theta^*(ref)`` in normal form."""
        s, x = ref
        inj, surj = mono.factor(mono.compose(s, theta))
        s2, y = self._restrict(x, inj)
        return (mono.compose(s2, surj), y)

    def _restrict(self, x: int, delta: Tuple[int, ...]) -> Ref:
        d = self._dim[x]
        if len(delta) == d + 1:
            return (mono.identity(d), x)
        key = (x, delta)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        j = d
        while j in delta:
            j -= 1
        rest = tuple(v if v < j else v - 1 for v in delta)
        out = self.apply(self._faces[x][j], rest)
        self._cache[key] = out
        return out

    def face(self, ref: Ref, i: int) -> Ref:
        k = len(ref[0]) - 1
        return self.apply(ref, mono.coface(k, i))

    def degeneracy(self, ref: Ref, i: int) -> Ref:
        k = len(ref[0]) - 1
        return (mono.compose(ref[0], mono.codegeneracy(k, i)), ref[1])

    def all_simplices(self, k: int) -> Iterable[Ref]:
        """Every simplex of dimension ``k``, degenerate ones included."""
        for a in range(min(k, self.cap) + 1):
            surjs = mono.surjections(k, a)
            for x in self._by_dim[a]:
                for s in surjs:
                    yield (s, x)

    def is_point(self) -> bool:
        return len(self._dim) == 1 and self._dim[0] == 0

    def recap(self, cap: int) -> "SimplicialSet":
        """Same presentation with a different cap.

        Lowering the cap drops simplices above it.  Raising it declares that
        the presentation has no nondegenerate simplices above the old cap.
        """
        if cap >= self.cap:
            out = SimplicialSet(cap, list(self._dim), list(self._faces),
                                list(self.names) if self.names else None)
            return out
        return skeleton(self, cap, cap=cap)


class Builder:
    """Incremental constructor for :class:`SimplicialSet`."""

    def __init__(self, cap: int):
        self.cap = cap
        self.dims: List[int] = []
        self.faces: List[tuple] = []
        self.names: List[str] = []

    def add(self, dim: int, faces: Sequence[Ref] = (), name: Optional[str] = None) -> int:
        if dim > self.cap:
            raise ValueError(f"simplex of dimension {dim} above cap {self.cap}")
        x = len(self.dims)
        self.dims.append(dim)
        self.faces.append(tuple(faces))
        self.names.append(str(x) if name is None else name)
        charge()
        return x

    def build(self, keep_names: bool = True) -> SimplicialSet:
        return SimplicialSet(self.cap, self.dims, self.faces,
                             self.names if keep_names else None)


class SimplicialMap:
    """A map of simplicial sets, given on nondegenerate simplices.

    ``assignment[x]`` is the reference in ``target`` of the image of the
    nondegenerate simplex ``x`` of ``source``.
    """

    __slots__ = ("source", "target", "assignment")

    def __init__(self, source: SimplicialSet, target: SimplicialSet, assignment: List[Ref]):
        self.source = source
        self.target = target
        self.assignment = assignment

    def __call__(self, ref: Ref) -> Ref:
        s, x = ref
        return self.target.apply(self.assignment[x], s)

    def __matmul__(self, other: "SimplicialMap") -> "SimplicialMap":
        """``self @ other`` applies ``other`` first."""
        return SimplicialMap(other.source, self.target,
                             [self(r) for r in other.assignment])

    def is_injective(self) -> bool:
        seen = set()
        for op, y in self.assignment:
            if not mono.is_identity(op) or y in seen:
                return False
            seen.add(y)
        return True

    def violations(self) -> List[str]:
        """Face-compatibility failures, empty when the map is simplicial."""
        out = []
        src, tgt = self.source, self.target
        for x in src.ids():
            p = src.dim(x)
            fx = self.assignment[x]
            if len(fx[0]) != p + 1:
                out.append(f"image of {src.name(x)} has the wrong dimension")
                continue
            for i in range(p + 1 if p > 0 else 0):
                if self(src.faces(x)[i]) != tgt.face(fx, i):
                    out.append(f"map does not commute with d_{i} on {src.name(x)}")
        return out

    @classmethod
    def identity(cls, X: SimplicialSet) -> "SimplicialMap":
        return cls(X, X, [X.ref(x) for x in X.ids()])


class PushoutResult(NamedTuple):
    space: SimplicialSet
    left: SimplicialMap
    right: SimplicialMap

    def induced(self, h_left: SimplicialMap, h_right: SimplicialMap) -> SimplicialMap:
        """The map out of the pushout determined by a compatible cocone."""
        P = self.space
        origin = P.meta["pushout_origin"]
        assignment = []
        for x in P.ids():
            side, y = origin[x]
            assignment.append((h_left if side == 0 else h_right).assignment[y])
        return SimplicialMap(P, h_left.target, assignment)


class CylinderResult(NamedTuple):
    space: SimplicialSet
    a: SimplicialMap
    b: SimplicialMap


# ----------------------------------------------------------------------
# standard pieces
# ----------------------------------------------------------------------

def standard_simplex(m: int, cap: int) -> SimplicialSet:
    """The representable ``h(m)`` truncated at ``cap``."""
    b = Builder(cap)
    index = {}
    for k in range(min(m, cap) + 1):
        for verts in mono.injections(k, m):
            faces = ()
            if k > 0:
                faces = tuple((mono.identity(k - 1), index[verts[:i] + verts[i + 1:]])
                              for i in range(k + 1))
            index[verts] = b.add(k, faces, "".join(map(str, verts)) if m < 10 else
                                 ",".join(map(str, verts)))
    out = b.build()
    out.meta["simplex_index"] = index
    return out


def point(cap: int) -> SimplicialSet:
    return standard_simplex(0, cap)


def spine(m: int, cap: int) -> Tuple[SimplicialSet, SimplicialMap]:
    """The union of the principal edges of ``h(m)`` and its inclusion."""
    if m < 1:
        raise ValueError("spine needs m >= 1")
    h = standard_simplex(m, cap)
    idx = h.meta["simplex_index"]
    keep = [idx[(i,)] for i in range(m + 1)]
    if cap >= 1:
        keep += [idx[(i - 1, i)] for i in range(1, m + 1)]
    return subcomplex(h, keep)


def subcomplex(X: SimplicialSet, ids: Iterable[int], cap: Optional[int] = None
               ) -> Tuple[SimplicialSet, SimplicialMap]:
    """The sub-simplicial set on the nondegenerate simplices ``ids``."""
    keep = sorted(set(ids))
    new = {x: i for i, x in enumerate(keep)}
    cap = X.cap if cap is None else cap
    dims, faces, names = [], [], []
    for x in keep:
        fx = []
        for op, y in X.faces(x):
            if y not in new:
                raise ValueError(f"{X.name(x)} has a face outside the subcomplex")
            fx.append((op, new[y]))
        dims.append(X.dim(x))
        faces.append(tuple(fx))
        names.append(X.name(x))
    S = SimplicialSet(cap, dims, faces, names)
    incl = SimplicialMap(S, X, [X.ref(x) for x in keep])
    return S, incl


def skeleton(X: SimplicialSet, k: int, cap: Optional[int] = None) -> SimplicialSet:
    """Drop every nondegenerate simplex of dimension above ``k``."""
    if k > X.cap:
        raise ValueError(f"skeleton dimension {k} above cap {X.cap}")
    return subcomplex(X, [x for x in X.ids() if X.dim(x) <= k], cap)[0]


def closure(X: SimplicialSet, ids: Iterable[int]) -> set:
    """Smallest face-closed set of nondegenerate simplices containing ``ids``."""
    out = set()
    stack = list(ids)
    while stack:
        x = stack.pop()
        if x in out:
            continue
        out.add(x)
        stack.extend(y for _, y in X.faces(x))
    return out


def collapse(X: SimplicialSet, protected: Iterable[int] = ()) -> List[int]:
    """Ids left after greedy elementary collapses avoiding ``protected``.

    A pair ``(s, t)`` is removed when ``t`` is a face of nothing and ``s``
    occurs exactly once among all face references, as a nondegenerate face
    of ``t``.  The remaining subcomplex is a deformation retract of ``X``.
    """
    keep = set(protected)
    alive = [True] * len(X)
    uses = [0] * len(X)
    users: List[List[int]] = [[] for _ in X.ids()]
    for x in X.ids():
        for _, y in X.faces(x):
            uses[y] += 1
            users[y].append(x)
    heap = [y for y in X.ids() if uses[y] == 1 and y not in keep]
    heapq.heapify(heap)

    def drop(x):
        alive[x] = False
        for _, y in X.faces(x):
            uses[y] -= 1
            if uses[y] == 1 and y not in keep and alive[y]:
                heapq.heappush(heap, y)

    while heap:
        s = heapq.heappop(heap)
        if not alive[s] or uses[s] != 1:
            continue
        t = next(x for x in users[s] if alive[x])
        if t in keep or uses[t] != 0:
            continue
        if not any(y == s and mono.is_identity(op) for op, y in X.faces(t)):
            continue
        drop(t)
        drop(s)
    return [x for x in X.ids() if alive[x]]


def pi0(X: SimplicialSet) -> List[List[int]]:
    """Connected components as sorted vertex lists, ordered by least vertex."""
    parent = {v: v for v in X.vertices()}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in X.simplices(1):
        a, b = find(X.faces(e)[0][1]), find(X.faces(e)[1][1])
        if a != b:
            if a < b:
                a, b = b, a
            parent[a] = b
    groups: Dict[int, List[int]] = {}
    for v in X.vertices():
        groups.setdefault(find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


def component_of(X: SimplicialSet) -> Dict[int, int]:
    """Vertex id -> least vertex id of its component."""
    out = {}
    for comp in pi0(X):
        for v in comp:
            out[v] = comp[0]
    return out


def validate(X: SimplicialSet) -> List[str]:
    """Check normal forms, reference integrity and the simplicial identities."""
    out = []
    n = len(X)
    for x in X.ids():
        p = X.dim(x)
        fx = X.faces(x)
        if p == 0:
            if fx:
                out.append(f"vertex {X.name(x)} has faces")
            continue
        if len(fx) != p + 1:
            out.append(f"{X.name(x)} has {len(fx)} faces, expected {p + 1}")
            continue
        ok = True
        for i, (op, y) in enumerate(fx):
            if not (0 <= y < n) or y >= x:
                out.append(f"d_{i} of {X.name(x)} refers to an unknown simplex")
                ok = False
            elif len(op) != p or not mono.is_surjection(op) or op[-1] != X.dim(y):
                out.append(f"d_{i} of {X.name(x)} is not in normal form "
                           f"(op {list(op)} onto a {X.dim(y)}-simplex)")
                ok = False
        if not ok or p < 2:
            continue
        for j in range(p + 1):
            for i in range(j):
                lhs = X.face(fx[j], i)
                rhs = X.face(fx[i], j - 1)
                if lhs != rhs:
                    out.append(f"d_{i} d_{j} != d_{j - 1} d_{i} on {X.name(x)}")
    return out


# ----------------------------------------------------------------------
# products
# ----------------------------------------------------------------------

def _normal_tuple(refs: Sequence[Ref]):
    ops = [r[0] for r in refs]
    sigma = mono.common_flattening(ops)
    if mono.is_identity(sigma):
        return sigma, tuple(refs)
    sec = mono.section(sigma)
    return sigma, tuple((mono.compose(op, sec), y) for op, y in refs)


def _key_dim(key: tuple) -> int:
    return len(key[0][0]) - 1


def _key_faces(factors, key):
    k = _key_dim(key)
    return [_normal_tuple([F.apply(r, mono.coface(k, i)) for F, r in zip(factors, key)])
            for i in range(k + 1)]


def product_many(factors: Sequence[SimplicialSet], upto: Optional[int] = None,
                 extra: Iterable[tuple] = ()) -> Tuple[SimplicialSet, List[SimplicialMap]]:
    """The cartesian product of several simplicial sets with a common cap.

    Nondegenerate ``k``-simplices are tuples of ``k``-simplices of the
    factors whose degeneracy operators share no flat step.

    With ``upto`` only the ``upto``-skeleton is enumerated, together with
    the face closure of the nondegenerate keys in ``extra``.
    """
    if not factors:
        raise ValueError("product of no factors")
    cap = factors[0].cap
    if any(F.cap != cap for F in factors):
        raise ValueError("product factors must share a cap")
    keys: List[tuple] = []
    dims: List[int] = []
    faces: List[tuple] = []
    index: Dict[tuple, int] = {}
    full_upto = cap if upto is None else min(upto, cap)
    wanted: Dict[int, set] = {}
    stack = [key for key in extra if _key_dim(key) > full_upto]
    while stack:
        key = stack.pop()
        bucket = wanted.setdefault(_key_dim(key), set())
        if key in bucket:
            continue
        bucket.add(key)
        for _, nk in _key_faces(factors, key):
            if _key_dim(nk) > full_upto:
                stack.append(nk)
    for k in range(cap + 1):
        if k > full_upto:
            new_keys = sorted(wanted.get(k, ()))
            charge(len(new_keys))
            for key in new_keys:
                index[key] = len(keys)
                keys.append(key)
                dims.append(k)
                faces.append(tuple((sigma, index[nk]) for sigma, nk in _key_faces(factors, key)))
            continue
        full = (1 << k) - 1
        per_factor = []
        for F in factors:
            entries = []
            for s, x in F.all_simplices(k):
                mask = 0
                for j in range(k):
                    if s[j] == s[j + 1]:
                        mask |= 1 << j
                entries.append(((s, x), mask))
            per_factor.append(entries)
        if any(not e for e in per_factor):
            continue
        last: Dict[int, List[Ref]] = {}
        for ref, mask in per_factor[-1]:
            last.setdefault(mask, []).append(ref)
        last_masks = sorted(last)
        new_keys: List[tuple] = []

        def walk(i, acc, running):
            if i == len(factors) - 1:
                for mask in last_masks:
                    if mask & running == 0:
                        for ref in last[mask]:
                            new_keys.append(acc + (ref,))
                return
            for ref, mask in per_factor[i]:
                walk(i + 1, acc + (ref,), running & mask)

        walk(0, (), full)
        new_keys.sort()
        charge(len(new_keys))
        for key in new_keys:
            x = len(keys)
            index[key] = x
            keys.append(key)
            dims.append(k)
            if k == 0:
                faces.append(())
                continue
            fx = []
            for i in range(k + 1):
                delta = mono.coface(k, i)
                sigma, nk = _normal_tuple([F.apply(r, delta) for F, r in zip(factors, key)])
                fx.append((sigma, index[nk]))
            faces.append(tuple(fx))
    P = SimplicialSet(cap, dims, faces)
    P.meta["product_index"] = index
    P.meta["product_keys"] = keys
    projections = [SimplicialMap(P, F, [key[c] for key in keys])
                   for c, F in enumerate(factors)]
    P.meta["projections"] = projections
    return P, projections


def product(X: SimplicialSet, Y: SimplicialSet) -> Tuple[SimplicialSet, List[SimplicialMap]]:
    """Binary product with its two projections."""
    return product_many([X, Y])


def into_product(P: SimplicialSet, components: Sequence[SimplicialMap]) -> SimplicialMap:
    """The map into a product built by :func:`product_many` with given components."""
    index = P.meta["product_index"]
    src = components[0].source
    assignment = []
    for x in src.ids():
        sigma, key = _normal_tuple([f.assignment[x] for f in components])
        assignment.append((sigma, index[key]))
    return SimplicialMap(src, P, assignment)


def product_of_maps(maps: Sequence[SimplicialMap], source: SimplicialSet,
                    target: SimplicialSet) -> SimplicialMap:
    """``f_1 x ... x f_n`` between two products built by :func:`product_many`."""
    index = target.meta["product_index"]
    assignment = []
    for key in source.meta["product_keys"]:
        sigma, nk = _normal_tuple([f(r) for f, r in zip(maps, key)])
        assignment.append((sigma, index[nk]))
    return SimplicialMap(source, target, assignment)


# ----------------------------------------------------------------------
# pushouts and cylinders
# ----------------------------------------------------------------------

def pushout(f: SimplicialMap, incl: SimplicialMap) -> PushoutResult:
    """Pushout of ``A <-f- B' -incl-> B`` with ``incl`` injective.

    Nondegenerate simplices of the result are those of ``A`` (same ids)
    followed by those of ``B`` outside the image of ``incl``.
    """
    A, B, Bp = f.target, incl.target, incl.source
    if f.source is not Bp:
        raise ValueError("pushout legs must share their source")
    if A.cap != B.cap:
        raise ValueError("pushout needs equal caps")
    if not incl.is_injective():
        raise NonInjectiveLeg("the inclusion leg of the pushout is not injective")
    hit = {ref[1]: u for u, ref in enumerate(incl.assignment)}
    dims = list(A._dim)
    faces = list(A._faces)
    names = [A.name(x) for x in A.ids()]
    origin = [(0, x) for x in A.ids()]
    new: Dict[int, int] = {}
    for y in B.ids():
        if y in hit:
            continue
        fy = []
        for op, z in B.faces(y):
            if z in hit:
                fy.append(A.apply(f.assignment[hit[z]], op))
            else:
                fy.append((op, new[z]))
        new[y] = len(dims)
        dims.append(B.dim(y))
        faces.append(tuple(fy))
        names.append(B.name(y))
        origin.append((1, y))
    charge(len(new))
    P = SimplicialSet(A.cap, dims, faces, names)
    P.meta["pushout_origin"] = origin
    left = SimplicialMap(A, P, [A.ref(x) for x in A.ids()])
    right = []
    for y in B.ids():
        if y in hit:
            right.append(f.assignment[hit[y]])
        else:
            right.append((mono.identity(B.dim(y)), new[y]))
    return PushoutResult(P, left, SimplicialMap(B, P, right))


def _end_inclusion(IX: SimplicialSet, X: SimplicialSet, end: int) -> SimplicialMap:
    index = IX.meta["product_index"]
    assignment = []
    for x in X.ids():
        k = X.dim(x)
        key = ((mono.constant(k), end), (mono.identity(k), x))
        assignment.append((mono.identity(k), index[key]))
    return SimplicialMap(X, IX, assignment)


def interval(cap: int) -> SimplicialSet:
    """``h(1)``: vertices 0 and 1 (ids 0, 1) and one edge (id 2)."""
    return standard_simplex(1, cap)


def mapping_cylinder(g: SimplicialMap, rel: Optional[Iterable[int]] = None) -> CylinderResult:
    """Mapping cylinder ``C = (I x X) u_{{1} x X} Y`` of ``g: X -> Y``.

    ``a`` includes ``X`` as the 0-end, ``b`` collapses the cylinder onto
    ``Y`` and ``b @ a == g``.

    With ``rel`` (ids of a face-closed subcomplex ``L`` of ``X`` on which
    ``g`` is injective) the cylinder is taken relative to ``L``: ``I x L``
    is collapsed onto ``L`` first, so ``L`` is glued straight onto its image
    in ``Y``.  ``a`` stays injective and ``b`` is still a deformation
    retraction.
    """
    X, Y = g.source, g.target
    if X.cap != Y.cap:
        raise ValueError("mapping cylinder needs equal caps")
    I = interval(X.cap)
    IX, (pI, pX) = product_many([I, X])
    end0 = _end_inclusion(IX, X, 0)
    end1 = _end_inclusion(IX, X, 1)
    rel_ids = sorted(set(rel)) if rel else []
    if rel_ids:
        L, incl_L = subcomplex(X, rel_ids)
        if not (g @ incl_L).is_injective():
            raise NonInjectiveLeg("cylinder relative to a subcomplex where g is not injective")
        IL, (qI, qL) = product_many([I, L])
        j = product_of_maps([SimplicialMap.identity(I), incl_L], IL, IX)
        collapse = pushout(qL, j)
        M = collapse.space
        to_M = collapse.right
        # M -> Y: L via g, I x X via g o projection
        bM = collapse.induced(g @ incl_L, g @ pX)
    else:
        M = IX
        to_M = SimplicialMap.identity(IX)
        bM = g @ pX
    glued = pushout(g, to_M @ end1)
    C = glued.space
    a = glued.right @ to_M @ end0
    b = glued.induced(SimplicialMap.identity(Y), bM)
    return CylinderResult(C, a, b)


def disjoint_union(parts: Sequence[SimplicialSet]) -> Tuple[SimplicialSet, List[SimplicialMap]]:
    cap = parts[0].cap
    dims, faces, names, incls = [], [], [], []
    for Xp in parts:
        off = len(dims)
        for x in Xp.ids():
            dims.append(Xp.dim(x))
            faces.append(tuple((op, y + off) for op, y in Xp.faces(x)))
            names.append(Xp.name(x))
        incls.append(off)
    U = SimplicialSet(cap, dims, faces, names)
    maps = [SimplicialMap(Xp, U, [(mono.identity(Xp.dim(x)), x + off) for x in Xp.ids()])
            for Xp, off in zip(parts, incls)]
    return U, maps


def wedge(parts: Sequence[SimplicialSet]) -> SimplicialSet:
    """One-point union of sets that each have a single vertex."""
    cap = parts[0].cap
    b = Builder(cap)
    base = b.add(0, (), "*")
    for n, Xp in enumerate(parts):
        if len(Xp.vertices()) != 1:
            raise ValueError("wedge summands need exactly one vertex")
        new = {Xp.vertices()[0]: base}
        for x in Xp.ids():
            if x in new:
                continue
            fx = tuple((op, new[y]) for op, y in Xp.faces(x))
            new[x] = b.add(Xp.dim(x), fx, f"{Xp.name(x)}.{n}")
    return b.build()


def isomorphic(X: SimplicialSet, Y: SimplicialSet) -> bool:
    """Brute-force isomorphism test, meant for small sets."""
    if X.counts() != Y.counts():
        return False
    order = sorted(X.ids(), key=lambda x: (X.dim(x), x))
    candidates = {x: [y for y in Y.simplices(X.dim(x))] for x in order}
    match: Dict[int, int] = {}
    used = set()

    def consistent(x, y):
        for (op, z), (op2, w) in zip(X.faces(x), Y.faces(y)):
            if op != op2 or match.get(z) != w:
                return False
        return True

    def search(i):
        if i == len(order):
            return True
        x = order[i]
        for y in candidates[x]:
            if y in used or not consistent(x, y):
                continue
            match[x] = y
            used.add(y)
            if search(i + 1):
                return True
            del match[x]
            used.discard(y)
        return False

    return search(0)


def circle(cap: int) -> SimplicialSet:
    """``h(1)`` with its endpoints identified: one vertex, one edge."""
    b = Builder(cap)
    v = b.add(0, (), "*")
    if cap >= 1:
        b.add(1, (((0,), v), ((0,), v)), "c")
    return b.build()


def sphere(n: int, cap: int) -> SimplicialSet:
    """``h(n) / boundary``: one vertex and one nondegenerate ``n``-simplex."""
    b = Builder(cap)
    v = b.add(0, (), "*")
    if 1 <= n <= cap:
        b.add(n, [(mono.constant(n - 1), v)] * (n + 1), "e")
    return b.build()


def cone_on_sphere(n: int, cap: int) -> SimplicialSet:
    """A contractible one-vertex set: an ``n``-sphere cell ``e`` and an
    ``(n+1)``-simplex ``w`` with ``d_0 w = e`` and all other faces degenerate."""
    b = Builder(cap)
    v = b.add(0, (), "*")
    e = b.add(n, [(mono.constant(n - 1), v)] * (n + 1), "e")
    if n + 1 <= cap:
        fw = [(mono.identity(n), e)] + [(mono.constant(n), v)] * (n + 1)
        b.add(n + 1, fw, "w")
    return b.build()
