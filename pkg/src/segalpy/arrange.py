"""The arrangement operations on one-object Segal precats.

``arr(A, m)`` glues ``h(m) (x) C`` onto ``A`` along
``U = (Spine(m) (x) C) u (h(m) (x) A_{m/})``, where ``C`` is a cylinder on
the Segal map ``A_{m/} -> A_{1/}^m``.  The variants only change ``C``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import monotone as mono
from .bisimplicial import (Bisimplicial, BisimplicialBuilder, BisimplicialMap, SegalPrecat,
                           bis_pushout, bis_ref, column, diagonal_homology, exterior_map,
                           exterior_product, segal_map,
                           vertical_collapse)
from .errors import CapExceeded, DisconnectedA1, MultiObject
from .homology import HomologyGroup, relative_complex
from .simplicial import (Builder, SimplicialMap, SimplicialSet, closure, collapse, component_of,
                         disjoint_union, mapping_cylinder, pi0, point, spine,
                         standard_simplex, subcomplex)

CYLINDERS = ("relative", "full")


# ----------------------------------------------------------------------
# steps and schedules
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ArrangeStep:
    kind: str
    m: Optional[int] = None

    KINDS = ("Arr", "Arr0Only", "Arr1Only", "Invert")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown step kind {self.kind!r}")
        if self.kind == "Invert":
            if self.m is not None:
                raise ValueError("Invert takes no m")
        elif self.m is None or self.m < 2:
            raise ValueError(f"{self.kind} needs m >= 2")

    def to_json(self) -> dict:
        return {"kind": self.kind} if self.m is None else {"kind": self.kind, "m": self.m}

    @classmethod
    def from_json(cls, doc: dict) -> "ArrangeStep":
        return cls(doc["kind"], doc.get("m"))

    def __str__(self):
        return self.kind if self.m is None else f"{self.kind} {self.m}"


@dataclass(frozen=True)
class Schedule:
    n: int
    steps: Tuple[ArrangeStep, ...]

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def to_json(self) -> list:
        return [s.to_json() for s in self.steps]

    @classmethod
    def from_json(cls, n: int, doc: list) -> "Schedule":
        return cls(n, tuple(ArrangeStep.from_json(d) for d in doc))


def default_schedule(n: int) -> Schedule:
    """``Arr 2, ..., Arr n+2`` repeated ``n + 2`` times."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    rnd = [ArrangeStep("Arr", m) for m in range(2, n + 3)]
    return Schedule(n, tuple(rnd * (n + 2)))


@dataclass
class StageTrace:
    step: Optional[ArrangeStep]
    cell_counts: Dict[Tuple[int, int], int]
    diag_homology: List[HomologyGroup]
    globular: bool
    objects: int
    seconds: float = 0.0
    column_counts: Dict[int, List[int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "step": None if self.step is None else self.step.to_json(),
            "cell_counts": {f"{p},{q}": c for (p, q), c in sorted(self.cell_counts.items())},
            "column_counts": {str(p): c for p, c in sorted(self.column_counts.items())},
            "diag_homology": [h.to_json() for h in self.diag_homology],
            "globular": self.globular,
            "objects": self.objects,
        }


def trace_of(A: Bisimplicial, step: Optional[ArrangeStep], seconds: float = 0.0,
             columns: Sequence[int] = (1,)) -> StageTrace:
    return StageTrace(step, A.counts(), diagonal_homology(A), A.is_globular(),
                      len(A.objects()), seconds,
                      {p: column(A, p).counts() for p in columns if p <= A.pcap})


# ----------------------------------------------------------------------
# the gluing shared by every variant
# ----------------------------------------------------------------------

def _require_one_object(A: Bisimplicial) -> None:
    if not A.is_globular() or len(A.objects()) != 1:
        raise MultiObject("arrangement operations need a globular precat with one object")


def attachment_index(p: int, m: int) -> List[Tuple[int, ...]]:
    """Monotone ``[p] -> [m]`` whose image lies in no principal edge."""
    return [f for f in mono.monotone_maps(p, m)
            if not any(set(f) <= {i - 1, i} for i in range(1, m + 1))]


def _glue(A: SegalPrecat, m: int, C: SimplicialSet, a: SimplicialMap,
          b: SimplicialMap) -> SegalPrecat:
    """``A u^U (h(m) (x) C)`` for ``a: A_{m/} -> C`` injective, ``b: C -> A_{1/}^m``."""
    Am = a.source
    projections = b.target.meta["projections"]
    cap = A.pcap
    h = standard_simplex(m, cap)
    sig, sig_incl = spine(m, cap)
    verts = {x: v for v, x in h.meta["simplex_index"].items()}

    SA = exterior_product(sig, Am)
    SC = exterior_product(sig, C)
    HA = exterior_product(h, Am)
    V = exterior_product(h, C)
    id_sig = SimplicialMap.identity(sig)
    id_h = SimplicialMap.identity(h)
    id_Am = SimplicialMap.identity(Am)
    id_C = SimplicialMap.identity(C)

    up = bis_pushout(exterior_map(sig_incl, id_Am, SA, HA), exterior_map(id_sig, a, SA, SC))
    U = up.space
    U_to_V = up.induced(exterior_map(id_h, a, HA, V), exterior_map(sig_incl, id_C, SC, V))

    base = A.basepoint
    keys_m = Am.meta["column_keys"]
    ev = [None] * len(HA)
    for (x, c), cell in HA.meta["exterior_index"].items():
        phi = verts[x]
        sh, y = keys_m[c]
        q = Am.dim(c)
        ev[cell] = A.apply((sh, mono.identity(q), y), phi, mono.identity(q))
    ev_map = BisimplicialMap(HA, A, ev)

    sig_verts = [verts[r[1]] for r in sig_incl.assignment]
    adj = [None] * len(SC)
    for (x, c), cell in SC.meta["exterior_index"].items():
        q = C.dim(c)
        vs = sig_verts[x]
        if len(vs) == 1:
            adj[cell] = ((0,), mono.constant(q), base)
        else:
            adj[cell] = bis_ref(A, 1, projections[vs[1] - 1](b.assignment[c]))
    adj_map = BisimplicialMap(SC, A, adj)

    U_to_A = up.induced(ev_map, adj_map)
    out = bis_pushout(U_to_A, U_to_V).space
    return SegalPrecat.of(out)


def _greedy_rel(g: SimplicialMap) -> List[int]:
    """A face-closed subcomplex on which ``g`` is injective, built greedily by id."""
    keep, used = set(), set()
    X = g.source
    for x in X.ids():
        op, y = g.assignment[x]
        if not mono.is_identity(op) or y in used:
            continue
        if all(z in keep for _, z in X.faces(x)):
            keep.add(x)
            used.add(y)
    return sorted(keep)


def _cylinder(g: SimplicialMap, cylinder: str, depth: Optional[int] = None,
              shrink: bool = True):
    """Cylinder on ``g``.

    With ``depth`` only ``a(X)`` and cells of dimension ``<= depth`` are
    kept; with ``shrink`` the rest is collapsed onto ``a(X)`` as far as
    elementary collapses allow.
    """
    if cylinder not in CYLINDERS:
        raise ValueError(f"unknown cylinder {cylinder!r}")
    rel = _greedy_rel(g) if cylinder == "relative" else None
    C, a, b = mapping_cylinder(g, rel)
    image = {r[1] for r in a.assignment}
    keep = set(collapse(C, image)) if shrink else set(C.ids())
    if depth is not None and depth < C.cap:
        keep = {x for x in keep if x in image or C.dim(x) <= depth}
    if len(keep) == len(C):
        return C, a, b
    S, incl = subcomplex(C, keep)
    back = {r[1]: i for i, r in enumerate(incl.assignment)}
    a2 = SimplicialMap(a.source, S, [(op, back[y]) for op, y in a.assignment])
    return S, a2, b @ incl


def _check_m(A: Bisimplicial, m: int) -> None:
    _require_one_object(A)
    if m < 2:
        raise ValueError("arrangement degree must be at least 2")
    if m > A.pcap:
        raise CapExceeded(f"arrangement degree {m} above pcap {A.pcap}")


def arr(A: SegalPrecat, m: int, cylinder: str = "relative",
        depth: Optional[int] = None) -> SegalPrecat:
    """Glue a cylinder on the Segal map in degree ``m`` back into ``A``.

    ``cylinder="full"`` uses ``(I x A_{m/}) u A_{1/}^m``.  The default
    ``"relative"`` first collapses ``I x L`` for a greedily chosen
    subcomplex ``L`` on which the Segal map is injective, then performs
    elementary collapses away from ``A_{m/}``; the result has the same
    homotopy type relative to ``A_{m/}`` and far fewer cells.

    ``depth`` asks only for a ``C`` whose map to the product is
    ``depth``-connected.  For ``depth >= 2`` that is the cylinder cut down
    to cells of dimension ``<= depth``; ``depth == 1`` joins the components
    of ``A_{m/}`` by edges, ``depth == 0`` adds a point per missed
    component and a negative depth takes ``C = A_{m/}``, which leaves
    ``A`` as it is.  The realization of ``A`` is unchanged for every choice.
    """
    _check_m(A, m)
    A = SegalPrecat.of(A)
    if depth is not None and depth < 0:
        return A
    if depth == 0:
        return _glue(A, m, *_points_for_components(segal_map(A, m, upto=1)))
    if depth == 1 and len(column(A, 1).vertices()) == 1:
        return _glue(A, m, *_joined_components(segal_map(A, m, upto=0)))
    g = segal_map(A, m, upto=depth)
    C, a, b = _cylinder(g, cylinder, depth)
    return _glue(A, m, C, a, b)


def _points_for_components(g: SimplicialMap):
    """``A_{m/}`` plus one point for each component of the target it misses."""
    Am, P = g.source, g.target
    comp = component_of(P)
    hit = {comp[P.apply(g.assignment[v], (0,))[1]] for v in Am.vertices()}
    missing = sorted(set(comp.values()) - hit)
    pts = [point(Am.cap) for _ in missing]
    C, incls = disjoint_union([Am] + pts)
    assignment = [None] * len(C)
    for x in Am.ids():
        assignment[incls[0].assignment[x][1]] = g.assignment[x]
    for rep, inc in zip(missing, incls[1:]):
        assignment[inc.assignment[0][1]] = P.ref(rep)
    return C, incls[0], SimplicialMap(C, P, assignment)


def _joined_components(g: SimplicialMap):
    """``A_{m/}`` with an edge from its first component to each other one.

    Only used when the target has a single vertex, which every new edge
    is sent to.
    """
    Am, P = g.source, g.target
    (v0,) = P.vertices()
    comps = pi0(Am)
    b = Builder(Am.cap)
    for x in Am.ids():
        b.add(Am.dim(x), Am.faces(x), Am.name(x))
    assignment = list(g.assignment)
    if Am.cap >= 1:
        root = comps[0][0]
        for comp in comps[1:]:
            b.add(1, (((0,), comp[0]), ((0,), root)), f"join{comp[0]}")
            assignment.append(((0, 0), v0))
    C = b.build()
    a = SimplicialMap(Am, C, [Am.ref(x) for x in Am.ids()])
    return C, a, SimplicialMap(C, P, assignment)


def arr0only(A: SegalPrecat, m: int) -> SegalPrecat:
    """Add one vertex for each component of ``A_{1/}^m`` missed by the Segal map."""
    _check_m(A, m)
    A = SegalPrecat.of(A)
    return _glue(A, m, *_points_for_components(segal_map(A, m)))


def arr1only(A: SegalPrecat, m: int, cylinder: str = "relative",
             depth: Optional[int] = None) -> SegalPrecat:
    """Cylinder on ``A_{m/} -> im(A_{m/}) u (1-skeleton components touching it)``."""
    _check_m(A, m)
    A = SegalPrecat.of(A)
    g = segal_map(A, m)
    Am, P = g.source, g.target
    comp = component_of(P)
    image = closure(P, [y for _, y in g.assignment])
    touched = {comp[v] for v in image if P.dim(v) == 0}
    low = [x for x in P.ids() if P.dim(x) <= 1
           and all(comp[v] in touched for v in _vertices_of(P, x))]
    Y, y_incl = subcomplex(P, image | set(low))
    back = {r[1]: i for i, r in enumerate(y_incl.assignment)}
    g2 = SimplicialMap(Am, Y, [(op, back[y]) for op, y in g.assignment])
    C, a, b = _cylinder(g2, cylinder, depth)
    return _glue(A, m, C, a, y_incl @ b)


def _vertices_of(X: SimplicialSet, x: int) -> List[int]:
    if X.dim(x) == 0:
        return [x]
    return [y for y in closure(X, [x]) if X.dim(y) == 0]


# ----------------------------------------------------------------------
# formal inversion and truncation
# ----------------------------------------------------------------------

def invertible_nerve(cap: int) -> SimplicialSet:
    """Nerve of the groupoid with two objects and one isomorphism between them.

    Nondegenerate ``k``-simplices are the alternating words of length
    ``k + 1`` in {0, 1}; the edge ``(0, 1)`` has id 2.
    """
    b = Builder(cap)
    index: Dict[Tuple[int, ...], int] = {}
    for k in range(cap + 1):
        for start in (0, 1):
            word = tuple((start + i) & 1 for i in range(k + 1))
            fx = []
            for i in range(k + 1 if k else 0):
                rest = word[:i] + word[i + 1:]
                vals, comp = [0], [rest[0]]
                for j in range(1, len(rest)):
                    if rest[j] != rest[j - 1]:
                        comp.append(rest[j])
                    vals.append(len(comp) - 1)
                fx.append((tuple(vals), index[tuple(comp)]))
            index[word] = b.add(k, fx, "".join(map(str, word)))
    out = b.build()
    out.meta["word_index"] = index
    return out


def invert_all(A: SegalPrecat) -> SegalPrecat:
    """Glue an invertible-arrow precat along every element ``f`` of ``A_{1,0}``."""
    _require_one_object(A)
    A = SegalPrecat.of(A)
    qcap = A.qcap
    pt = point(qcap)
    h1 = standard_simplex(1, A.pcap)
    N = invertible_nerve(A.pcap)
    wi = N.meta["word_index"]
    I = exterior_product(h1, pt)
    Ibar = exterior_product(N, pt)
    h_to_N = SimplicialMap(h1, N, [N.ref(wi[(0,)]), N.ref(wi[(1,)]), N.ref(wi[(0, 1)])])
    incl = exterior_map(h_to_N, SimplicialMap.identity(pt), I, Ibar)
    col1 = column(A, 1)
    arrows = [bis_ref(A, 1, ((0,), c)) for c in col1.vertices()]
    base = A.basepoint
    out: Bisimplicial = A
    for f in arrows:
        ix = I.meta["exterior_index"]
        assignment = [None] * len(I)
        assignment[ix[(0, 0)]] = ((0,), (0,), base)
        assignment[ix[(1, 0)]] = ((0,), (0,), base)
        assignment[ix[(2, 0)]] = f
        out = bis_pushout(BisimplicialMap(I, out, assignment), incl).space
    return SegalPrecat.of(out)


def tau_leq1(A: Bisimplicial) -> SimplicialSet:
    """The simplicial set ``p -> pi_0(A_{p/})`` with its induced structure."""
    comps: List[Dict[int, int]] = []
    reps: List[List[int]] = []
    for p in range(A.pcap + 1):
        col = column(A, p)
        comps.append(component_of(col))
        reps.append([c[0] for c in pi0(col)])

    def cls(p, cref):
        """Component of a column-``p`` vertex given as a bisimplicial ref."""
        sh, sv, x = cref
        col = column(A, p)
        return comps[p][col.meta["column_index"][(sh, x)]]

    def vertex_ref(p, v):
        sh, x = column(A, p).meta["column_keys"][v]
        return (sh, (0,), x)

    b = Builder(A.pcap)
    normal: List[Dict[int, tuple]] = []
    for p in range(A.pcap + 1):
        nf: Dict[int, tuple] = {}
        if p > 0:
            for j in range(p):
                sigma = mono.codegeneracy(p - 1, j)
                for c in reps[p - 1]:
                    d = cls(p, A.horizontal(vertex_ref(p - 1, c), sigma))
                    if d not in nf:
                        s, y = normal[p - 1][c]
                        nf[d] = (mono.compose(s, sigma), y)
        for c in reps[p]:
            if c in nf:
                continue
            fx = []
            for i in range(p + 1 if p else 0):
                d = cls(p - 1, A.horizontal(vertex_ref(p, c), mono.coface(p, i)))
                fx.append(normal[p - 1][d])
            nf[c] = (mono.identity(p), b.add(p, fx))
        normal.append(nf)
    return b.build()


# ----------------------------------------------------------------------
# diagnostics and the driver
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ArrangedStatus:
    m: int
    k: int
    arranged: bool
    exact: bool
    detail: str

    def to_json(self) -> dict:
        return {"m": self.m, "k": self.k, "arranged": self.arranged,
                "mode": "exact" if self.exact else "proxy", "detail": self.detail}


def arranged_status(A: SegalPrecat, m: int, k: int) -> ArrangedStatus:
    """Whether the Segal map in degree ``m`` is ``k``-connected.

    ``k = 0`` asks for a bijection on components and is decided exactly.
    For ``k >= 1`` the component part is exact and the rest is a
    homological proxy: the relative homology of the cylinder vanishes
    through degree ``k``.
    """
    _require_one_object(A)
    if m > A.pcap:
        raise CapExceeded(f"degree {m} above pcap {A.pcap}")
    if m == 1:
        return ArrangedStatus(m, k, True, True, "the Segal map in degree 1 is the identity")
    g = segal_map(A, m)
    Am, P = g.source, g.target
    comp_src = component_of(Am)
    comp_tgt = component_of(P)
    image = {}
    for v in Am.vertices():
        w = comp_tgt[P.apply(g.assignment[v], (0,))[1]]
        image.setdefault(w, set()).add(comp_src[v])
    surjective = len(image) == len(set(comp_tgt.values()))
    injective = all(len(s) == 1 for s in image.values())
    if k == 0:
        # components must correspond one to one, the reading used when two
        # vertices of A_{2/} over the single product vertex get joined
        return ArrangedStatus(m, k, surjective and injective, True,
                              f"{len(set(comp_src.values()))} components onto "
                              f"{len(set(comp_tgt.values()))}, {len(image)} hit")
    if not (surjective and injective):
        return ArrangedStatus(m, k, False, True, "not a bijection on components")
    if k + 1 > Am.cap:
        raise CapExceeded(f"connectivity {k} needs cap above {k}")
    C, a, _ = _cylinder(g, "relative")
    cc = relative_complex(C, [r[1] for r in a.assignment])
    groups = [cc.homology(i) for i in range(1, k + 1)]
    ok = all(h.is_zero() for h in groups)
    return ArrangedStatus(m, k, ok, False,
                          "relative homology through degree "
                          f"{k}: {', '.join(str(h) for h in groups)}")


def apply_step(A: SegalPrecat, step: ArrangeStep, cylinder: str = "relative",
               depth: Optional[int] = None) -> SegalPrecat:
    if step.kind == "Arr":
        return arr(A, step.m, cylinder, depth)
    if step.kind == "Arr0Only":
        return arr0only(A, step.m)
    if step.kind == "Arr1Only":
        return arr1only(A, step.m, cylinder, depth)
    return invert_all(A)


def default_depths(n: int) -> List[int]:
    """Cylinder depths for the steps of :func:`default_schedule`.

    Round ``r`` (from 0) raises the arrangement level of degree ``m`` to
    ``r`` as long as ``m + r <= n + 2``; degree 2 goes on to level
    ``n + 1`` in the last round, which supplies the ``(n + 1)``-cells of
    the loop column that fix its ``n``-type.  A level-``r`` step only needs
    cells of dimension ``<= r``.  Other steps get depth ``-1``: their level
    was already reached, and they add nothing.
    """
    return [r if m + r <= n + 2 or (m == 2 and r == n + 1) else -1
            for r in range(n + 2) for m in range(2, n + 3)]


def run_schedule(A: SegalPrecat, schedule: Schedule, cylinder: str = "relative",
                 depths: Optional[Sequence[Optional[int]]] = None, reduce: bool = False,
                 on_stage=None) -> Tuple[SegalPrecat, List[StageTrace]]:
    """Apply the steps in order; the first trace describes the input.

    ``depths`` gives the ``depth`` of each step (see :func:`arr`); by
    default every step glues the whole cylinder.  ``reduce`` removes
    vertically free pairs of cells after each step.
    """
    if depths is not None and len(depths) != len(schedule):
        raise ValueError("one depth per step is required")
    _require_one_object(A)
    if len(pi0(column(A, 1))) != 1:
        raise DisconnectedA1("the first column has more than one component")
    traces = [trace_of(A, None)]
    if on_stage:
        on_stage(traces[-1])
    for i, step in enumerate(schedule):
        t0 = time.perf_counter()
        depth = depths[i] if depths is not None else None
        A = apply_step(A, step, cylinder, depth)
        if reduce:
            A = SegalPrecat.of(vertical_collapse(A)[0])
        traces.append(trace_of(A, step, time.perf_counter() - t0))
        if on_stage:
            on_stage(traces[-1])
    return A, traces
