"""End-to-end drivers: loop models, loop homology, cross-checks and reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .arrange import Schedule, StageTrace, default_depths, default_schedule, run_schedule
from .bisimplicial import (BisimplicialMap, bis_pushout, column, constant_precat,
                           diagonal_homology)
from .bisimplicial import SegalPrecat
from .budget import cell_budget
from .errors import (BadBasepoint, InconsistentRun, NondegenerateEdges, NonInjectiveLeg,
                     NotSimplyConnected, ResourceLimit)
from .homology import HomologyGroup, homology_all
from .simplicial import SimplicialMap, SimplicialSet, pushout


@dataclass
class LoopModelResult:
    n: int
    model: SimplicialSet
    loop_homology: List[HomologyGroup]
    stages: List[StageTrace]
    input_fingerprint: Optional[str] = None
    schedule: Optional[Schedule] = None
    depths: Optional[List[int]] = None
    cap: int = 0
    space: Optional[SimplicialSet] = None

    @property
    def supported_degree(self) -> int:
        """Highest loop-homology degree the caps certify."""
        return min(self.n, self.cap - 2)


@dataclass
class PushoutRequest:
    """``A <-f- B -g-> C``; at least one leg must be injective."""

    A: SimplicialSet
    B: SimplicialSet
    C: SimplicialSet
    f: SimplicialMap
    g: SimplicialMap
    n: int


@dataclass
class Verdict:
    passed: bool
    failing_stage: Optional[int] = None
    reasons: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"passed": self.passed, "failing_stage": self.failing_stage,
                "reasons": list(self.reasons)}


def check_input(X: SimplicialSet) -> None:
    """The pipeline's input conditions: one vertex and no nondegenerate edges."""
    if len(X.vertices()) != 1:
        raise BadBasepoint(f"expected exactly one vertex, found {len(X.vertices())}")
    if X.cap >= 1 and X.simplices(1):
        raise NondegenerateEdges(f"found {len(X.simplices(1))} nondegenerate 1-simplices")


def check_run(stages: Sequence[StageTrace], X: SimplicialSet, n: int) -> Verdict:
    """Diagonal homology equals ``H_*(X)`` through degree ``n + 1`` at every stage;
    cells only grow; every stage is globular with one object."""
    expected = homology_all(X, min(n + 1, X.cap - 1))
    prev = None
    for i, st in enumerate(stages):
        reasons = []
        got = st.diag_homology[:len(expected)]
        if len(got) < len(expected):
            reasons.append(f"diagonal homology known only through degree {len(got) - 1}")
        for d, (a, b) in enumerate(zip(got, expected)):
            if a != b:
                reasons.append(f"H_{d}(diagonal) = {a}, expected {b}")
        if not st.globular:
            reasons.append("not globular")
        if st.objects != 1:
            reasons.append(f"{st.objects} objects")
        if prev is not None:
            for pq, c in prev.cell_counts.items():
                if st.cell_counts.get(pq, 0) < c:
                    reasons.append(f"cell count in bidegree {pq} dropped")
                    break
        if reasons:
            return Verdict(False, i, reasons)
        prev = st
    return Verdict(True)


def loop_model(X: SimplicialSet, n: int, schedule: Optional[Schedule] = None,
               depths: Optional[Sequence[int]] = None, cylinder: str = "relative",
               cap: Optional[int] = None, budget: Optional[int] = None,
               fingerprint: Optional[str] = None, on_stage=None) -> LoopModelResult:
    """The column ``B_{1/}`` of the arranged constant precat on ``X``.

    With the default schedule the depths default to :func:`default_depths`.
    Raises :class:`InconsistentRun` if the diagonal homology ever moves.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    check_input(X)
    cap = n + 2 if cap is None else cap
    A = constant_precat(X.recap(cap), cap)
    return _run(A, X.recap(cap), n, schedule, depths, cylinder, cap, budget, fingerprint,
                on_stage)


def _run(A: SegalPrecat, X: SimplicialSet, n: int, schedule, depths, cylinder, cap, budget,
         fingerprint, on_stage) -> LoopModelResult:
    if schedule is None:
        schedule = default_schedule(n)
        if depths is None:
            depths = default_depths(n)
    try:
        with cell_budget(budget):
            B, stages = run_schedule(A, schedule, cylinder, depths, on_stage=on_stage)
            model = column(B, 1)
            top = min(n, cap - 1)
            hs = homology_all(model, top) if top >= 0 else []
    except MemoryError as exc:
        raise ResourceLimit("out of memory while building the loop model") from exc
    verdict = check_run(stages, X, n)
    if not verdict.passed:
        raise InconsistentRun(f"stage {verdict.failing_stage}: {'; '.join(verdict.reasons)}")
    return LoopModelResult(n, model, hs, stages, fingerprint, schedule,
                           list(depths) if depths is not None else None, cap, X)


def loop_homology(X: SimplicialSet, n: int, **kwargs) -> List[HomologyGroup]:
    """``H_i`` of the loop space of ``X`` for ``i <= n``."""
    return loop_model(X, n, **kwargs).loop_homology


@dataclass
class CrossCheck:
    name: str
    loop_side: HomologyGroup
    direct_side: HomologyGroup

    @property
    def agrees(self) -> bool:
        return self.loop_side == self.direct_side

    def to_json(self) -> dict:
        return {"name": self.name, "loop_side": self.loop_side.to_json(),
                "direct_side": self.direct_side.to_json(), "agrees": self.agrees}


def hurewicz_checks(X: SimplicialSet, result: LoopModelResult,
                    simply_connected: bool = False,
                    two_connected: bool = False) -> List[CrossCheck]:
    """Compare the loop model with direct homology of ``X`` under caller assertions.

    Simple connectivity gives ``H_1(loop) = H_2(X)``; 2-connectivity adds
    ``H_2(loop) = H_3(X)``.  The necessary conditions on ``H_1(X)`` and
    ``H_2(X)`` are checked and contradicting assertions raise.
    """
    if not (simply_connected or two_connected):
        return []
    hx = homology_all(X.recap(max(X.cap, 4)), 3)
    if not hx[1].is_zero():
        raise NotSimplyConnected(f"H_1 of the input is {hx[1]}")
    if two_connected and not hx[2].is_zero():
        raise NotSimplyConnected(f"H_2 of the input is {hx[2]}, so it is not 2-connected")
    checks = []
    if result.supported_degree >= 1:
        checks.append(CrossCheck("H_1(loop) = H_2(X)", result.loop_homology[1], hx[2]))
    if two_connected and result.supported_degree >= 2:
        checks.append(CrossCheck("H_2(loop) = H_3(X)", result.loop_homology[2], hx[3]))
    return checks


def pi3_via_loops(X: SimplicialSet, n: int = 2, assert_2_connected: bool = True,
                  **kwargs):
    """``pi_3(X) = H_2`` of the loop model, for a caller-asserted 2-connected ``X``.

    Returns the group, the run and its cross-checks; a disagreement with the
    direct Hurewicz value ``H_3(X)`` raises :class:`InconsistentRun`.
    """
    if not assert_2_connected:
        raise NotSimplyConnected("pi_3 through the loop model needs a 2-connected input")
    if n < 2:
        raise ValueError("pi_3 needs n >= 2")
    result = loop_model(X, n, **kwargs)
    checks = hurewicz_checks(X, result, two_connected=True)
    bad = [c.name for c in checks if not c.agrees]
    if bad:
        raise InconsistentRun(f"cross-check failed: {', '.join(bad)}")
    return result.loop_homology[2], result, checks


def constant_map(f: SimplicialMap, source: SegalPrecat, target: SegalPrecat) -> BisimplicialMap:
    """The map of constant precats induced by ``f``."""
    return BisimplicialMap(source, target, [(op, (0,), y) for op, y in f.assignment])


def _legs(req: PushoutRequest, cap: int):
    """``(base, leg)`` recapped, with ``leg`` the injective one."""
    A, B, C = (X.recap(cap) for X in (req.A, req.B, req.C))
    f = SimplicialMap(B, A, req.f.assignment)
    g = SimplicialMap(B, C, req.g.assignment)
    if g.is_injective():
        return f, g
    if f.is_injective():
        return g, f
    raise NonInjectiveLeg("neither leg of the pushout is injective")


def pushout_space(req: PushoutRequest, cap: Optional[int] = None) -> SimplicialSet:
    """The simplicial pushout ``A u_B C`` at the given cap."""
    cap = req.n + 2 if cap is None else cap
    return pushout(*_legs(req, cap)).space


def svk_pushout(req: PushoutRequest, schedule: Optional[Schedule] = None,
                depths: Optional[Sequence[int]] = None, cylinder: str = "relative",
                cap: Optional[int] = None, budget: Optional[int] = None,
                fingerprint: Optional[str] = None, on_stage=None) -> LoopModelResult:
    """Loop model of ``A u_B C`` built from the pushout of the constant precats.

    The simplicial pushout computed separately must have the same diagonal
    homology, otherwise :class:`InconsistentRun` is raised.
    """
    for X in (req.A, req.B, req.C):
        check_input(X)
    cap = req.n + 2 if cap is None else cap
    base, leg = _legs(req, cap)
    PB = constant_precat(base.source, cap)
    P = bis_pushout(constant_map(base, PB, constant_precat(base.target, cap)),
                    constant_map(leg, PB, constant_precat(leg.target, cap))).space
    P = SegalPrecat.of(P)
    direct = pushout(base, leg).space
    with cell_budget(budget):
        if diagonal_homology(P) != homology_all(direct):
            raise InconsistentRun("pushout of precats and of simplicial sets disagree")
    return _run(P, direct, req.n, schedule, depths, cylinder, cap, budget, fingerprint,
                on_stage)
