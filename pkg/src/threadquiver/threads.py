"""Thread/nonthread classification, intervals, rays, anchors and marks.

Neighbors inside a section are read off the Hasse diagram of the Hom
preorder on the picks.  Rays have two sources: window picks at certified
infinite distance from the nonthread set, and symbolic slice policies
whose tails ascend or descend forever past a cut.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import metric, orders, quivers, reps
from .errors import (AnchorNotUnique, EngineError, InconclusiveDistance,
                     NoAnchorInWindow, NotIndecomposable, NotPicked)
from .metric import lightcone_distance, set_distance_from, set_distance_to
from .sections import Section, single_block, thread_runs
from .window import DObj, Window

THREAD = "thread"
NONTHREAD = "nonthread"
INCONCLUSIVE = "inconclusive"


@dataclass
class Classification:
    obj: DObj
    kind: str
    predecessors: List[DObj]
    successors: List[DObj]

    def to_json(self):
        return {"object": self.obj.name, "kind": self.kind,
                "predecessors": [p.name for p in self.predecessors],
                "successors": [s.name for s in self.successors]}


def _covers(w: Window, objs: List[DObj], A: DObj) -> List[DObj]:
    """Direct successors of A in the Hom preorder restricted to the picks."""
    out = []
    for B in objs:
        if B is A or w.dhom(A, B) < 1:
            continue
        direct = True
        for C in objs:
            if C is A or C is B:
                continue
            if w.dhom(A, C) >= 1 and w.dhom(C, B) >= 1:
                direct = False
                break
        if direct:
            out.append(B)
    return out


def classify_object(w: Window, S: Section, A: DObj) -> Classification:
    if not S.has_pick(A):
        raise NotPicked(A.name)
    objs = S.objects()
    succ = _covers(w, objs, A)
    pred = []
    for B in objs:
        if B is A or w.dhom(B, A) < 1:
            continue
        direct = True
        for C in objs:
            if C is A or C is B:
                continue
            if w.dhom(B, C) >= 1 and w.dhom(C, A) >= 1:
                direct = False
                break
        if direct:
            pred.append(B)
    near_edge = [X for X in [A] + succ + pred if abs(X.level) == w.radius]
    if near_edge:
        kind = INCONCLUSIVE
    elif len(succ) == 1 and len(pred) == 1:
        kind = THREAD
    else:
        kind = NONTHREAD
    return Classification(A, kind, pred, succ)


GENERAL = "general"
UNBROKEN = "unbroken-thread"
BROKEN = "broken-thread"


@dataclass
class IntervalSet:
    left: DObj
    right: DObj
    distance: int
    members: List[DObj]
    kind: str

    def names(self):
        return sorted(m.name for m in self.members)

    def to_json(self):
        return {"from": self.left.name, "to": self.right.name,
                "r": self.distance, "kind": self.kind,
                "members": self.names()}


def r_in_between(w: Window, S: Section, X: DObj, Y: DObj) -> IntervalSet:
    """Picks Z with r(X,Z) + r(Z,Y) = r(X,Y), with the thread classification.

    Searches stay capped: membership needs small exact distances, and a
    certified lower bound already rules a candidate out.  This keeps the
    computation affordable on wild quivers whose high window levels are
    out of reach.
    """
    rXY = metric.lightcone_distance_adaptive(w, X, Y)
    if not rXY.is_exact:
        raise InconclusiveDistance(f"r({X.name},{Y.name}) is {rXY.kind}")
    members = []
    for Z in S.objects():
        cap = max(X.level, Y.level, Z.level)
        while True:
            a = lightcone_distance(w, X, Z, cap)
            b = lightcone_distance(w, Z, Y, cap)
            if a.is_exact and b.is_exact:
                if a.value + b.value == rXY.value:
                    members.append(Z)
                break
            if a.lo() + b.lo() > rXY.value:
                break  # certified out
            if cap >= w.radius:
                raise InconclusiveDistance(
                    f"membership of {Z.name} in [{X.name},{Y.name}] unresolved")
            cap = min(w.radius, cap + 1)
    kinds = {classify_object(w, S, Z).kind for Z in members}
    if kinds <= {THREAD}:
        kind = BROKEN if rXY.value > 0 else UNBROKEN
    elif INCONCLUSIVE in kinds:
        kind = INCONCLUSIVE
    else:
        kind = GENERAL
    return IntervalSet(X, Y, rXY.value, members, kind)


def enumerate_nonthread(w: Window, S: Section) -> List[Classification]:
    out = []
    for A in S.objects():
        cls = classify_object(w, S, A)
        if cls.kind == NONTHREAD:
            out.append(cls)
    return out


def nonthread_path(w: Window, S: Section, X: DObj, Y: DObj):
    """A hop sequence X .. Y through nonthread picks, consecutive hops at
    finite one-sided distance, alternate hops mutually window-infinite."""
    if not S.has_pick(X):
        raise NotPicked(X.name)
    if not S.has_pick(Y):
        raise NotPicked(Y.name)
    if X is Y or (X.orbit, X.level) == (Y.orbit, Y.level):
        return [X]
    objs = S.objects()

    def linked(U, V):
        return (lightcone_distance(w, U, V).is_exact
                or lightcone_distance(w, V, U).is_exact)

    def separated(U, V):
        return (lightcone_distance(w, U, V).is_infinite
                and lightcone_distance(w, V, U).is_infinite)

    if linked(X, Y):
        return [X, Y]
    interior = [Z for Z in objs
                if classify_object(w, S, Z).kind == NONTHREAD
                and (Z.orbit, Z.level) not in ((X.orbit, X.level),
                                               (Y.orbit, Y.level))]
    from collections import deque
    start = (X.orbit, X.level)
    queue = deque([(X, None, [X])])
    seen = {(start, None)}
    while queue:
        cur, prev, path = queue.popleft()
        nexts = interior + [Y]
        for Z in nexts:
            if any((Z.orbit, Z.level) == (P.orbit, P.level) for P in path):
                continue
            if not linked(cur, Z):
                continue
            if prev is not None and not separated(prev, Z):
                continue
            new_path = path + [Z]
            if Z is Y:
                return new_path
            key = ((Z.orbit, Z.level), (cur.orbit, cur.level))
            if key in seen:
                continue
            seen.add(key)
            queue.append((Z, cur, new_path))
    return None


# -- rays ------------------------------------------------------------------------


@dataclass
class RayReport:
    ray_id: str
    side: str  # "ray" or "coray"
    thread_id: Optional[str] = None
    order: Optional[orders.LinearOrder] = None
    shift: Optional[int] = None
    members: List[DObj] = field(default_factory=list)
    anchor: Optional[DObj] = None
    mark: object = None

    def to_json(self):
        return {"ray": self.ray_id, "side": self.side,
                "thread": self.thread_id,
                "order": orders.serialize(self.order) if self.order else None,
                "members": sorted(m.name for m in self.members),
                "anchor": self.anchor.name if self.anchor else None}


def _union_find_groups(items, related):
    parent = {i: i for i in range(len(items))}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if related(items[i], items[j]):
                parent[find(i)] = find(j)
    groups: Dict[int, List] = {}
    for i, item in enumerate(items):
        groups.setdefault(find(i), []).append(item)
    return list(groups.values())


def detect_rays(w: Window, S: Section) -> List[RayReport]:
    reports: List[RayReport] = []
    objs = S.objects()
    nonthreads = [c.obj for c in enumerate_nonthread(w, S)]
    ray_objs = []
    coray_objs = []
    if nonthreads:
        for X in objs:
            cls = classify_object(w, S, X)
            if cls.kind != THREAD:
                continue
            out = set_distance_to(w, X, nonthreads)
            back = set_distance_from(w, nonthreads, X)
            if out.is_infinite and back.is_exact:
                ray_objs.append(X)
            if back.is_infinite and out.is_exact:
                coray_objs.append(X)

    def related(U, V):
        return (lightcone_distance(w, U, V).is_exact
                or lightcone_distance(w, V, U).is_exact)

    for k, group in enumerate(_union_find_groups(ray_objs, related)):
        reports.append(RayReport(f"ray{k}", "ray", members=group))
    for k, group in enumerate(_union_find_groups(coray_objs, related)):
        reports.append(RayReport(f"coray{k}", "coray", members=group))

    if S.thread_policies and S.thread_quiver is not None:
        reports.extend(_symbolic_rays(w, S))
    return reports


def _symbolic_rays(w: Window, S: Section) -> List[RayReport]:
    """Slice-policy rays: tails ascending or descending past every nonthread."""
    out: List[RayReport] = []
    serial = 0
    for tid, runs in thread_runs(S.thread_quiver, S.thread_policies).items():
        picked = [(order, shift) for order, shift, p in runs if p]
        nt_below: List[bool] = []
        nt_above: List[bool] = []
        for order, _ in picked:
            nt_below.append(orders.has_minimum(order) is True)
            nt_above.append(orders.has_maximum(order) is True)
        for i, (order, shift) in enumerate(picked):
            upper_open = orders.has_maximum(order) is False
            later_nt = any(nt_below[k] or nt_above[k]
                           for k in range(i + 1, len(picked)))
            anchored_tail = single_block(order) is True and nt_below[i]
            if upper_open and not later_nt and not anchored_tail:
                rep = RayReport(f"ray-{tid}-{serial}", "ray", thread_id=tid,
                                order=order, shift=shift)
                rep.members = _tail_members(w, S, tid, i, "upper")
                rep.anchor = _nearest_nonthread(w, S, tid, i, picked,
                                                nt_below, nt_above)
                out.append(rep)
                serial += 1
            lower_open = orders.has_minimum(order) is False
            earlier_nt = any(nt_below[k] or nt_above[k] for k in range(i))
            coanchored = single_block(order) is True and nt_above[i]
            if lower_open and not earlier_nt and not coanchored:
                rep = RayReport(f"coray-{tid}-{serial}", "coray", thread_id=tid,
                                order=order, shift=shift)
                rep.members = _tail_members(w, S, tid, i, "lower")
                out.append(rep)
                serial += 1
    return out


def _tail_members(w: Window, S: Section, tid: str, run_index: int, side: str):
    """Window picks realizing elements of the ray's run, where resolvable."""
    exp = S.expansions.get(tid)
    if exp is None:
        return []
    # the run's region is identified through slice cuts; for desk use we
    # report the picks of expansion vertices whose slice index matches
    members = []
    slices = thread_runs(S.thread_quiver, S.thread_policies)[tid]
    target_shift = [sh for o, sh, p in slices if p]
    if run_index >= len(target_shift):
        return []
    shift = target_shift[run_index]
    for vertex, addr in exp.element_map.items():
        if vertex not in S.picks:
            continue
        level = S.picks[vertex]
        X = w.get(vertex, level)
        if shift is not None and X.level == -shift:
            members.append(X)
    return members


def _nearest_nonthread(w: Window, S: Section, tid: str, run_index, picked,
                       nt_below, nt_above) -> Optional[DObj]:
    """The pick anchoring the ray: the closest nonthread below its tail."""
    exp = S.expansions.get(tid)
    for k in range(run_index, -1, -1):
        if nt_below[k]:
            # the run's minimum; resolve through the expansion if possible
            if exp is None:
                return None
            completion = exp.completion
            best = None
            for vertex, addr in exp.element_map.items():
                if vertex not in S.picks:
                    continue
                if best is None or orders.compare(completion, addr,
                                                  exp.element_map[best]) < 0:
                    best = vertex
            if best is not None:
                return w.get(best, S.picks[best])
            return None
        if nt_above[k] and k < run_index:
            return None
    return None


def find_anchor(w: Window, S: Section, ray: RayReport) -> DObj:
    """The unique nonthread at finite forward distance heading the ray."""
    if ray.anchor is not None:
        return ray.anchor
    if not ray.members:
        raise NoAnchorInWindow(ray.ray_id)
    nonthreads = [c.obj for c in enumerate_nonthread(w, S)]
    candidates = []
    for A in nonthreads:
        if all(lightcone_distance(w, A, X).is_exact for X in ray.members):
            candidates.append(A)
    anchors = []
    for A in candidates:
        sole = True
        for X in ray.members:
            iv = r_in_between(w, S, A, X)
            others = [Z for Z in iv.members
                      if classify_object(w, S, Z).kind == NONTHREAD
                      and (Z.orbit, Z.level) != (A.orbit, A.level)]
            if others:
                sole = False
                break
        if sole:
            anchors.append(A)
    if not anchors:
        raise NoAnchorInWindow(ray.ray_id)
    if len(anchors) > 1:
        raise AnchorNotUnique(f"{ray.ray_id}: {[a.name for a in anchors]}")
    ray.anchor = anchors[0]
    return anchors[0]


@dataclass
class MarkResult:
    module: object  # QRep
    shift: int
    window_object: Optional[DObj]
    symbolic_vertex: Optional[str] = None
    rewritten: object = None

    @property
    def dim_vector(self):
        return self.module.dim_vector()


def compute_mark(w: Window, S: Section, ray: RayReport) -> MarkResult:
    """Cone of the irreducible map from tau(successor) to the anchor.

    When the connecting map lives in degree one, the cone is the middle of
    the corresponding extension, one shift up.  The result must come out
    indecomposable.
    """
    anchor = find_anchor(w, S, ray)
    cls = classify_object(w, S, anchor)
    toward = []
    for B in cls.successors:
        if all(_heads_toward(w, S, anchor, B, X) for X in ray.members):
            toward.append(B)
    if ray.members and len(toward) != 1:
        raise EngineError(
            f"anchor {anchor.name} has {len(toward)} successors toward the ray")
    B = toward[0] if toward else (cls.successors[0] if cls.successors else None)
    if B is None:
        raise EngineError(f"anchor {anchor.name} has no successor")
    tauB = w.tau(B)
    ds = anchor.shift - tauB.shift
    if ds == 0:
        basis = reps.hom_basis(tauB.module, anchor.module)
        if not basis:
            raise EngineError("no irreducible map below the anchor")
        pieces = reps.cone_decompose(basis[0], tauB.module, anchor.module)
        if len(pieces) != 1:
            raise NotIndecomposable(f"mark splits into {len(pieces)} pieces")
        mod, rel = pieces[0]
        shift = tauB.shift + rel
    elif ds == 1:
        mod = reps.extension_middle(tauB.module, anchor.module)
        pieces = reps.decompose(mod)
        if len(pieces) != 1:
            raise NotIndecomposable(f"mark splits into {len(pieces)} pieces")
        mod = pieces[0]
        shift = tauB.shift + 1
    else:
        raise EngineError(f"no morphism from {tauB.name} to {anchor.name}")
    return MarkResult(mod, shift, w.find_module(mod, shift))


def _heads_toward(w: Window, S: Section, anchor: DObj, B: DObj, X: DObj) -> bool:
    a = lightcone_distance(w, anchor, X)
    b = lightcone_distance(w, B, X)
    ab = lightcone_distance(w, anchor, B)
    return (a.is_exact and b.is_exact and ab.is_exact
            and ab.value + b.value == a.value)


def symbolic_mark(tq, ray: RayReport):
    """Mark through the zig-zag rewrite: the fresh far vertex of the thread."""
    if ray.thread_id is None:
        raise EngineError("symbolic mark needs a thread-borne ray")
    th = tq.thread(ray.thread_id)
    rewritten = quivers.zigzag_to_thread(tq, th.src, [th.dst])
    new_thread = [t for t in rewritten.thread_arrows if t.src == th.src][-1]
    return rewritten, new_thread.dst


def mark_fingerprints_agree(w: Window, S: Section, mark: MarkResult,
                            rewritten, z_vertex: str) -> bool:
    """Window cone route vs rewrite route, compared on shared vertices."""
    shared = [v for v in rewritten.vertices
              if v in w.quiver.vertices and v != z_vertex]
    uq = quivers.underlying_quiver(rewritten)
    for v in shared:
        expected = quivers.path_count(uq, v, z_vertex)
        got = reps.hom_dim(reps.projective(w.quiver, v), mark.module)
        if expected != got:
            return False
    return True


def candidate_seed(w: Window, S: Section, include_marks: bool = True) -> List[DObj]:
    """Nonthread picks plus marks and comarks of detected rays."""
    seed = [c.obj for c in enumerate_nonthread(w, S)]
    if include_marks:
        for ray in detect_rays(w, S):
            if ray.anchor is None and not ray.members:
                continue
            try:
                mk = compute_mark(w, S, ray)
            except (EngineError, NoAnchorInWindow, NotIndecomposable):
                continue
            if mk.window_object is not None:
                seed.append(mk.window_object)
    uniq = []
    seen = set()
    for X in seed:
        if (X.orbit, X.level) not in seen:
            seen.add((X.orbit, X.level))
            uniq.append(X)
    return uniq


def threads_report(w: Window, S: Section) -> dict:
    """JSON-ready per-pick classification plus ray reports."""
    classifications = [classify_object(w, S, A).to_json() for A in S.objects()]
    rays = [r.to_json() for r in detect_rays(w, S)]
    return {"schema": 1, "picks": classifications, "rays": rays}
