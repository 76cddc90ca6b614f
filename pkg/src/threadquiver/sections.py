"""Hereditary sections: verification, light cones, hearts, tilts, (*).

A section picks at most one object per tau-orbit of a window.  On top of
the finite picks, per-thread slice policies describe sections of the
infinite chain a thread arrow stands for: elements below a cut keep their
shift, elements at or above it are shifted or dropped.  Symbolic checks
(condition (*), rays) work on the order types of the slices; everything
else is certified object by object inside the window.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import metric, orders
from .errors import (InconclusiveAtWindow, NonDirectingCenter, NotUniqueOnOrbit,
                     SectionInvalid, UnknownThread, WindowTooSmall)
from .metric import DistanceResult, lightcone_distance, set_distance_from, set_distance_to
from .orders import LinearOrder
from .quivers import ThreadQuiver
from .window import DObj, Window

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ThreadSlicePolicy:
    """One cut on the completed chain of a thread arrow.

    Elements at or above `cut` are picked with tau-exponent `shift`
    (None drops their orbits from the section).  `cut` is an address into
    the thread's completion; None marks the policy that covers the chain
    from its very start.  Several policies on one thread form successive
    slices.
    """
    thread_id: str
    cut: object
    shift: Optional[int]


@dataclass
class Section:
    window: Window
    picks: Dict[str, int]
    thread_policies: List[ThreadSlicePolicy] = field(default_factory=list)
    thread_quiver: Optional[ThreadQuiver] = None
    unpicked: List[str] = field(default_factory=list)
    flagged: List[str] = field(default_factory=list)
    expansions: dict = field(default_factory=dict)  # thread id -> ThreadExpansion

    def __post_init__(self):
        for orbit, level in self.picks.items():
            self.window.get(orbit, level)

    def objects(self) -> List[DObj]:
        return [self.window.get(o, l) for o, l in sorted(self.picks.items())]

    def has_pick(self, X: DObj) -> bool:
        return self.picks.get(X.orbit) == X.level

    def positions(self):
        return {(o, l) for o, l in self.picks.items()}

    def to_json(self) -> dict:
        out = {"schema": 1, "picks": dict(sorted(self.picks.items()))}
        if self.thread_policies:
            out["policies"] = [
                {"thread": p.thread_id,
                 "cut": None if p.cut is None else orders.serialize_address(p.cut),
                 "shift": p.shift}
                for p in self.thread_policies]
        return out

    def policy_excluded_orbits(self) -> set:
        """Orbits of expansion vertices that fall in a dropped policy slice.

        Window Homs reaching these orbits run across elided stretches and do
        not reflect the modeled category, so verification treats them as
        window-unresolvable rather than as witnesses.
        """
        out = set()
        if not self.thread_policies:
            return out
        by_thread: Dict[str, List[ThreadSlicePolicy]] = {}
        for p in self.thread_policies:
            by_thread.setdefault(p.thread_id, []).append(p)
        for tid, plist in by_thread.items():
            exp = self.expansions.get(tid)
            if exp is None:
                continue
            comp = exp.completion
            base_shift: Optional[int] = 0
            concrete = []
            for p in plist:
                if p.cut is None:
                    base_shift = p.shift
                else:
                    concrete.append(p)
            import functools
            concrete.sort(key=functools.cmp_to_key(
                lambda u, v: orders.compare(comp, u.cut, v.cut)))
            for vertex, addr in exp.element_map.items():
                shift = base_shift
                for p in concrete:
                    if orders.compare(comp, p.cut, addr) <= 0:
                        shift = p.shift
                    else:
                        break
                if shift is None:
                    out.add(vertex)
        return out


def section_from_json(w: Window, data: dict,
                      tq: Optional[ThreadQuiver] = None) -> Section:
    picks = {str(k): int(v) for k, v in data.get("picks", {}).items()}
    policies = []
    for rec in data.get("policies", []):
        cut = rec.get("cut")
        policies.append(ThreadSlicePolicy(
            rec["thread"],
            None if cut is None else orders.parse_address(cut),
            rec.get("shift")))
    return Section(w, picks, policies, tq)


@dataclass
class Certificate:
    verdict: str
    violations: List[dict] = field(default_factory=list)
    reasons: List[dict] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self) -> dict:
        return {"schema": 1, "verdict": self.verdict,
                "violations": self.violations, "reasons": self.reasons,
                "witnesses": self.witnesses}


def _settle(violations, reasons, witnesses=None) -> Certificate:
    if violations:
        verdict = FAIL
    elif reasons:
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    return Certificate(verdict, violations, reasons, witnesses or {})


# -- slice machinery ----------------------------------------------------------


def _cut_position(segs, addr):
    """Translate a completion address into (segment index, local address)."""
    i = 0
    while isinstance(addr, tuple) and addr[0] == "R":
        i += 1
        addr = addr[1]
    if isinstance(addr, tuple) and addr[0] == "L":
        return i, addr[1]
    if i >= len(segs):
        raise SectionInvalid("cut address leaves the completion")
    if i < len(segs) - 1 and addr is not orders.START:
        raise SectionInvalid("cut address must descend into a segment")
    return i, addr


def _seg_slice(seg: LinearOrder, lo, hi) -> LinearOrder:
    """Order type of one segment between local cuts (lo inclusive)."""
    if lo is orders.START:
        lo = None
    if isinstance(seg, (orders.NatUp, orders.NatDown, orders.Ints, orders.Fin)):
        if isinstance(seg, orders.NatUp):
            full_lo, full_hi = 0, None
        elif isinstance(seg, orders.NatDown):
            full_lo, full_hi = None, 0
        elif isinstance(seg, orders.Ints):
            full_lo, full_hi = None, None
        else:
            full_lo, full_hi = 0, seg.n
        a = full_lo if lo is None else lo
        b = full_hi if hi is None else hi
        if a is not None and b is not None:
            return orders.Fin(max(b - a, 0))
        if a is None and b is None:
            return orders.INTS
        if a is None:
            return orders.NAT_DOWN
        return orders.NAT_UP
    if lo is None and hi is None:
        return seg
    raise SectionInvalid("cannot cut inside a symbolic segment")


def thread_slices(tq: ThreadQuiver, policies: List[ThreadSlicePolicy]):
    """Per thread: list of (order type, shift or None) in chain order."""
    by_thread: Dict[str, List[ThreadSlicePolicy]] = {}
    for p in policies:
        by_thread.setdefault(p.thread_id, []).append(p)
    out = {}
    for tid, plist in by_thread.items():
        th = tq.thread(tid)
        completion = orders.thread_completion(th.label)
        segs = orders.segments(completion)
        marked = []
        for p in plist:
            if p.cut is None:
                marked.append(((-1, None), p))
            else:
                orders.check_address(completion, p.cut)
                marked.append((_cut_position(segs, p.cut), p))
        def cut_key(t):
            seg, local = t[0]
            if local is None or local is orders.START:
                return (seg, 0, 0)
            return (seg, 1, local)

        marked.sort(key=cut_key)
        if not marked or marked[0][0] != (-1, None):
            marked.insert(0, ((-1, None), ThreadSlicePolicy(tid, None, 0)))
        slices = []
        for k, (pos, pol) in enumerate(marked):
            nxt = marked[k + 1][0] if k + 1 < len(marked) else None
            order = _slice_between(segs, pos, nxt)
            if not orders.is_empty(order):
                slices.append((order, pol.shift))
        out[tid] = slices
    return out


def _slice_between(segs, lo_pos, hi_pos):
    """Order type between two cuts; a START bound stops before its segment."""
    i, a = lo_pos if lo_pos != (-1, None) else (0, orders.START)
    if a is orders.START:
        a = None  # from the very beginning of segment i
    if hi_pos is None:
        j, b = len(segs) - 1, None  # through the final segment
    else:
        j, b = hi_pos
        if b is orders.START:
            j, b = j - 1, None  # everything below segment j, none of it
    if j < i:
        return orders.EMPTY
    if i == j:
        parts = [_seg_slice(segs[i], a, b)]
    else:
        parts = [_seg_slice(segs[i], a, None)]
        parts.extend(segs[k] for k in range(i + 1, j))
        parts.append(_seg_slice(segs[j], None, b))
    order = parts[0]
    for part in parts[1:]:
        order = orders.Concat(order, part)
    return orders.canonicalize(order)


def thread_runs(tq: ThreadQuiver, policies: List[ThreadSlicePolicy]):
    """Merge adjacent picked slices of equal shift into runs.

    Returns per thread a list of (order, shift, picked) stretches in chain
    order; excluded stretches keep shift None and picked False.
    """
    out = {}
    for tid, slices in thread_slices(tq, policies).items():
        runs = []
        for order, shift in slices:
            picked = shift is not None
            if runs and runs[-1][2] == picked and runs[-1][1] == shift:
                runs[-1] = (orders.canonicalize(orders.Concat(runs[-1][0], order)),
                            shift, picked)
            else:
                runs.append((order, shift, picked))
        out[tid] = runs
    return out


def single_block(order: LinearOrder):
    """Tri-bool: are all elements joined by immediate-neighbor steps?"""
    if isinstance(order, (orders.Fin, orders.NatUp, orders.NatDown, orders.Ints)):
        return True
    if isinstance(order, orders.Labeled):
        return None
    if isinstance(order, orders.Concat):
        if orders.is_empty(order.left):
            return single_block(order.right)
        if orders.is_empty(order.right):
            return single_block(order.left)
        # blocks merge across the join only when max and min actually meet
        join = orders._tri_and(orders.has_maximum(order.left),
                               orders.has_minimum(order.right))
        return orders._tri_and(single_block(order.left),
                               single_block(order.right), join)
    if isinstance(order, orders.LexProd):
        if orders.is_empty(order.outer) or orders.is_empty(order.inner):
            return True
        if order.outer == orders.Fin(1):
            return single_block(order.inner)
        fits = orders._tri_and(orders.has_minimum(order.inner),
                               orders.has_maximum(order.inner))
        if fits is False:
            return False
        return orders._tri_and(fits, single_block(order.outer),
                               single_block(order.inner))
    raise TypeError(f"unknown order node {order!r}")


# -- verification -------------------------------------------------------------


def verify_section(w: Window, S: Section) -> Certificate:
    """Pairwise nonnegativity plus tau-convexity, certified in the window."""
    violations = []
    reasons = []
    objs = S.objects()
    for X in objs:
        for Y in objs:
            res = lightcone_distance(w, X, Y)
            flag = res.nonnegative()
            if flag is False:
                violations.append({"clause": "pairwise-nonnegative",
                                   "objects": [X.name, Y.name],
                                   "value": res.value})
            elif flag is None:
                reasons.append({"clause": "pairwise-nonnegative",
                                "objects": [X.name, Y.name]})
    picked_orbits = set(S.picks)
    elided = S.policy_excluded_orbits()
    elided_seen = set()
    for Z in w.all_objects():
        if Z.orbit in picked_orbits:
            continue
        if Z.orbit in elided:
            if Z.orbit not in elided_seen:
                elided_seen.add(Z.orbit)
                reasons.append({"clause": "tau-convex-elided",
                                "objects": [Z.orbit]})
            continue
        d = set_distance_from(w, objs, Z) + set_distance_to(w, Z, objs)
        if d.is_exact:
            violations.append({"clause": "tau-convex",
                               "objects": [Z.name], "value": d.value})
        elif d.is_inconclusive:
            reasons.append({"clause": "tau-convex", "objects": [Z.name]})
    if S.thread_policies and S.thread_quiver is not None:
        for tid, runs in thread_runs(S.thread_quiver, S.thread_policies).items():
            prev_shift = None
            for order, shift, picked in runs:
                if not picked:
                    continue
                if prev_shift is not None and shift < prev_shift:
                    violations.append({"clause": "policy-shift-monotone",
                                       "objects": [tid],
                                       "value": shift})
                prev_shift = shift
    return _settle(violations, reasons)


def light_cone_section(w: Window, X: DObj, side: str = "right") -> Section:
    """Section spanned by the distance-0 sphere around a directing object."""
    if metric.is_directing(w, X) is not True:
        raise NonDirectingCenter(X.name)
    sph = metric.sphere(w, X, 0, side)
    picks: Dict[str, int] = {}
    for Y in sph.members:
        if Y.orbit in picks:
            raise NotUniqueOnOrbit(f"{Y.orbit} met twice in the light cone")
        picks[Y.orbit] = Y.level
    return Section(w, picks)


@dataclass
class HeartResult:
    heart: List[DObj]
    projectives: List[DObj]
    inconclusive: List[DObj]


def _aisle_test(w: Window, objs: List[DObj]):
    """Membership oracle for the right aisle spanned by the section."""
    cache: Dict[Tuple[str, int], Optional[bool]] = {}

    def in_d(X: DObj):
        key = (X.orbit, X.level)
        if key in cache:
            return cache[key]
        fwd = set_distance_to(w, X, objs).nonnegative()
        back = set_distance_from(w, objs, X)
        if fwd is False or back.is_infinite:
            val: Optional[bool] = False
        elif fwd is True and back.is_exact:
            val = True
        else:
            val = None
        cache[key] = val
        return val

    return in_d


def compute_heart(w: Window, S: Section) -> HeartResult:
    """Heart and its projectives for the split t-structure of the section."""
    cert = verify_section(w, S)
    if not cert.passed:
        raise SectionInvalid(f"section does not verify: {cert.verdict}")
    objs = S.objects()
    in_d = _aisle_test(w, objs)
    heart: List[DObj] = []
    projectives: List[DObj] = []
    unknown: List[DObj] = []
    for X in w.all_objects():
        dX = in_d(X)
        if dX is None:
            unknown.append(X)
            continue
        if not dX:
            continue
        below = w.shifted(X, -1)
        if below is None:
            unknown.append(X)
            continue
        dBelow = in_d(below)
        if dBelow is None:
            unknown.append(X)
            continue
        if dBelow:
            continue
        heart.append(X)
        if X.level - 1 < -w.radius:
            unknown.append(X)
            continue
        dTau = in_d(w.tau(X))
        if dTau is None:
            unknown.append(X)
        elif not dTau:
            projectives.append(X)
    return HeartResult(heart, projectives, unknown)


def verify_split_t(w: Window, S: Section) -> Certificate:
    """Orthogonality and successor-closure of the aisle, object by object."""
    cert = verify_section(w, S)
    if not cert.passed:
        raise SectionInvalid(f"section does not verify: {cert.verdict}")
    objs = S.objects()
    in_d = _aisle_test(w, objs)
    members = []
    complement = []
    reasons = []
    violations = []
    for X in w.all_objects():
        val = in_d(X)
        if val is True:
            members.append(X)
        elif val is False:
            complement.append(X)
        else:
            reasons.append({"clause": "aisle-membership", "objects": [X.name]})
    for X in members:
        for Z in complement:
            if w.dhom(X, Z) != 0:
                violations.append({"clause": "orthogonality",
                                   "objects": [X.name, Z.name],
                                   "value": w.dhom(X, Z)})
    member_keys = {(X.orbit, X.level) for X in members}
    complement_keys = {(X.orbit, X.level) for X in complement}
    for X in members:
        for pos in w.edges_from((X.orbit, X.level)):
            if pos in complement_keys:
                Y = w.objects[pos]
                violations.append({"clause": "successor-closed",
                                   "objects": [X.name, Y.name]})
        up = w.shifted(X, 1)
        if up is not None and (up.orbit, up.level) in complement_keys:
            violations.append({"clause": "shift-closed",
                               "objects": [X.name, up.name]})
    _ = member_keys
    return _settle(violations, reasons,
                   {"aisle": sorted(X.name for X in members)})


# -- condition (*) -------------------------------------------------------------


def check_condition_star(w: Window, S: Section) -> Certificate:
    """Countable-seed condition, window part plus symbolic slice part."""
    from . import threads as threads_mod
    violations = []
    reasons = []
    objs = S.objects()
    if objs:
        seed = threads_mod.candidate_seed(w, S)
        if seed:
            for X in objs:
                d = set_distance_from(w, seed, X) + set_distance_to(w, X, seed)
                if d.is_infinite:
                    violations.append({"clause": "window-seed-distance",
                                       "objects": [X.name]})
                elif d.is_inconclusive:
                    reasons.append({"clause": "window-seed-distance",
                                    "objects": [X.name]})
    if S.thread_policies and S.thread_quiver is not None:
        for tid, runs in thread_runs(S.thread_quiver, S.thread_policies).items():
            for order, shift, picked in runs:
                if not picked:
                    continue
                if orders.has_maximum(order) is False:
                    cof = orders.cofinality_class(order)
                    if cof == orders.UNCOUNTABLE:
                        violations.append({"clause": "uncountable-cofinal-tail",
                                           "objects": [tid],
                                           "order": orders.serialize(order)})
                    elif cof == orders.UNKNOWN:
                        reasons.append({"clause": "unknown-cofinal-tail",
                                        "objects": [tid]})
                if orders.has_minimum(order) is False:
                    coi = orders.coinitiality_class(order)
                    if coi == orders.UNCOUNTABLE:
                        violations.append({"clause": "uncountable-coinitial-tail",
                                           "objects": [tid],
                                           "order": orders.serialize(order)})
                    elif coi == orders.UNKNOWN:
                        reasons.append({"clause": "unknown-coinitial-tail",
                                        "objects": [tid]})
    return _settle(violations, reasons)


# -- seed refinement and the tilt ------------------------------------------------


def choose_seed(w: Window, candidates: List[DObj]) -> List[DObj]:
    """Refine a seed list until the separation properties hold.

    First pass drops members at witnessed finite round-trip distance from
    an earlier prefix; second pass slides the survivors along their orbits
    until mutual one-sided distances reach the index.
    """
    for X in candidates:
        w.require(X)
    survivors: List[DObj] = []
    for k, T in enumerate(candidates):
        fwd = any(lightcone_distance(w, P, T).is_exact for P in candidates[:k])
        back = any(lightcone_distance(w, T, P).is_exact for P in candidates[:k])
        if fwd and back:
            continue
        survivors.append(T)
    chosen: List[DObj] = []
    for i, T in enumerate(survivors):
        if i == 0:
            chosen.append(T)
            continue
        placed = None
        shifts = [0]
        for m in range(1, 2 * w.radius + 1):
            shifts.extend([m, -m])
        for m in shifts:
            level = T.level + m
            if not w.has(T.orbit, level):
                continue
            cand = w.get(T.orbit, level)
            ok_fwd = set_distance_from(w, chosen, cand).at_least(i)
            ok_back = set_distance_to(w, cand, chosen).at_least(i)
            if ok_fwd is True and ok_back is True:
                placed = cand
                break
        if placed is None:
            raise WindowTooSmall(
                f"no shift of {T.name} separates it from the seed prefix")
        chosen.append(placed)
    _check_seed(w, chosen)
    return chosen


def _check_seed(w: Window, seed: List[DObj]):
    for k, T in enumerate(seed):
        for j in range(k):
            fwd = any(lightcone_distance(w, P, T).is_exact for P in seed[:j + 1])
            back = any(lightcone_distance(w, T, P).is_exact for P in seed[:j + 1])
            if fwd and back:
                raise InconclusiveAtWindow(
                    f"seed separation fails between prefix {j} and {T.name}")
    for i, A in enumerate(seed):
        for j, B in enumerate(seed):
            if i == j:
                continue
            res = lightcone_distance(w, A, B)
            if res.is_exact and res.value < max(i, j):
                raise InconclusiveAtWindow(
                    f"seed spacing fails: r({A.name},{B.name}) = {res.value}")


def tilt_construction(w: Window, seed: List[DObj],
                      on_inconclusive: str = "flag") -> Section:
    """Pick, per orbit, the level at seed distance floor(d/2).

    Orbits at certified infinite seed distance stay unpicked; inconclusive
    orbits are flagged (or rejected with `on_inconclusive='error'`).  The
    level is found by scanning the orbit, and the result must verify.
    """
    for X in seed:
        w.require(X)
    picks: Dict[str, int] = {}
    unpicked: List[str] = []
    flagged: List[str] = []
    for orbit in w.quiver.vertices:
        rep = w.get(orbit, 0)
        fwd = set_distance_from(w, seed, rep)
        back = set_distance_to(w, rep, seed)
        if fwd.is_infinite or back.is_infinite:
            unpicked.append(orbit)
            continue
        if not (fwd.is_exact and back.is_exact):
            if on_inconclusive == "error":
                raise InconclusiveAtWindow(f"seed distance unresolved at {orbit}")
            flagged.append(orbit)
            continue
        d = fwd.value + back.value
        if d < 0:
            raise InconclusiveAtWindow(
                f"negative round-trip distance {d} at orbit {orbit}")
        want = d // 2
        hits = []
        for level in range(-w.radius, w.radius + 1):
            res = set_distance_from(w, seed, w.get(orbit, level))
            if res.is_exact and res.value == want:
                hits.append(level)
        if not hits:
            raise WindowTooSmall(f"no level on orbit {orbit} realizes {want}")
        if len(hits) > 1:
            raise InconclusiveAtWindow(
                f"orbit {orbit} realizes {want} at several levels {hits}")
        picks[orbit] = hits[0]
    out = Section(w, picks, unpicked=unpicked, flagged=flagged)
    cert = verify_section(w, out)
    if cert.verdict == FAIL:
        raise SectionInvalid(f"tilt output fails verification: {cert.violations}")
    if cert.verdict == INCONCLUSIVE:
        raise InconclusiveAtWindow("tilt output cannot be certified")
    return out


# -- dualizing criterion ---------------------------------------------------------


def dualizing_check(w: Window, S: Section) -> Certificate:
    """Finite covering objects for every light-cone sphere of the section."""
    cert = verify_section(w, S)
    if not cert.passed:
        raise SectionInvalid(f"section does not verify: {cert.verdict}")
    objs = S.objects()
    violations = []
    reasons = []
    covers = {}
    for A in objs:
        fwd_zero = []
        back_zero = []
        for B in objs:
            res = lightcone_distance(w, A, B)
            if res.is_exact and res.value == 0:
                fwd_zero.append(B)
            elif res.is_inconclusive:
                reasons.append({"clause": "sphere-membership",
                                "objects": [A.name, B.name]})
            res = lightcone_distance(w, B, A)
            if res.is_exact and res.value == 0:
                back_zero.append(B)
        c1 = []
        for B in fwd_zero:
            hit = next((c for c in objs if w.dhom(B, c) >= 1), None)
            if hit is None:
                violations.append({"clause": "cover-out", "objects": [A.name, B.name]})
            else:
                c1.append(hit.name)
        c2 = []
        for B in back_zero:
            hit = next((c for c in objs if w.dhom(c, B) >= 1), None)
            if hit is None:
                violations.append({"clause": "cover-in", "objects": [A.name, B.name]})
            else:
                c2.append(hit.name)
        covers[A.name] = {"out": sorted(set(c1)), "in": sorted(set(c2))}
    if S.thread_policies and S.thread_quiver is not None:
        for tid, runs in thread_runs(S.thread_quiver, S.thread_policies).items():
            for order, shift, picked in runs:
                if not picked:
                    continue
                if orders.has_maximum(order) is False:
                    violations.append({"clause": "cover-out-open-tail",
                                       "objects": [tid],
                                       "order": orders.serialize(order)})
                if orders.has_minimum(order) is False:
                    violations.append({"clause": "cover-in-open-tail",
                                       "objects": [tid],
                                       "order": orders.serialize(order)})
    return _settle(violations, reasons, {"covers": covers})


# -- nonthread enforcement and extension ------------------------------------------


def ensure_nonthread(w: Window, S: Section, X: DObj) -> Section:
    """Slide every orbit by min(r(X, -), 1) so X acquires two neighbors."""
    if not S.has_pick(X):
        raise SectionInvalid(f"{X.name} is not picked")
    cert = verify_section(w, S)
    if not cert.passed:
        raise SectionInvalid(f"section does not verify: {cert.verdict}")
    new_picks: Dict[str, int] = {}
    for Y in S.objects():
        res = lightcone_distance(w, X, Y)
        if not res.is_exact:
            raise InconclusiveAtWindow(
                f"distance from {X.name} to {Y.name} is not exact")
        m = min(res.value, 1)
        level = Y.level + m
        if not w.has(Y.orbit, level):
            raise WindowTooSmall(f"slide of {Y.name} leaves the window")
        new_picks[Y.orbit] = level
    out = Section(w, new_picks,
                  thread_policies=S.thread_policies,
                  thread_quiver=S.thread_quiver)
    cert = verify_section(w, out)
    if cert.verdict == FAIL:
        raise SectionInvalid(f"slide broke the section: {cert.violations}")
    return out


def extend_with_marks(w: Window, S: Section):
    """Assemble nonthreads, marks and comarks, refine, and re-tilt.

    Returns (seed, section).  An obstruction (a seed pair at certified
    negative distance) raises instead of silently keeping the mark.
    """
    from . import threads as threads_mod
    seed = threads_mod.candidate_seed(w, S, include_marks=True)
    if not seed:
        raise SectionInvalid("section exposes no nonthread objects or marks")
    for A in seed:
        for B in seed:
            res = lightcone_distance(w, A, B)
            back = lightcone_distance(w, B, A)
            if res.is_exact and back.is_exact and res.value + back.value < 0:
                raise InconclusiveAtWindow(
                    f"obstruction: d({A.name},{B.name}) = {res.value + back.value} < 0")
    refined = choose_seed(w, seed)
    out = tilt_construction(w, refined, on_inconclusive="flag")
    for orbit in S.picks:
        if orbit not in out.picks:
            raise InconclusiveAtWindow(
                f"orbit {orbit} of the input section is not recovered")
    return refined, out
