"""Light-cone and round-trip distances over a window.

The light cone distance r(X, Y) is the least n such that a Hom-path leads
from X to tau^{-n} Y.  Window answers are certified intervals: `exact`
needs a boundary-free forward cone or the window's validated level-monotone
Hom relation (then no smaller n can hide outside); `infinite` always needs
the boundary-free cone.  A truncated search still returns certified lower
and upper bounds instead of a guess, and the monotone certificate yields
the lower bound level(X) - level(Y) for free.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf
from typing import Iterable, List, Optional, Set, Tuple

from .errors import NotInWindow
from .window import DObj, Window

EXACT = "exact"
INFINITE = "infinite"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DistanceResult:
    kind: str
    value: Optional[int] = None
    bound: Optional[int] = None  # certified upper bound when inconclusive
    lower: Optional[int] = None  # certified lower bound when inconclusive

    @staticmethod
    def exact(n: int) -> "DistanceResult":
        return DistanceResult(EXACT, value=n)

    @staticmethod
    def infinite() -> "DistanceResult":
        return DistanceResult(INFINITE)

    @staticmethod
    def inconclusive(bound: Optional[int] = None,
                     lower: Optional[int] = None) -> "DistanceResult":
        return DistanceResult(INCONCLUSIVE, bound=bound, lower=lower)

    @staticmethod
    def from_interval(lo, up) -> "DistanceResult":
        if lo == up == inf:
            return DistanceResult.infinite()
        if lo == up:
            return DistanceResult.exact(int(lo))
        return DistanceResult.inconclusive(
            bound=None if up == inf else int(up),
            lower=None if lo == -inf else int(lo))

    @property
    def is_exact(self) -> bool:
        return self.kind == EXACT

    @property
    def is_infinite(self) -> bool:
        return self.kind == INFINITE

    @property
    def is_inconclusive(self) -> bool:
        return self.kind == INCONCLUSIVE

    def lo(self):
        if self.is_exact:
            return self.value
        if self.is_infinite:
            return inf
        return -inf if self.lower is None else self.lower

    def up(self):
        if self.is_exact:
            return self.value
        if self.is_infinite:
            return inf
        return inf if self.bound is None else self.bound

    def upper_bound(self) -> Optional[int]:
        u = self.up()
        return None if u == inf else int(u)

    def nonnegative(self) -> Optional[bool]:
        """Tri-bool for `result >= 0`; infinity counts as nonnegative."""
        if self.lo() >= 0:
            return True
        if self.up() < 0:
            return False
        return None

    def at_least(self, n: int) -> Optional[bool]:
        if self.lo() >= n:
            return True
        if self.up() < n:
            return False
        return None

    def __add__(self, other: "DistanceResult") -> "DistanceResult":
        return DistanceResult.from_interval(self.lo() + other.lo(),
                                            self.up() + other.up())

    def __str__(self):
        if self.is_exact:
            return str(self.value)
        if self.is_infinite:
            return "inf"
        lo = "" if self.lower is None else f"{self.lower}<="
        up = "" if self.bound is None else f"<={self.bound}"
        return f"?({lo}r{up})"

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.value is not None:
            out["value"] = self.value
        if self.bound is not None:
            out["bound"] = self.bound
        if self.lower is not None:
            out["lower"] = self.lower
        return out


@dataclass
class Sphere:
    center: DObj
    n: int
    side: str  # "right" or "left"
    members: List[DObj]
    inconclusive: List[DObj]


def hom_edge(w: Window, X: DObj, Y: DObj) -> bool:
    return w.dhom(X, Y) >= 1


def _cone(w: Window, X: DObj, cap: int):
    pos = (X.orbit, X.level)
    w.require(X)
    reach = w.reachable(pos, cap)
    # a cone escaping past the cap must pass through the cap slice: Hom
    # factorizations step through every intermediate level
    closed = all(lv < cap for _, lv in reach)
    return reach, closed


def lightcone_distance(w: Window, X: DObj, Y: DObj,
                       cap: Optional[int] = None) -> DistanceResult:
    w.require(X)
    w.require(Y)
    if cap is None:
        cap = w.radius
    cap = min(cap, w.radius)
    reach, closed = _cone(w, X, cap)
    candidates = [lv - Y.level for (o, lv) in reach if o == Y.orbit]
    if candidates:
        n = min(candidates)
        if closed or w.monotone:
            return DistanceResult.exact(n)
        return DistanceResult.from_interval(X.level - Y.level, n)
    if closed:
        return DistanceResult.infinite()
    floor = cap + 1 - Y.level if w.monotone else -inf
    return DistanceResult.from_interval(floor, inf)


def lightcone_distance_adaptive(w: Window, X: DObj, Y: DObj,
                                stop_lower: Optional[int] = None) -> DistanceResult:
    """Grow the search cap one level at a time until the distance is decided.

    Keeps wild quivers affordable: high window levels are expensive and a
    small cap already certifies every nearby answer.  With `stop_lower`
    the search also stops once the certified lower bound reaches it.
    """
    cap = max(X.level, Y.level)
    while True:
        res = lightcone_distance(w, X, Y, cap)
        if not res.is_inconclusive or cap >= w.radius:
            return res
        if stop_lower is not None and res.lo() >= stop_lower:
            return res
        cap = min(w.radius, cap + 1)


def roundtrip_distance(w: Window, X: DObj, Y: DObj,
                       cap: Optional[int] = None) -> DistanceResult:
    return (lightcone_distance(w, X, Y, cap)
            + lightcone_distance(w, Y, X, cap))


def combine_min(results: Iterable[DistanceResult]) -> DistanceResult:
    """Pointwise minimum; the infimum over an empty family is infinite."""
    lo = inf
    up = inf
    saw_any = False
    for res in results:
        saw_any = True
        lo = min(lo, res.lo())
        up = min(up, res.up())
    if not saw_any:
        return DistanceResult.infinite()
    return DistanceResult.from_interval(lo, up)


def set_distance_from(w: Window, T: Iterable[DObj], X: DObj) -> DistanceResult:
    """r(T, X) = inf over members of r(t, X)."""
    return combine_min(lightcone_distance(w, t, X) for t in T)


def set_distance_to(w: Window, X: DObj, T: Iterable[DObj]) -> DistanceResult:
    """r(X, T) = inf over members of r(X, t)."""
    return combine_min(lightcone_distance(w, X, t) for t in T)


def set_roundtrip(w: Window, T: List[DObj], X: DObj) -> DistanceResult:
    return set_distance_from(w, T, X) + set_distance_to(w, X, T)


def sphere(w: Window, X: DObj, n: int, side: str = "right") -> Sphere:
    """Window objects at one-sided distance exactly n from the center.

    Objects whose certified interval still straddles n are reported in the
    `inconclusive` slot, never silently included or dropped.
    """
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    members = []
    inconclusive = []
    for Y in w.all_objects():
        res = (lightcone_distance(w, X, Y) if side == "right"
               else lightcone_distance(w, Y, X))
        if res.is_exact and res.value == n:
            members.append(Y)
        elif res.is_inconclusive and res.lo() <= n <= res.up():
            inconclusive.append(Y)
    return Sphere(X, n, side, members, inconclusive)


def sphere_in_section(w: Window, picks: Set[Tuple[str, int]], X: DObj,
                      n: int, side: str = "right") -> Sphere:
    full = sphere(w, X, n, side)
    full.members = [Y for Y in full.members if (Y.orbit, Y.level) in picks]
    full.inconclusive = [Y for Y in full.inconclusive
                         if (Y.orbit, Y.level) in picks]
    return full


def is_directing(w: Window, X: DObj):
    """Tri-bool: no nontrivial Hom-cycle through X.

    Radical edges are Hom edges between distinct window objects plus a
    self-loop when the endomorphism space exceeds the scalars.
    """
    w.require(X)
    pos = (X.orbit, X.level)
    if w.dhom(X, X) >= 2:
        return False
    reach, closed = _cone(w, X, w.radius)
    for other in reach:
        if other == pos:
            continue
        if pos in w.reachable(other):
            return False
    if closed or w.monotone:
        return True
    return None
