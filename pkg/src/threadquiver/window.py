"""Finite tau-closed windows of the translation quiver around the projectives.

A window holds, for every vertex orbit, the objects tau^{-level} P_vertex
for levels -radius .. radius.  Each object is a pair (module, shift); tau
of a projective jumps to the matching injective one shift down, and dually.
Hom dimensions between window objects are served from a table keyed by
(orbit, orbit, level difference), which is valid because tau is an
autoequivalence.

Windows over wild quivers are built lazily: tau-orbits of such quivers
grow fast, and a capped search never has to materialize the expensive high
levels.  Every Hom entry computed with a negative level difference is
checked to vanish; this level-monotonicity is what certifies minimality of
search results (eager windows validate the whole negative band up front).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import reps
from .errors import CyclicQuiver, EngineError, NotInWindow
from .quivers import Quiver, is_acyclic
from .reps import QRep


@dataclass
class DObj:
    """An indecomposable object of the derived category: module plus shift."""
    orbit: str
    level: int
    module: QRep
    shift: int

    @property
    def name(self) -> str:
        return f"{self.orbit}@{self.level}"

    def __repr__(self):
        return f"<{self.name} shift={self.shift} dim={self.module.dim_vector()}>"


class Window:
    def __init__(self, quiver: Quiver, radius: int, lazy: bool = False):
        if radius < 1:
            raise ValueError("radius must be >= 1")
        if not is_acyclic(quiver):
            raise CyclicQuiver("windows exist only over acyclic quivers")
        self.quiver = quiver
        self.radius = radius
        self.lazy = lazy
        self.objects: Dict[Tuple[str, int], DObj] = {}
        self.mesh_arrows: List[Tuple[Tuple[str, int], Tuple[str, int]]] = []
        self._dhom: Dict[Tuple[str, str, int], int] = {}
        self._shift_cache: Dict[Tuple[str, int, int], Optional[Tuple[str, int]]] = {}
        self._reach: Dict[Tuple[str, int, int], set] = {}
        self.monotone = True
        for x in quiver.vertices:
            self.objects[(x, 0)] = DObj(x, 0, reps.projective(quiver, x), 0)
        if not lazy:
            self._materialize_all()
            self._build_mesh()
            self._validate_monotone()

    # -- construction --------------------------------------------------------

    def _ensure(self, orbit: str, level: int) -> DObj:
        if (orbit, level) in self.objects:
            return self.objects[(orbit, level)]
        if not (-self.radius <= level <= self.radius):
            raise NotInWindow(f"{orbit}@{level}")
        q = self.quiver
        if level > 0:
            prev = self._ensure(orbit, level - 1)
            inj = reps.is_injective_module(q, prev.module)
            if inj is not None:
                obj = DObj(orbit, level, reps.projective(q, inj), prev.shift + 1)
            else:
                obj = DObj(orbit, level,
                           reps.tau_inv_module(q, prev.module), prev.shift)
        else:
            nxt = self._ensure(orbit, level + 1)
            proj = reps.is_projective_module(q, nxt.module)
            if proj is not None:
                obj = DObj(orbit, level, reps.injective(q, proj), nxt.shift - 1)
            else:
                obj = DObj(orbit, level, reps.tau_module(q, nxt.module), nxt.shift)
        self.objects[(orbit, level)] = obj
        return obj

    def _materialize_all(self):
        for x in self.quiver.vertices:
            for lv in range(1, self.radius + 1):
                self._ensure(x, lv)
            for lv in range(-1, -self.radius - 1, -1):
                self._ensure(x, lv)

    def _build_mesh(self):
        for a in self.quiver.arrows:
            for lv in range(-self.radius, self.radius + 1):
                self._mesh(a.src, lv, a.dst, lv)
                if lv + 1 <= self.radius:
                    self._mesh(a.dst, lv, a.src, lv + 1)

    def _mesh(self, o1, l1, o2, l2):
        X = self.objects[(o1, l1)]
        Y = self.objects[(o2, l2)]
        if self.dhom(X, Y) < 1:
            raise EngineError(f"mesh arrow {X.name} -> {Y.name} has no Hom")
        self.mesh_arrows.append(((o1, l1), (o2, l2)))

    def _validate_monotone(self):
        """Level-monotonicity of the Hom relation, the certificate behind
        exactness of capped searches; checked on the whole negative band."""
        for o1 in self.quiver.vertices:
            for o2 in self.quiver.vertices:
                for delta in range(-2 * self.radius, 0):
                    self._table(o1, o2, delta)

    # -- object access --------------------------------------------------------

    def positions(self) -> List[Tuple[str, int]]:
        if not self.lazy:
            return sorted(self.objects.keys())
        return [(o, lv) for o in sorted(self.quiver.vertices)
                for lv in range(-self.radius, self.radius + 1)]

    def all_objects(self) -> List[DObj]:
        return [self.get(o, lv) for o, lv in self.positions()]

    def get(self, orbit: str, level: int) -> DObj:
        if (orbit, level) in self.objects:
            return self.objects[(orbit, level)]
        if orbit not in self.quiver.vertices:
            raise NotInWindow(f"{orbit}@{level}")
        return self._ensure(orbit, level)

    def has(self, orbit: str, level: int) -> bool:
        return (orbit in self.quiver.vertices
                and -self.radius <= level <= self.radius)

    def require(self, X: DObj) -> DObj:
        if not self.has(X.orbit, X.level):
            raise NotInWindow(getattr(X, "name", repr(X)))
        return self.get(X.orbit, X.level)

    def is_boundary(self, X: DObj) -> bool:
        return abs(X.level) == self.radius

    # -- Hom table -------------------------------------------------------------

    def _pair_value(self, X: DObj, Y: DObj) -> int:
        ds = Y.shift - X.shift
        if ds == 0:
            return reps.hom_dim(X.module, Y.module)
        if ds == 1:
            return reps.ext_dim(X.module, Y.module)
        return 0

    def dhom(self, X: DObj, Y: DObj) -> int:
        """Hom dimension in the derived category between window objects.

        Cached by (orbit, orbit, level difference): tau-equivariance makes
        the value representative-independent.
        """
        X = self.require(X)
        Y = self.require(Y)
        key = (X.orbit, Y.orbit, Y.level - X.level)
        hit = self._dhom.get(key)
        if hit is not None:
            return hit
        val = self._pair_value(X, Y)
        if Y.level < X.level and val:
            self.monotone = False
            raise EngineError(
                f"backward Hom {X.name} -> {Y.name}; "
                "window is not level-monotone")
        self._dhom[key] = val
        return val

    def _table(self, o1: str, o2: str, delta: int) -> int:
        key = (o1, o2, delta)
        hit = self._dhom.get(key)
        if hit is not None:
            return hit
        r = self.radius
        if delta >= 0:
            l1 = -(delta // 2)
        else:
            l1 = (-delta) // 2
        l1 = max(-r, min(r, l1))
        l2 = l1 + delta
        if not (-r <= l2 <= r):
            raise NotInWindow(f"level difference {delta} exceeds the window")
        return self.dhom(self.get(o1, l1), self.get(o2, l2))

    # -- translations ----------------------------------------------------------

    def tau(self, X: DObj) -> DObj:
        return self.get(X.orbit, X.level - 1)

    def tau_inv(self, X: DObj) -> DObj:
        return self.get(X.orbit, X.level + 1)

    def shifted(self, X: DObj, k: int) -> Optional[DObj]:
        """The window object isomorphic to X[k], if the window contains it."""
        key = (X.orbit, X.level, k)
        if key in self._shift_cache:
            pos = self._shift_cache[key]
            return self.objects[pos] if pos else None
        target_shift = X.shift + k
        found = None
        for pos in self.positions():
            Y = self.get(*pos)
            if Y.shift == target_shift and Y.module.dim == X.module.dim:
                if reps.is_iso(Y.module, X.module):
                    found = pos
                    break
        self._shift_cache[key] = found
        return self.objects[found] if found else None

    def serre(self, X: DObj) -> Optional[DObj]:
        """S X = (tau X)[1] when both stops stay inside the window."""
        if not self.has(X.orbit, X.level - 1):
            return None
        return self.shifted(self.tau(X), 1)

    # -- Hom-edge graph ----------------------------------------------------------

    def reachable(self, pos: Tuple[str, int], cap: Optional[int] = None) -> set:
        """Positions reachable along forward Hom edges up to level `cap`.

        Level-monotonicity makes the forward search complete: a Hom path
        can never descend, so anything reachable at a level within the cap
        is found here.  The position itself is included.
        """
        if cap is None:
            cap = self.radius
        key = (pos[0], pos[1], cap)
        hit = self._reach.get(key)
        if hit is not None:
            return hit
        seen = {pos}
        stack = [pos]
        while stack:
            cur = stack.pop()
            X = self.get(*cur)
            for o2 in self.quiver.vertices:
                for l2 in range(cur[1], cap + 1):
                    nxt = (o2, l2)
                    if nxt in seen or nxt == cur:
                        continue
                    if self.dhom(X, self.get(o2, l2)) >= 1:
                        seen.add(nxt)
                        stack.append(nxt)
        self._reach[key] = seen
        return seen

    def edges_from(self, pos: Tuple[str, int]) -> List[Tuple[str, int]]:
        X = self.get(*pos)
        out = []
        for o2 in self.quiver.vertices:
            for l2 in range(pos[1], self.radius + 1):
                if (o2, l2) != pos and self.dhom(X, self.get(o2, l2)) >= 1:
                    out.append((o2, l2))
        return sorted(out)

    def find_module(self, module: QRep, shift: int) -> Optional[DObj]:
        """Window object isomorphic to the given module with the given shift."""
        for pos in self.positions():
            Y = self.get(*pos)
            if Y.shift == shift and Y.module.dim == module.dim \
                    and reps.is_iso(Y.module, module):
                return Y
        return None

    # -- dump ---------------------------------------------------------------------

    def dump(self, full: bool = False) -> dict:
        if not self.mesh_arrows:
            self._materialize_all()
            self._build_mesh()
        objs = []
        for (o, lv) in self.positions():
            X = self.get(o, lv)
            rec = {
                "orbit": o,
                "level": lv,
                "shift": X.shift,
                "dim": {v: X.module.dim[v] for v in self.quiver.vertices
                        if X.module.dim[v]},
            }
            if full:
                rec["mats"] = {aid: [[str(x) for x in row] for row in m]
                               for aid, m in X.module.mats.items()}
            objs.append(rec)
        return {
            "schema": 1,
            "radius": self.radius,
            "vertices": list(self.quiver.vertices),
            "objects": objs,
            "arrows": [{"from": f"{a[0]}@{a[1]}", "to": f"{b[0]}@{b[1]}"}
                       for a, b in self.mesh_arrows],
        }

    def dump_json(self, full: bool = False) -> str:
        return json.dumps(self.dump(full), indent=2, sort_keys=True)


def build_window(q: Quiver, radius: int, lazy: bool = False) -> Window:
    return Window(q, radius, lazy=lazy)
