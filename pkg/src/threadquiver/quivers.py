"""Thread quivers: data model, file format, expansion and contraction.

A thread quiver is a finite quiver in which some arrows carry a linear
order as label; such an arrow stands for the completed chain
N . (label x Z) . -N between its endpoints.  The infinite chain is never
materialized: `expand_thread` cuts a finite window out of it and
`contract_threads` is the finite-scale inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Tuple

from . import orders
from .errors import (CyclicQuiver, DuplicateId, NotAZigZagTail,
                     QuiverSyntaxError, SymbolicOrderOpaque, UnknownThread,
                     UnknownVertex)
from .orders import LinearOrder


class Arrow(NamedTuple):
    src: str
    dst: str
    aid: str


class ThreadArrow(NamedTuple):
    src: str
    dst: str
    aid: str
    label: LinearOrder


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]

    def __post_init__(self):
        _check_ids(self.vertices, [a.aid for a in self.arrows])
        vs = set(self.vertices)
        for a in self.arrows:
            if a.src not in vs:
                raise UnknownVertex(a.src)
            if a.dst not in vs:
                raise UnknownVertex(a.dst)

    def arrows_from(self, v: str) -> List[Arrow]:
        return [a for a in self.arrows if a.src == v]

    def arrows_into(self, v: str) -> List[Arrow]:
        return [a for a in self.arrows if a.dst == v]


@dataclass(frozen=True)
class ThreadQuiver:
    vertices: Tuple[str, ...]
    standard_arrows: Tuple[Arrow, ...] = ()
    thread_arrows: Tuple[ThreadArrow, ...] = ()

    def __post_init__(self):
        _check_ids(self.vertices,
                   [a.aid for a in self.standard_arrows]
                   + [t.aid for t in self.thread_arrows])
        vs = set(self.vertices)
        for a in list(self.standard_arrows) + list(self.thread_arrows):
            if a.src not in vs:
                raise UnknownVertex(a.src)
            if a.dst not in vs:
                raise UnknownVertex(a.dst)

    def thread(self, tid: str) -> ThreadArrow:
        for t in self.thread_arrows:
            if t.aid == tid:
                return t
        raise UnknownThread(tid)


def _check_ids(vertices, arrow_ids):
    seen = set()
    for v in vertices:
        if v in seen:
            raise DuplicateId(f"vertex {v!r}")
        seen.add(v)
    seen = set()
    for aid in arrow_ids:
        if aid in seen:
            raise DuplicateId(f"arrow {aid!r}")
        seen.add(aid)


def quiver(vertices, arrows) -> Quiver:
    """Convenience constructor; arrows as (src, dst) or (src, dst, id)."""
    out = []
    used = {a[2] for a in arrows if len(a) > 2}
    k = 1
    for a in arrows:
        if len(a) > 2:
            out.append(Arrow(a[0], a[1], a[2]))
        else:
            while f"a{k}" in used:
                k += 1
            used.add(f"a{k}")
            out.append(Arrow(a[0], a[1], f"a{k}"))
    return Quiver(tuple(vertices), tuple(out))


# -- file format -----------------------------------------------------------

def parse(text: str) -> ThreadQuiver:
    vertices: List[str] = []
    std: List[Arrow] = []
    thr: List[ThreadArrow] = []
    auto = 1
    used_ids = set()

    def fresh(prefix):
        nonlocal auto
        while f"{prefix}{auto}" in used_ids:
            auto += 1
        used_ids.add(f"{prefix}{auto}")
        return f"{prefix}{auto}"

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertex":
            if len(parts) < 2:
                raise QuiverSyntaxError(ln, len(raw) + 1, "vertex id")
            for v in parts[1:]:
                vertices.append(v)
        elif parts[0] == "arrow":
            if len(parts) < 3:
                raise QuiverSyntaxError(ln, 1, "arrow <src> <dst>")
            src, dst = parts[1], parts[2]
            aid = None
            for extra in parts[3:]:
                if extra.startswith("id="):
                    aid = extra[3:]
                else:
                    raise QuiverSyntaxError(ln, raw.find(extra) + 1, "id=<id>")
            if aid is None:
                aid = fresh("a")
            else:
                used_ids.add(aid)
            std.append(Arrow(src, dst, aid))
        elif parts[0] == "thread":
            if len(parts) < 4:
                raise QuiverSyntaxError(ln, 1, "thread <src> <dst> <order>")
            src, dst = parts[1], parts[2]
            rest = line.split(None, 3)[3]
            aid = None
            if " id=" in rest:
                rest, _, tail = rest.rpartition(" id=")
                aid = tail.strip()
                used_ids.add(aid)
            try:
                label = orders.parse_order(rest.strip())
            except QuiverSyntaxError as exc:
                raise QuiverSyntaxError(ln, exc.column, exc.expected) from None
            if aid is None:
                aid = fresh("t")
            thr.append(ThreadArrow(src, dst, aid, label))
        else:
            raise QuiverSyntaxError(ln, 1, "vertex/arrow/thread")
    return ThreadQuiver(tuple(vertices), tuple(std), tuple(thr))


def serialize(tq: ThreadQuiver) -> str:
    lines = []
    if tq.vertices:
        lines.append("vertex " + " ".join(sorted(tq.vertices)))
    for a in sorted(tq.standard_arrows, key=lambda a: a.aid):
        lines.append(f"arrow {a.src} {a.dst} id={a.aid}")
    for t in sorted(tq.thread_arrows, key=lambda t: t.aid):
        lines.append(f"thread {t.src} {t.dst} {orders.serialize(t.label)} id={t.aid}")
    return "\n".join(lines) + "\n"


# -- plain quiver utilities -------------------------------------------------

def underlying_quiver(tq: ThreadQuiver) -> Quiver:
    """Forget labels; every thread arrow becomes one plain arrow."""
    arrows = tuple(Arrow(a.src, a.dst, a.aid) for a in tq.standard_arrows)
    arrows += tuple(Arrow(t.src, t.dst, t.aid) for t in tq.thread_arrows)
    return Quiver(tq.vertices, arrows)


def is_acyclic(q: Quiver) -> bool:
    indeg = {v: 0 for v in q.vertices}
    for a in q.arrows:
        indeg[a.dst] += 1
    queue = [v for v in q.vertices if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for a in q.arrows_from(v):
            indeg[a.dst] -= 1
            if indeg[a.dst] == 0:
                queue.append(a.dst)
    return seen == len(q.vertices)


def is_strongly_locally_finite(tq: ThreadQuiver) -> bool:
    """For finite data this reduces to acyclicity of the underlying quiver."""
    return is_acyclic(underlying_quiver(tq))


def topological_order(q: Quiver) -> List[str]:
    if not is_acyclic(q):
        raise CyclicQuiver("quiver has a directed cycle")
    indeg = {v: 0 for v in q.vertices}
    for a in q.arrows:
        indeg[a.dst] += 1
    queue = sorted(v for v in q.vertices if indeg[v] == 0)
    out = []
    while queue:
        v = queue.pop(0)
        out.append(v)
        changed = []
        for a in q.arrows_from(v):
            indeg[a.dst] -= 1
            if indeg[a.dst] == 0:
                changed.append(a.dst)
        queue.extend(sorted(changed))
    return out


def path_count(q: Quiver, x: str, y: str) -> int:
    """Number of directed paths x -> y; the trivial path counts when x = y."""
    if x not in q.vertices:
        raise UnknownVertex(x)
    if y not in q.vertices:
        raise UnknownVertex(y)
    if not is_acyclic(q):
        raise CyclicQuiver("path counts diverge on cyclic quivers")
    memo: Dict[str, int] = {}

    def count(v):
        if v == y:
            return 1
        if v in memo:
            return memo[v]
        memo[v] = sum(count(a.dst) for a in q.arrows_from(v))
        return memo[v]

    return count(x)


def enumerate_paths(q: Quiver, x: str, y: str) -> List[Tuple[str, ...]]:
    """All paths x -> y as arrow-id tuples (the trivial path is ())."""
    if not is_acyclic(q):
        raise CyclicQuiver("path enumeration diverges on cyclic quivers")
    out = []

    def walk(v, acc):
        if v == y:
            out.append(tuple(acc))
        for a in q.arrows_from(v):
            acc.append(a.aid)
            walk(a.dst, acc)
            acc.pop()

    walk(x, [])
    return out


# -- thread expansion -------------------------------------------------------

@dataclass
class ThreadExpansion:
    quiver: Quiver
    element_map: Dict[str, object]  # vertex -> address into the completion
    elided: frozenset  # arrow ids that stand for a skipped segment
    completion: LinearOrder
    thread_id: str


def _segment_window(seg: LinearOrder, depth: int, first: bool, last: bool):
    """Leaf addresses materialized from one canonical segment."""
    if isinstance(seg, orders.NatUp):
        end = depth if first else depth - 1
        return list(range(0, end + 1)) if end >= 0 else []
    if isinstance(seg, orders.NatDown):
        start = -(depth + 1) if last else -depth
        return list(range(start, 0)) if start <= -1 else []
    if isinstance(seg, orders.Ints):
        return list(range(0, depth))
    if isinstance(seg, orders.Fin):
        if seg.n <= 2 * depth:
            return list(range(seg.n))
        return list(range(depth)) + list(range(seg.n - depth, seg.n))
    if isinstance(seg, orders.Labeled) and depth > 0:
        raise SymbolicOrderOpaque(
            f"cannot materialize elements of {seg.name!r}")
    return []  # symbolic or product segments are elided wholesale


def expand_thread(tq: ThreadQuiver, thread_id: str, depth: int) -> ThreadExpansion:
    """Replace one thread arrow by a finite window of its completed chain.

    The thread's endpoints realize the minimum and maximum of the chain;
    `depth` further elements are cut from every concrete segment.  Gaps
    between materialized stretches are bridged by arrows tagged as elided.
    Other thread arrows are coarsened to plain arrows.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    th = tq.thread(thread_id)
    completion = orders.thread_completion(th.label)
    segs = orders.segments(completion)

    elems = []  # (address, (segment, leaf)) in global order
    for i, seg in enumerate(segs):
        leaves = _segment_window(seg, depth, first=(i == 0), last=(i == len(segs) - 1))
        for leaf in leaves:
            elems.append((_seg_address(segs, i, leaf), (i, leaf)))

    vertices = [v for v in tq.vertices]
    arrows = [Arrow(a.src, a.dst, a.aid) for a in tq.standard_arrows]
    arrows += [Arrow(t.src, t.dst, t.aid) for t in tq.thread_arrows if t.aid != thread_id]

    names = []
    element_map: Dict[str, object] = {}
    for k, (addr, _) in enumerate(elems):
        if k == 0:
            name = th.src
        elif k == len(elems) - 1:
            name = th.dst
        else:
            name = f"{thread_id}_v{k}"
            vertices.append(name)
        names.append(name)
        element_map[name] = addr

    used = {a.aid for a in arrows}
    elided = set()
    serial = 1
    for k in range(len(elems) - 1):
        addr, _ = elems[k]
        nxt, _ = elems[k + 1]
        while f"{thread_id}_a{serial}" in used:
            serial += 1
        aid = f"{thread_id}_a{serial}"
        used.add(aid)
        serial += 1
        arrows.append(Arrow(names[k], names[k + 1], aid))
        if orders.successor(completion, addr) != nxt:
            elided.add(aid)
    if len(elems) < 2:
        raise SymbolicOrderOpaque("completion window has no concrete ends")
    return ThreadExpansion(Quiver(tuple(vertices), tuple(arrows)),
                           element_map, frozenset(elided), completion, thread_id)


def _seg_address(segs, i, leaf):
    """Address of `leaf` inside segment i of a right-nested chain."""
    if len(segs) == 1:
        return leaf
    addr = leaf if i == len(segs) - 1 else orders.L(leaf)
    for _ in range(i):
        addr = orders.R(addr)
    return addr


def segment_start_cut(label_or_completion: LinearOrder, index: int):
    """Cut address for the lower boundary of canonical segment `index`."""
    segs = orders.segments(label_or_completion)
    if not 0 <= index < len(segs):
        raise ValueError(f"segment index {index} out of range")
    addr = orders.START
    if index < len(segs) - 1:
        addr = orders.L(addr)
    for _ in range(index):
        addr = orders.R(addr)
    return addr


# -- contraction ------------------------------------------------------------

def contract_threads(q, max_thread_report: Optional[int] = None) -> ThreadQuiver:
    """Contract maximal interior chains into finite-labeled thread arrows.

    Interior vertices have exactly one incoming and one outgoing arrow and
    no incident thread arrow.  Chains longer than `max_thread_report`
    (when given) are left alone.  Idempotent.
    """
    if isinstance(q, Quiver):
        tq = ThreadQuiver(q.vertices,
                          tuple(Arrow(a.src, a.dst, a.aid) for a in q.arrows))
    else:
        tq = q
    if not is_acyclic(underlying_quiver(tq)):
        raise CyclicQuiver("contraction requires an acyclic quiver")

    incident_thread = set()
    for t in tq.thread_arrows:
        incident_thread.add(t.src)
        incident_thread.add(t.dst)
    ins = {v: [] for v in tq.vertices}
    outs = {v: [] for v in tq.vertices}
    for a in tq.standard_arrows:
        outs[a.src].append(a)
        ins[a.dst].append(a)

    def interior(v):
        return (v not in incident_thread
                and len(ins[v]) == 1 and len(outs[v]) == 1)

    removed_vertices = set()
    removed_arrows = set()
    new_threads = []
    used_ids = ({a.aid for a in tq.standard_arrows}
                | {t.aid for t in tq.thread_arrows})
    serial = 1
    for v in tq.vertices:
        if not interior(v) or v in removed_vertices:
            continue
        chain = [v]
        while True:
            prev = ins[chain[0]][0].src
            if interior(prev) and prev not in chain:
                chain.insert(0, prev)
            else:
                break
        while True:
            nxt = outs[chain[-1]][0].dst
            if interior(nxt) and nxt not in chain:
                chain.append(nxt)
            else:
                break
        if max_thread_report is not None and len(chain) > max_thread_report:
            continue
        a = ins[chain[0]][0].src
        b = outs[chain[-1]][0].dst
        removed_vertices.update(chain)
        removed_arrows.add(ins[chain[0]][0].aid)
        for w in chain:
            removed_arrows.add(outs[w][0].aid)
        while f"t{serial}" in used_ids:
            serial += 1
        tid = f"t{serial}"
        used_ids.add(tid)
        new_threads.append(ThreadArrow(a, b, tid, orders.Fin(len(chain))))

    vertices = tuple(v for v in tq.vertices if v not in removed_vertices)
    std = tuple(a for a in tq.standard_arrows if a.aid not in removed_arrows)
    threads = tq.thread_arrows + tuple(new_threads)
    return ThreadQuiver(vertices, std, threads)


# -- zig-zag rewrites --------------------------------------------------------

def _tail_arrows(tq: ThreadQuiver, base: str, tail: List[str]):
    """Arrows along base -> tail[0] -> tail[1] -> ..., with orientation."""
    both = list(tq.standard_arrows) + list(tq.thread_arrows)
    hops = []
    prev = base
    for v in tail:
        between = [a for a in both if {a.src, a.dst} == {prev, v}]
        if len(between) != 1:
            raise NotAZigZagTail(f"no unique arrow between {prev} and {v}")
        a = between[0]
        away = a.src == prev
        if isinstance(a, ThreadArrow) and not away:
            raise NotAZigZagTail(f"thread arrow {a.aid} points toward the base")
        hops.append((a, away))
        prev = v
    return hops


def zigzag_to_thread(tq: ThreadQuiver, base: str, tail: List[str],
                     fresh_vertex: str = "z") -> ThreadQuiver:
    """Replace a hanging zig-zag tail by a single labeled thread arrow.

    The tail must be a path of degree-two vertices hanging off `base`,
    thread arrows pointing away from the base.  A one-hop tail consisting
    of a single thread arrow keeps its label; otherwise the emitted label
    is an opaque name recording the tail's shape, since no closed form
    for the replacement order exists.
    """
    if base not in tq.vertices:
        raise UnknownVertex(base)
    if not tail:
        raise NotAZigZagTail("empty tail")
    hops = _tail_arrows(tq, base, tail)
    tail_set = set(tail)
    both = list(tq.standard_arrows) + list(tq.thread_arrows)
    for v in tail[:-1]:
        deg = sum(1 for a in both if v in (a.src, a.dst))
        if deg != 2:
            raise NotAZigZagTail(f"{v} attaches elsewhere")
    enddeg = sum(1 for a in both if tail[-1] in (a.src, a.dst))
    if enddeg != 1:
        raise NotAZigZagTail(f"{tail[-1]} is not the free end of the tail")

    if len(hops) == 1 and isinstance(hops[0][0], ThreadArrow):
        label = hops[0][0].label
    else:
        tokens = []
        for a, away in hops:
            if isinstance(a, ThreadArrow):
                tokens.append(f">[{orders.serialize(a.label)}]")
            else:
                tokens.append(">" if away else "<")
        label = orders.Labeled("zz(" + "".join(tokens) + ")",
                               locally_discrete=True,
                               countable_cofinality=True,
                               countable_coinitiality=True)

    z = fresh_vertex
    k = 1
    while z in tq.vertices:
        z = f"{fresh_vertex}{k}"
        k += 1
    drop = {a.aid for a, _ in hops}
    used = ({a.aid for a in tq.standard_arrows}
            | {t.aid for t in tq.thread_arrows}) - drop
    serial = 1
    while f"t{serial}" in used:
        serial += 1
    vertices = tuple(v for v in tq.vertices if v not in tail_set) + (z,)
    std = tuple(a for a in tq.standard_arrows if a.aid not in drop)
    thr = tuple(t for t in tq.thread_arrows if t.aid not in drop)
    thr += (ThreadArrow(base, z, f"t{serial}", label),)
    return ThreadQuiver(vertices, std, thr)


def thread_to_zigzag(tq: ThreadQuiver, thread_id: str,
                     shape: Tuple[int, ...]) -> ThreadQuiver:
    """Re-expand a thread arrow into a finite zig-zag tail.

    `shape` lists the run lengths; odd-indexed runs point away from the
    base, even-indexed runs point back.  The first away hop carries the
    thread's label, so shape (1,) is inverse to `zigzag_to_thread` on a
    one-hop tail.
    """
    th = tq.thread(thread_id)
    if not shape or any(s < 1 for s in shape):
        raise NotAZigZagTail("shape must be a tuple of positive lengths")
    far = th.dst
    both = list(tq.standard_arrows) + list(tq.thread_arrows)
    far_deg = sum(1 for a in both if far in (a.src, a.dst))
    if far_deg != 1:
        raise NotAZigZagTail(f"{far} has other attachments")

    vertices = [v for v in tq.vertices if v != far]
    std = [a for a in tq.standard_arrows]
    thr = [t for t in tq.thread_arrows if t.aid != thread_id]
    used = {a.aid for a in std} | {t.aid for t in thr}

    def fresh(prefix, serial=[1]):
        while f"{prefix}{serial[0]}" in used:
            serial[0] += 1
        used.add(f"{prefix}{serial[0]}")
        return f"{prefix}{serial[0]}"

    anchor = th.src
    vid = 1
    first_hop = True
    for run, length in enumerate(shape):
        away = run % 2 == 0
        for _ in range(length):
            w = f"{thread_id}_w{vid}"
            vid += 1
            vertices.append(w)
            if first_hop:
                thr.append(ThreadArrow(anchor, w, fresh("t"), th.label))
                first_hop = False
            elif away:
                std.append(Arrow(anchor, w, fresh("a")))
            else:
                std.append(Arrow(w, anchor, fresh("a")))
            anchor = w
    return ThreadQuiver(tuple(vertices), tuple(std), tuple(thr))


# -- DOT export --------------------------------------------------------------

def to_dot(tq, highlight=None, elided=frozenset()) -> str:
    """Deterministic DOT text; thread arrows dashed, elided arrows dotted."""
    if isinstance(tq, Quiver):
        tq = ThreadQuiver(tq.vertices,
                          tuple(Arrow(a.src, a.dst, a.aid) for a in tq.arrows))
    highlight = set(highlight or ())
    lines = ["digraph quiver {"]
    for v in sorted(tq.vertices):
        attrs = ' [peripheries=2]' if v in highlight else ""
        lines.append(f'  "{v}"{attrs};')
    drawn = []
    for a in tq.standard_arrows:
        style = "dotted" if a.aid in elided else "solid"
        drawn.append((a.aid, f'  "{a.src}" -> "{a.dst}" [style={style}, id="{a.aid}"];'))
    for t in tq.thread_arrows:
        lbl = orders.serialize(t.label)
        drawn.append((t.aid,
                      f'  "{t.src}" -> "{t.dst}" [style=dashed, label="{lbl}", id="{t.aid}"];'))
    for _, line in sorted(drawn):
        lines.append(line)
    lines.append("}")
    return "\n".join(lines) + "\n"
