import pytest

from threadquiver import orders, quivers as qv
from threadquiver.errors import (CyclicQuiver, DuplicateId, NotAZigZagTail,
                                 QuiverSyntaxError, UnknownVertex)
from tests.conftest import LINEAR_A, RIB


def test_parse_thread_arrow():
    tq = qv.parse("vertex x y\nthread x y fin(1)")
    assert len(tq.thread_arrows) == 1
    assert tq.thread_arrows[0].label == orders.Fin(1)


def test_parse_parallel_arrows():
    tq = qv.parse("vertex a b\narrow a b\narrow a b")
    assert len(tq.standard_arrows) == 2
    ids = {a.aid for a in tq.standard_arrows}
    assert len(ids) == 2


def test_parse_unknown_vertex():
    with pytest.raises(UnknownVertex):
        qv.parse("vertex a\narrow a z")


def test_parse_duplicates_rejected():
    with pytest.raises(DuplicateId):
        qv.parse("vertex a a")
    with pytest.raises(DuplicateId):
        qv.parse("vertex a b\narrow a b id=k\narrow a b id=k")


def test_parse_syntax_error_carries_position():
    with pytest.raises(QuiverSyntaxError) as err:
        qv.parse("vertex a b\nfrob a b")
    assert err.value.line == 2


def test_round_trip():
    text = "vertex a b x y\narrow a b id=a1\nthread x y (N . -N) id=t1\n"
    tq = qv.parse(text)
    again = qv.parse(qv.serialize(tq))
    assert qv.serialize(again) == qv.serialize(tq)


def test_underlying_quiver():
    tq = qv.parse("vertex x y\nthread x y fin(3) id=t")
    uq = qv.underlying_quiver(tq)
    assert [(a.src, a.dst) for a in uq.arrows] == [("x", "y")]
    pure = qv.parse("vertex a b\narrow a b id=z")
    assert qv.underlying_quiver(pure).arrows == qv.underlying_quiver(pure).arrows


def test_strong_local_finiteness():
    assert qv.is_strongly_locally_finite(qv.parse("vertex a b c\narrow a b\narrow b c"))
    loop = qv.ThreadQuiver(("a",), (qv.Arrow("a", "a", "l"),), ())
    assert not qv.is_strongly_locally_finite(loop)
    cyc = qv.ThreadQuiver(("a", "b"),
                          (qv.Arrow("a", "b", "1"), qv.Arrow("b", "a", "2")), ())
    assert not qv.is_strongly_locally_finite(cyc)


def test_path_count_examples():
    assert qv.path_count(RIB, "a", "c") == 3
    a2 = LINEAR_A[2]
    assert qv.path_count(a2, "a", "b") == 1
    assert qv.path_count(a2, "b", "a") == 0
    assert qv.path_count(RIB, "d", "d") == 1


def test_path_count_matches_enumeration():
    for q in [RIB, LINEAR_A[4]]:
        for x in q.vertices:
            for y in q.vertices:
                assert qv.path_count(q, x, y) == len(qv.enumerate_paths(q, x, y))


def test_path_count_recurrence():
    q = RIB
    for x in q.vertices:
        for y in q.vertices:
            if x == y:
                continue
            total = sum(qv.path_count(q, a.dst, y) for a in q.arrows_from(x))
            assert qv.path_count(q, x, y) == total


def test_path_count_rejects_cycles():
    cyc = qv.Quiver(("a", "b"), (qv.Arrow("a", "b", "1"), qv.Arrow("b", "a", "2")))
    with pytest.raises(CyclicQuiver):
        qv.path_count(cyc, "a", "b")


def test_expand_depth0():
    tq = qv.parse("vertex x y\nthread x y fin(0) id=t0")
    ex = qv.expand_thread(tq, "t0", 0)
    assert [(a.src, a.dst) for a in ex.quiver.arrows] == [("x", "y")]


def test_expand_fin0_depth2():
    tq = qv.parse("vertex x y\nthread x y fin(0) id=t0")
    ex = qv.expand_thread(tq, "t0", 2)
    chain = [(a.src, a.dst, a.aid in ex.elided) for a in ex.quiver.arrows]
    assert len(chain) == 5
    assert sum(1 for _, _, e in chain if e) == 1  # single gap in the middle
    assert chain[0][0] == "x" and chain[-1][1] == "y"


def test_expand_element_map_respects_order():
    tq = qv.parse("vertex x y\nthread x y fin(1) id=t0")
    ex = qv.expand_thread(tq, "t0", 2)
    chain = ["x"] + [v for v in ex.quiver.vertices if v.startswith("t0_")] + ["y"]
    for u, v in zip(chain, chain[1:]):
        assert orders.compare(ex.completion, ex.element_map[u],
                              ex.element_map[v]) == -1


def test_expand_keeps_ambient_arrows():
    tq = qv.parse("vertex x y z\nthread x y fin(0) id=t0\narrow y z id=a9")
    ex = qv.expand_thread(tq, "t0", 1)
    assert any(a.aid == "a9" for a in ex.quiver.arrows)


def test_contract_simple_chain():
    q = qv.quiver(["a", "v1", "v2", "b"], [("a", "v1"), ("v1", "v2"), ("v2", "b")])
    tq = qv.contract_threads(q)
    assert len(tq.thread_arrows) == 1
    th = tq.thread_arrows[0]
    assert (th.src, th.dst, th.label) == ("a", "b", orders.Fin(2))


def test_contract_a2_unchanged():
    tq = qv.contract_threads(LINEAR_A[2])
    assert not tq.thread_arrows


def test_contract_rib_unchanged():
    tq = qv.contract_threads(RIB)
    assert not tq.thread_arrows
    assert set(tq.vertices) == set(RIB.vertices)


def test_contract_idempotent():
    q = qv.quiver(["a", "v1", "v2", "b"], [("a", "v1"), ("v1", "v2"), ("v2", "b")])
    once = qv.contract_threads(q)
    twice = qv.contract_threads(once)
    assert qv.serialize(twice) == qv.serialize(once)


def test_contract_respects_cap():
    q = qv.quiver(["a", "v1", "v2", "b"], [("a", "v1"), ("v1", "v2"), ("v2", "b")])
    assert not qv.contract_threads(q, max_thread_report=1).thread_arrows
    assert qv.contract_threads(q, max_thread_report=2).thread_arrows


def test_expand_contract_label_size():
    for k in range(0, 4):
        tq = qv.parse(f"vertex x y\nthread x y fin({k}) id=t0")
        ex = qv.expand_thread(tq, "t0", 3)
        interior = len(ex.quiver.vertices) - 2
        back = qv.contract_threads(ex.quiver)
        assert back.thread_arrows[0].label == orders.Fin(interior)


def test_zigzag_single_hop_round_trip():
    tq = qv.parse("vertex x z\nthread x z fin(0) id=t0")
    zz = qv.thread_to_zigzag(tq, "t0", (1,))
    assert len(zz.thread_arrows) == 1
    tail = [zz.thread_arrows[0].dst]
    back = qv.zigzag_to_thread(zz, "x", tail)
    assert back.thread_arrows[0].label == orders.Fin(0)
    assert back.thread_arrows[0].src == "x"


def test_zigzag_one_zig_to_thread():
    tq = qv.parse("vertex x v1 v2\nthread x v1 fin(0) id=t0\narrow v2 v1 id=a1")
    out = qv.zigzag_to_thread(tq, "x", ["v1", "v2"])
    assert len(out.thread_arrows) == 1
    label = out.thread_arrows[0].label
    assert isinstance(label, orders.Labeled)
    assert label.name.startswith("zz(")


def test_zigzag_empty_tail_rejected():
    tq = qv.parse("vertex x z\nthread x z fin(0) id=t0")
    with pytest.raises(NotAZigZagTail):
        qv.zigzag_to_thread(tq, "x", [])


def test_zigzag_rejects_toward_thread():
    tq = qv.parse("vertex x v1\nthread v1 x fin(0) id=t0")
    with pytest.raises(NotAZigZagTail):
        qv.zigzag_to_thread(tq, "x", ["v1"])


def test_thread_to_zigzag_shape():
    tq = qv.parse("vertex x z\nthread x z fin(2) id=t0")
    out = qv.thread_to_zigzag(tq, "t0", (2, 1))
    assert len(out.thread_arrows) == 1  # first hop keeps the label
    assert out.thread_arrows[0].label == orders.Fin(2)
    assert len(out.standard_arrows) == 2


def test_dot_deterministic():
    tq = qv.parse("vertex b a\narrow a b\nthread a b fin(1)")
    assert qv.to_dot(tq) == qv.to_dot(tq)
    assert '"a" -> "b" [style=dashed' in qv.to_dot(tq)
