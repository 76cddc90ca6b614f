import itertools
import random

import pytest

from threadquiver import orders as o
from threadquiver.errors import IllTypedAddress, SymbolicOrderOpaque
from threadquiver.orders import (Concat, Fin, INTS, Labeled, LexProd, NAT_DOWN,
                                 NAT_UP, canonicalize, compare, parse_order,
                                 predecessor, serialize, successor,
                                 thread_completion)


def test_compare_finite_chain():
    assert compare(Fin(3), 0, 2) == -1
    assert compare(Fin(3), 2, 2) == 0


def test_compare_concat_across_sides():
    cc = Concat(NAT_UP, NAT_DOWN)
    assert compare(cc, o.L(5), o.R(-1)) == -1
    assert compare(cc, o.R(-7), o.L(100)) == 1


def test_compare_lex_outer_first():
    lp = LexProd(Fin(2), INTS)
    assert compare(lp, o.pair(0, 100), o.pair(1, -100)) == -1
    assert compare(lp, o.pair(1, -5), o.pair(1, 3)) == -1


def test_compare_is_total_order_on_samples():
    order = Concat(Fin(3), LexProd(Fin(2), Concat(Fin(2), NAT_DOWN)))
    sample = [o.L(i) for i in range(3)]
    for oi in range(2):
        for inner in [o.L(0), o.L(1), o.R(-2), o.R(-1)]:
            sample.append(o.R(o.pair(oi, inner)))
    for a, b in itertools.product(sample, repeat=2):
        assert compare(order, a, b) == -compare(order, b, a)
    for a, b, c in itertools.product(sample, repeat=3):
        if compare(order, a, b) <= 0 and compare(order, b, c) <= 0:
            assert compare(order, a, c) <= 0


def test_compare_rejects_ill_typed():
    with pytest.raises(IllTypedAddress):
        compare(Fin(3), 0, 5)
    with pytest.raises(IllTypedAddress):
        compare(Concat(NAT_UP, NAT_DOWN), o.L(1), 4)


def test_labeled_is_opaque():
    with pytest.raises(SymbolicOrderOpaque):
        o.check_address(Labeled("T"), 0)


def test_successor_predecessor_basics():
    assert successor(NAT_UP, 4) == 5
    assert predecessor(NAT_UP, 0) is None
    assert successor(NAT_DOWN, -2) == -1
    assert successor(NAT_DOWN, -1) is None
    assert predecessor(INTS, 0) == -1


def test_successor_stops_at_open_join():
    order = Concat(Fin(2), NAT_DOWN)
    assert successor(order, o.L(1)) is None
    # brute check against a finite truncation Fin(2) . Fin(k)
    for k in range(1, 6):
        trunc = Concat(Fin(2), Fin(k))
        assert successor(trunc, o.L(1)) == o.R(0)


def test_successor_crosses_closed_join():
    order = Concat(Fin(2), Fin(3))
    assert successor(order, o.L(1)) == o.R(0)
    assert predecessor(order, o.R(0)) == o.L(1)


def test_neighbors_mutually_inverse():
    order = Concat(NAT_UP, LexProd(Fin(2), INTS))
    sample = [o.L(3), o.R(o.pair(0, -2)), o.R(o.pair(1, 7))]
    for e in sample:
        s = successor(order, e)
        assert s is not None and predecessor(order, s) == e


def test_locally_discrete():
    assert o.is_locally_discrete(NAT_UP) is True
    assert o.is_locally_discrete(Concat(NAT_UP, NAT_DOWN)) is True
    assert o.is_locally_discrete(Concat(Fin(2), NAT_DOWN)) is False
    assert o.is_locally_discrete(Labeled("Q", locally_discrete=False)) is False
    assert o.is_locally_discrete(Labeled("T")) is None
    # a product with integer fibers is discrete whatever the outer factor
    assert o.is_locally_discrete(LexProd(Labeled("T"), INTS)) is True


def test_locally_discrete_matches_truncations():
    # exhaustive neighbor check on N<=k . (-N)>=-k stand-ins
    for k in range(1, 7):
        trunc = Concat(Fin(k), Fin(k))
        elems = [o.L(i) for i in range(k)] + [o.R(i) for i in range(k)]
        for i, e in enumerate(elems):
            if i + 1 < len(elems):
                assert successor(trunc, e) == elems[i + 1]
            if i > 0:
                assert predecessor(trunc, e) == elems[i - 1]


def test_thread_completion_empty_label():
    assert thread_completion(Fin(0)) == Concat(NAT_UP, NAT_DOWN)


def test_thread_completion_flattens_finite_labels():
    want = Concat(NAT_UP, Concat(INTS, Concat(INTS, NAT_DOWN)))
    assert thread_completion(Fin(2)) == want


def test_thread_completion_symbolic_passthrough():
    t = Labeled("T")
    got = thread_completion(t)
    assert got == Concat(NAT_UP, Concat(LexProd(t, INTS), NAT_DOWN))


def test_thread_completion_has_ends_and_is_discrete():
    for label in [Fin(0), Fin(3), Labeled("T"), Concat(Fin(1), Labeled("U"))]:
        comp = thread_completion(label)
        assert o.minimum(comp) is not None
        assert o.maximum(comp) is not None
        assert o.is_locally_discrete(comp) is True


def test_cofinality():
    assert o.cofinality_class(Concat(NAT_UP, NAT_DOWN)) == o.COUNTABLE
    big = Labeled("T", countable_cofinality=False)
    assert o.cofinality_class(thread_completion(big)) == o.COUNTABLE
    assert o.cofinality_class(LexProd(big, INTS)) == o.UNCOUNTABLE
    assert o.coinitiality_class(
        LexProd(Labeled("T", countable_coinitiality=False), INTS)) == o.UNCOUNTABLE
    assert o.cofinality_class(Labeled("T")) == o.UNKNOWN


def _random_order(rng, depth=3):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([Fin(0), Fin(1), Fin(3), NAT_UP, NAT_DOWN, INTS,
                           Labeled("T")])
    if rng.random() < 0.5:
        return Concat(_random_order(rng, depth - 1), _random_order(rng, depth - 1))
    return LexProd(_random_order(rng, depth - 1), _random_order(rng, depth - 1))


def test_canonicalize_idempotent():
    rng = random.Random(7)
    for _ in range(200):
        order = _random_order(rng)
        once = canonicalize(order)
        assert canonicalize(once) == once


def test_canonicalize_kills_empty_factors():
    assert canonicalize(Concat(Fin(0), NAT_UP)) == NAT_UP
    assert canonicalize(LexProd(Fin(0), INTS)) == Fin(0)
    assert canonicalize(LexProd(NAT_UP, Fin(0))) == Fin(0)
    assert canonicalize(LexProd(Fin(1), NAT_DOWN)) == NAT_DOWN


def test_grammar_round_trip():
    rng = random.Random(13)
    for _ in range(100):
        order = canonicalize(_random_order(rng))
        assert parse_order(serialize(order)) == order


def test_grammar_flags():
    got = parse_order("label(T, cofinal=uncountable, discrete=true)")
    assert got == Labeled("T", locally_discrete=True, countable_cofinality=False)
    assert parse_order("0") == Fin(0)
    assert parse_order("(N . -N)") == Concat(NAT_UP, NAT_DOWN)
    assert parse_order("(fin(2) * Z)") == LexProd(Fin(2), INTS)


def test_address_text_round_trip():
    for addr in [5, o.START, o.L(3), o.R(o.L(o.START)), o.pair(1, -4),
                 o.R(o.pair(0, o.START))]:
        assert o.parse_address(o.serialize_address(addr)) == addr


def test_restrictions():
    comp = thread_completion(Fin(0))  # N . -N
    assert o.restrict_below(comp, o.R(o.START)) == NAT_UP
    assert o.restrict_from(comp, o.R(o.START)) == NAT_DOWN
    assert o.restrict_below(comp, o.L(4)) == Fin(4)
    assert o.restrict_from(comp, o.R(-3)) == Fin(3)
