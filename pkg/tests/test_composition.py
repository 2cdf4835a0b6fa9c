import pytest
from hypothesis import given, settings, strategies as st

from polystrata.composition import (
    Composition,
    compositions_of,
    enumerate_patterns,
    format_composition,
    insert,
    merge,
    norms,
    parse_composition,
    succeeds,
)

from oracles import bfs_reachable, compositions_bitmask

C = Composition
comps = st.lists(st.integers(1, 5), max_size=6).map(Composition)


def test_merge_examples():
    assert merge(C((1, 2, 1)), 1) == (3, 1)
    assert merge(C((1, 2, 1)), 3) == (1, 2, 1)
    assert merge(C((1, 1)), 1) == (2,)


def test_merge_rejects_nonpositive_index():
    with pytest.raises(ValueError):
        merge(C((1, 1)), 0)


def test_insert_examples():
    assert insert(C((1, 1)), 0) == (2, 1, 1)
    assert insert(C((1, 1)), 1) == (1, 2, 1)
    assert insert(C((2,)), 0) == insert(C((2,)), 1) == (2, 2)


@pytest.mark.parametrize("k", [-1, 3])
def test_insert_out_of_range(k):
    with pytest.raises(ValueError):
        insert(C((1, 1)), k)


@pytest.mark.parametrize("w, expected", [((1, 2, 1), (4, 1, 3)), ((), (0, 0, 0)), ((4,), (4, 3, 1))])
def test_norms(w, expected):
    assert norms(C(w)) == expected


def test_entries_must_be_positive():
    with pytest.raises(ValueError):
        C((1, 0))


def test_value_semantics():
    assert C((1, 2)) == C([1, 2])
    assert hash(C((1, 2))) == hash(C((1, 2)))
    assert C((1, 2)) != C((2, 1))


def test_succeeds_examples():
    assert succeeds(C((1, 1)), C((2,)), 4)
    assert not succeeds(C((2,)), C((1, 1, 1, 1)), 4)
    # (1,1) -> (1,2,1) -> (3,1) -> (4)
    assert succeeds(C((1, 1)), C((4,)), 4)
    assert C((4,)) in bfs_reachable([(1, 1)], 4)


def test_succeeds_cap_below_target_is_misuse():
    with pytest.raises(ValueError):
        succeeds(C((1, 1)), C((4,)), 3)


def test_succeeds_matches_bfs_oracle_exhaustively():
    pats = [C(w) for m in range(0, 7) for w in compositions_bitmask(m)]
    for a in pats:
        reach = bfs_reachable([a], 6)
        for b in pats:
            assert succeeds(a, b, 6) == (tuple(b) in reach), (a, b)


def test_enumerate_examples():
    assert enumerate_patterns(2, "even", True) == [(1, 1), (2,)]
    assert enumerate_patterns(3, "odd", True) == [(1, 1, 1), (2, 1), (1, 2), (3,)]
    assert len(enumerate_patterns(13, "odd", True)) == 5460


def test_enumerate_count_13_against_bitmask_oracle():
    expected = sum(len(compositions_bitmask(m)) for m in (3, 5, 7, 9, 11, 13))
    assert expected == 5460
    got = set(enumerate_patterns(13, "odd", True))
    assert got == {w for m in (3, 5, 7, 9, 11, 13) for w in compositions_bitmask(m)}


@pytest.mark.parametrize("d", range(1, 12))
def test_enumerate_cardinality(d):
    expected = (1 if d % 2 == 0 else 0) + sum(2 ** (m - 1) for m in range(1, d + 1) if (m - d) % 2 == 0)
    assert len(enumerate_patterns(d)) == expected


def test_enumerate_order_is_norm_then_colex():
    items = enumerate_patterns(8)
    assert items == sorted(items, key=lambda w: (sum(w), tuple(reversed(w))))


@pytest.mark.parametrize("m", range(0, 10))
def test_compositions_of_matches_bitmask(m):
    assert sorted(compositions_of(m)) == sorted(compositions_bitmask(m))


@given(comps, st.data())
def test_merge_raises_reduced_norm(w, data):
    if len(w) < 2:
        return
    j = data.draw(st.integers(1, len(w) - 1))
    m = merge(w, j)
    assert m.norm == w.norm and m.reduced_norm == w.reduced_norm + 1 and m.support == w.support - 1


@given(comps, st.data())
def test_insert_raises_norm_by_two(w, data):
    k = data.draw(st.integers(0, len(w)))
    i = insert(w, k)
    assert i.norm == w.norm + 2 and i.reduced_norm == w.reduced_norm + 1 and i.support == w.support + 1


@given(comps)
def test_norm_identity(w):
    n, r, s = norms(w)
    assert n - r == s and min(n, r, s) >= 0


@settings(max_examples=60)
@given(st.lists(st.integers(1, 3), max_size=4).map(Composition), st.lists(st.integers(1, 3), max_size=4).map(Composition))
def test_succeeds_necessary_conditions(a, b):
    cap = max(a.norm, b.norm, 1)
    if succeeds(a, b, cap):
        assert b.reduced_norm >= a.reduced_norm and b.norm >= a.norm and (b.norm - a.norm) % 2 == 0


@settings(max_examples=40)
@given(st.sampled_from([C(w) for m in (2, 4) for w in compositions_bitmask(m)]), st.data())
def test_succeeds_transitive(a, data):
    cap = 6
    reach = sorted(bfs_reachable([a], cap))
    b = C(data.draw(st.sampled_from(reach)))
    e = C(data.draw(st.sampled_from(sorted(bfs_reachable([b], cap)))))
    assert succeeds(a, b, cap) and succeeds(b, e, cap) and succeeds(a, e, cap)


def test_succeeds_reflexive():
    assert succeeds(C((1, 3)), C((1, 3)), 4)


@pytest.mark.parametrize("text, value", [("1,2,1", (1, 2, 1)), ("1^3,2", (1, 1, 1, 2)), ("()", ()), ("(1^2,3)", (1, 1, 3))])
def test_parse(text, value):
    assert parse_composition(text) == value


@pytest.mark.parametrize("bad", ["1,,2", "0", "a", "1^0"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_composition(bad)


@given(comps, st.booleans())
def test_text_round_trip(w, compact):
    assert parse_composition(format_composition(w, compact=compact)) == w


def test_compact_format():
    assert format_composition((1, 1, 3, 2, 5, 5, 5), compact=True) == "1^2,3,2,5^3"
