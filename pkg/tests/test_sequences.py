import pytest
from hypothesis import given, strategies as st

from zerosum.errors import IncompatibleElement, InvalidSpec, LengthCapExceeded
from zerosum.groups import make_group
from zerosum.sequences import (
    All,
    Exact,
    LengthSpec,
    Multiples,
    Range,
    ResidueUpFrom,
    Sequence,
    extract_witness,
    has_zero_sum_in,
    length_set,
    naive_length_set,
    parse_spec,
    spec_contains,
    validate_witness,
)

C3, C5, C2C2 = make_group([3]), make_group([5]), make_group([2, 2])
E1, E2 = (1, 0), (0, 1)

GROUPS = [make_group(f) for f in ([2], [3], [4], [5], [6], [2, 2], [2, 4], [3, 3], [8], [2, 6], [4, 4], [2, 8], [16], [2, 2, 4])]


def seq(G, *coords):
    return Sequence.from_coords(G, [c if isinstance(c, tuple) else (c,) for c in coords])


@st.composite
def sequences(draw, max_len=12):
    G = draw(st.sampled_from(GROUPS))
    idx = draw(st.lists(st.integers(0, G.order - 1), max_size=max_len))
    return Sequence.from_indices(G, idx)


# -- length sets


def test_length_set_examples():
    assert length_set(seq(C5, 1, 1, 1, 1, 1)).lengths() == [5]
    assert length_set(seq(C2C2, E1, E1, E2, E2)).lengths() == [2, 4]
    assert length_set(seq(C3, 1, 1, 0)).lengths() == [1]
    assert length_set(Sequence.from_indices(C3, [])).lengths() == []


def test_dp_cap():
    S = Sequence.from_indices(C3, [1] * 70)
    with pytest.raises(LengthCapExceeded):
        length_set(S)
    assert 3 in length_set(S, cap=80)


@given(sequences())
def test_dp_matches_naive(S):
    assert set(length_set(S).lengths()) == naive_length_set(S)


@given(sequences(max_len=10))
def test_length_set_order_invariant(S):
    rev = Sequence.from_indices(S.group, list(reversed(S.indices)))
    assert length_set(rev) == length_set(S)


# -- length specs


@pytest.mark.parametrize(
    "L, t, n, expected",
    [
        (ResidueUpFrom(2), 5, 4, False),
        (ResidueUpFrom(2), 8, 4, True),
        (ResidueUpFrom(2), 3, 4, True),
        (Multiples(), 6, 3, True),
        (Multiples(), 4, 3, False),
        (Exact(4), 4, 2, True),
        (Range(2, 3), 1, 3, False),
        (All(), 17, 3, True),
    ],
)
def test_spec_contains(L, t, n, expected):
    assert spec_contains(L, t, n) is expected


def test_spec_validation():
    for bad in [("exact", 0), ("range", 3, 2), ("resup", 0), ("all", 1), ("nope",)]:
        with pytest.raises(InvalidSpec):
            LengthSpec(*bad)
    with pytest.raises(InvalidSpec):
        spec_contains(ResidueUpFrom(5), 3, 4)
    with pytest.raises(InvalidSpec):
        spec_contains(All(), 0, 3)


@pytest.mark.parametrize("L", [All(), Exact(3), Range(2, 5), Multiples(), ResidueUpFrom(2)])
def test_spec_string_roundtrip(L):
    assert parse_spec(str(L)) == L


@pytest.mark.parametrize("text", ["range:3", "exact:x", "resup", "bogus:1"])
def test_parse_spec_rejects(text):
    with pytest.raises(InvalidSpec):
        parse_spec(text)


# -- zero-sum queries and witnesses


def test_has_zero_sum_examples():
    assert not has_zero_sum_in(seq(C3, 1, 1, 0), ResidueUpFrom(2))
    assert has_zero_sum_in(seq(C3, 1, 1, 1), ResidueUpFrom(2))
    assert not has_zero_sum_in(Sequence.from_indices(C3, []), All())


def test_witness_examples():
    S = seq(C2C2, E1, E1, E2, E2)
    W = extract_witness(S, Exact(2))
    assert W == seq(C2C2, E2, E2)  # index order: (0,1) precedes (1,0)
    assert extract_witness(seq(C3, 1, 1, 0), ResidueUpFrom(2)) is None
    assert extract_witness(seq(C3, 0), All()) == seq(C3, 0)


L_STRAT = st.sampled_from([All(), Exact(2), Exact(3), Range(1, 2), Range(2, 4), Multiples(), ResidueUpFrom(1), ResidueUpFrom(2)])


@given(sequences(), L_STRAT)
def test_witness_consistent_with_query(S, L):
    n = S.group.exponent
    if L.kind == "resup" and L.a > n:
        return
    W = extract_witness(S, L)
    assert (W is not None) == has_zero_sum_in(S, L)
    if W is not None:
        assert validate_witness(S, L, W)
        admissible = [t for t in length_set(S) if spec_contains(L, t, n)]
        assert W.length == min(admissible)


def test_validate_witness_rejects():
    S = seq(C3, 1, 1, 1)
    assert not validate_witness(S, All(), seq(C3, 1, 1))
    assert not validate_witness(S, Exact(2), seq(C3, 1, 1, 1))
    assert not validate_witness(seq(C3, 1, 2), All(), seq(C3, 0))


# -- sequence type


def test_sequence_basics():
    G = make_group([2, 4])
    S = Sequence.from_coords(G, [(1, 3), (0, 1), (1, 3)])
    assert S.length == len(S) == 3
    assert S.multiplicity(G.index_of((1, 3))) == 2
    assert S.total() == G.index_of((0, 3))
    assert Sequence.from_records(G, S.to_records()) == S
    assert Sequence.from_indices(G, [1, 2]) == Sequence.from_indices(G, [2, 1])
    with pytest.raises(IncompatibleElement):
        Sequence.from_indices(G, [8])


@pytest.mark.parametrize(
    "L, n, expected",
    [(Multiples(), 4, True), (Exact(4), 4, True), (Exact(8), 4, True), (Exact(3), 4, False),
     (Range(4, 4), 4, True), (Range(1, 4), 4, False), (All(), 4, False), (ResidueUpFrom(1), 4, False)],
)
def test_translation_invariance_flag(L, n, expected):
    assert L.translation_invariant(n) is expected
