from hypothesis import given, strategies as st

from czfreal.tupling import arity, decode_tuple, encode_tuple, pair, proj, unpair

import pytest


def test_small_codes():
    assert encode_tuple(()) == 0
    assert encode_tuple((0,)) == 1
    assert encode_tuple((0, 0)) == 2


def test_pair_enumerates_diagonals():
    # oracle: walk the Cantor diagonals by hand
    seen = {}
    n = 0
    for s in range(20):
        for y in range(s + 1):
            seen[(s - y, y)] = n
            n += 1
    for (x, y), z in seen.items():
        assert pair(x, y) == z
        assert unpair(z) == (x, y)


def test_every_natural_decodes():
    for n in range(2000):
        assert encode_tuple(decode_tuple(n)) == n


@given(st.lists(st.integers(0, 10**6), max_size=8))
def test_round_trip(seq):
    code = encode_tuple(seq)
    assert decode_tuple(code) == tuple(seq)
    assert arity(code) == len(seq)
    for i, a in enumerate(seq):
        assert proj(code, i) == a


def test_proj_out_of_range():
    with pytest.raises(IndexError):
        proj(encode_tuple((1, 2)), 2)


def test_negative_entries_rejected():
    with pytest.raises(ValueError):
        encode_tuple((1, -1))
