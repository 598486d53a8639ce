import itertools
import json
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgrdmft.errors import InvalidArgumentError, UnsupportedDimensionError
from bgrdmft.sectors import (
    enumerate_sector,
    sector_dimension,
    sector_from_json,
    total_momentum,
)


def brute_compositions(N, d):
    return {
        c
        for c in itertools.product(range(N + 1), repeat=d)
        if sum(c) == N
    }


class TestEnumerate:
    def test_d3_n3_listings(self):
        assert enumerate_sector(3, 3, 0).states == (
            (3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1),
        )
        assert set(enumerate_sector(3, 3, 1).states) == {
            (2, 1, 0), (0, 2, 1), (1, 0, 2),
        }
        assert set(enumerate_sector(3, 3, 2).states) == {
            (1, 2, 0), (0, 1, 2), (2, 0, 1),
        }

    def test_single_particle(self):
        for d in (2, 3, 5):
            for k in range(d):
                states = enumerate_sector(d, 1, k).states
                assert len(states) == 1
                assert states[0][k] == 1 and sum(states[0]) == 1

    def test_d2_n4(self):
        assert set(enumerate_sector(2, 4, 0).states) == {(4, 0), (2, 2), (0, 4)}
        assert enumerate_sector(2, 4, 1).states == ((3, 1), (1, 3))

    def test_invalid_momentum(self):
        with pytest.raises(InvalidArgumentError):
            enumerate_sector(3, 3, 5)
        with pytest.raises(InvalidArgumentError):
            enumerate_sector(3, 3, -1)

    def test_invalid_sizes(self):
        with pytest.raises(InvalidArgumentError):
            enumerate_sector(0, 3, 0)
        with pytest.raises(InvalidArgumentError):
            enumerate_sector(3, 0, 0)

    def test_overflow_guard(self):
        with pytest.raises(UnsupportedDimensionError):
            enumerate_sector(3, 5000, 0)

    def test_deterministic(self):
        a = enumerate_sector(3, 7, 2).states
        b = enumerate_sector(3, 7, 2).states
        assert a == b


class TestMomentum:
    def test_examples(self):
        assert total_momentum((2, 1, 0), 3) == 1
        assert total_momentum((3, 0, 0), 3) == 0
        assert total_momentum((1, 1, 1), 3) == 0

    def test_length_check(self):
        with pytest.raises(InvalidArgumentError):
            total_momentum((1, 1), 3)

    @given(st.integers(2, 5), st.data())
    @settings(max_examples=40, deadline=None)
    def test_consistency_with_sector(self, d, data):
        N = data.draw(st.integers(1, 6))
        P = data.draw(st.integers(0, d - 1))
        for s in enumerate_sector(d, N, P).states:
            assert total_momentum(s, d) == P


@pytest.mark.parametrize(
    "d,N", [(2, 4), (2, 12), (3, 3), (3, 6), (3, 8), (4, 4), (4, 6), (6, 4)]
)
def test_partition_property(d, N):
    assert d * N <= 24
    union = []
    for P in range(d):
        union.extend(enumerate_sector(d, N, P).states)
    assert len(union) == len(set(union)) == comb(N + d - 1, N)
    assert set(union) == brute_compositions(N, d)


def test_dimension_examples():
    assert sector_dimension(3, 3, 0) == 4
    assert sector_dimension(3, 3, 1) == 3
    assert sector_dimension(2, 4, 1) == 2


def test_json_round_trip():
    sector = enumerate_sector(3, 4, 2)
    again = sector_from_json(sector.to_json())
    assert again == sector
    obj = json.loads(sector.to_json())
    assert list(obj) == ["d", "N", "P", "states"]
