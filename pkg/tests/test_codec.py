from __future__ import annotations

from collections import Counter
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rbc.codec import (Pair, RandomTape, binary_form, commit_one, commit_round,
                       decode_one, from_binary, round_payload_bits,
                       segment_bounds)


def all_pairs(modulus):
    return [Pair(a, b) for a, b in permutations(range(modulus), 2)]


class TestCommitOne:
    def test_bit_zero(self):
        assert commit_one(Pair(3, 9), 7, 0, 16) == 10

    def test_bit_one_wraps(self):
        assert commit_one(Pair(3, 9), 7, 1, 16) == 0

    def test_identity_key(self):
        assert commit_one(Pair(3, 9), 0, 0, 16) == 3

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            commit_one(Pair(3, 9), 16, 0, 16)
        with pytest.raises(ValueError):
            commit_one(Pair(3, 17), 0, 0, 16)
        with pytest.raises(ValueError):
            commit_one(Pair(3, 9), 7, 2, 16)


class TestDecodeOne:
    def test_inverts_bit_zero(self):
        assert decode_one(10, Pair(3, 9), 7, 16) == 0

    def test_inverts_bit_one(self):
        assert decode_one(0, Pair(3, 9), 7, 16) == 1

    def test_mismatch_is_none(self):
        assert decode_one(5, Pair(3, 9), 7, 16) is None

    @given(st.integers(2, 5), st.data())
    def test_round_trip(self, m, data):
        modulus = 1 << m
        n0 = data.draw(st.integers(0, modulus - 1))
        n1 = data.draw(st.integers(0, modulus - 1).filter(lambda x: x != n0))
        key = data.draw(st.integers(0, modulus - 1))
        bit = data.draw(st.integers(0, 1))
        pair = Pair(n0, n1)
        assert decode_one(commit_one(pair, key, bit, modulus), pair, key, modulus) == bit

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_exactly_two_keys_open_any_response(self, m):
        modulus = 1 << m
        for pair in all_pairs(modulus):
            for response in range(modulus):
                opening = [k for k in range(modulus)
                           if decode_one(response, pair, k, modulus) is not None]
                assert len(opening) == 2


class TestHiding:
    @pytest.mark.parametrize("m", [2, 3])
    def test_output_distribution_identical_for_both_bits(self, m):
        # Exhaustive: over a uniform key the response is uniform either way.
        modulus = 1 << m
        for pair in all_pairs(modulus):
            dist0 = Counter(commit_one(pair, k, 0, modulus) for k in range(modulus))
            dist1 = Counter(commit_one(pair, k, 1, modulus) for k in range(modulus))
            assert dist0 == dist1
            assert set(dist0.values()) == {1}


class TestBinaryForm:
    def test_examples(self):
        assert binary_form(5, 3) == [1, 0, 1]
        assert binary_form(0, 4) == [0, 0, 0, 0]
        assert binary_form(15, 4) == [1, 1, 1, 1]

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            binary_form(8, 3)
        with pytest.raises(ValueError):
            binary_form(-1, 3)

    @given(st.integers(1, 10), st.data())
    def test_bijection(self, m, data):
        x = data.draw(st.integers(0, (1 << m) - 1))
        bits = binary_form(x, m)
        assert len(bits) == m
        assert from_binary(bits) == x

    @pytest.mark.parametrize("m", [2, 3])
    def test_bijection_exhaustive(self, m):
        images = {tuple(binary_form(x, m)) for x in range(1 << m)}
        assert len(images) == 1 << m


class TestSegmentBounds:
    def test_round_one_uses_first_entry(self):
        for m in (2, 5, 10):
            assert segment_bounds(1, m) == (0, 1)

    def test_round_two_m10(self):
        assert segment_bounds(2, 10) == (1, 10)

    def test_round_three_m10(self):
        assert segment_bounds(3, 10) == (11, 100)

    @given(st.integers(2, 10), st.integers(1, 12))
    def test_segments_tile_the_tape(self, m, k):
        start, count = segment_bounds(k, m)
        next_start, _ = segment_bounds(k + 1, m)
        assert next_start == start + count

    @given(st.integers(2, 6), st.integers(1, 8))
    def test_total_consumption_geometric(self, m, rounds):
        total = sum(segment_bounds(k, m)[1] for k in range(1, rounds + 1))
        assert total == (m ** rounds - 1) // (m - 1)


class TestRoundPayloadBits:
    def test_round_two(self):
        tape = RandomTape((3,))
        assert round_payload_bits(2, tape, 2) == [1, 1]

    def test_round_three_concatenates(self):
        tape = RandomTape((0, 1, 2, 9, 9, 9, 9))
        assert round_payload_bits(3, tape, 2) == [1, 0, 0, 1]

    def test_rejects_round_one(self):
        with pytest.raises(ValueError):
            round_payload_bits(1, RandomTape((0,)), 2)

    @given(st.integers(2, 4), st.integers(2, 5))
    def test_length_is_geometric(self, m, k):
        need = segment_bounds(k - 1, m)[0] + segment_bounds(k - 1, m)[1]
        tape = RandomTape(tuple(i % (1 << m) for i in range(need)))
        assert len(round_payload_bits(k, tape, m)) == m ** (k - 1)

    def test_rejects_short_tape(self):
        with pytest.raises(ValueError):
            round_payload_bits(3, RandomTape((1,)), 2)


class TestCommitRound:
    def test_elementwise(self):
        values = commit_round([1, 1], [Pair(3, 9), Pair(2, 5)], [7, 4], 16)
        assert values == [0, 9]

    def test_empty(self):
        assert commit_round([], [], [], 16) == []

    def test_singleton_matches_commit_one(self):
        assert commit_round([1], [Pair(3, 9)], [7], 16) == [commit_one(Pair(3, 9), 7, 1, 16)]

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            commit_round([1], [Pair(3, 9), Pair(2, 5)], [7, 4], 16)
