"""Commitment arithmetic: mod-N bit encoding and the tape segmentation rule.

A single bit b is committed against a challenge pair (n0, n1) of distinct
residues by returning n_b + key mod N, where the key is a one-time uniform
residue from the pre-shared random tape.  Because the key is uniform, the
response is uniform whichever bit was chosen (exact hiding); because n0 != n1,
a revealed key decodes to at most one bit (the basis of binding).

Round k commits the binary forms of the keys consumed in round k-1, so the
tape is consumed in segments of size m**(k-1).  Tape indices are 0-based
internally; external documentation counts entries from 1.  Pairs within one
round are sampled independently, so the same pair may repeat across
positions; distinctness inside each pair is required in every round.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class Pair:
    """Labelled challenge pair; protocol-valid pairs have distinct members.

    Distinctness is a protocol invariant in every round: honest challenge
    sampling guarantees it and the verifier rejects violations.  The
    container itself stays permissive so that tampered transcripts remain
    representable and rejectable.
    """

    n0: int
    n1: int

    def __post_init__(self):
        if self.n0 < 0 or self.n1 < 0:
            raise ValueError("challenge pair members must be non-negative")

    def member(self, bit: int) -> int:
        return self.n1 if bit else self.n0

    @property
    def distinct(self) -> bool:
        return self.n0 != self.n1


@dataclass(frozen=True)
class PairChallenge:
    """One round's ordered list of challenge pairs (length m**(k-1))."""

    round: int
    pairs: tuple[Pair, ...]


@dataclass(frozen=True)
class CommitResponse:
    """One round's ordered list of committed residues, matching the challenge."""

    round: int
    values: tuple[int, ...]


@dataclass(frozen=True)
class RandomTape:
    """The pre-shared list of uniform residues held by both Alice agents."""

    values: tuple[int, ...]

    def segment(self, k: int, m: int) -> tuple[int, ...]:
        start, count = segment_bounds(k, m)
        if start + count > len(self.values):
            raise ValueError(f"tape too short for round {k}: "
                             f"need {start + count}, have {len(self.values)}")
        return self.values[start:start + count]


def _check_residue(value: int, modulus: int, what: str) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value < modulus:
        raise ValueError(f"{what} must be an integer in [0, {modulus})")


def commit_one(pair: Pair, key: int, bit: int, modulus: int) -> int:
    """Commit one bit: (pair member selected by bit) + key mod N."""
    _check_residue(pair.n0, modulus, "pair member n0")
    _check_residue(pair.n1, modulus, "pair member n1")
    _check_residue(key, modulus, "key")
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    return (pair.member(bit) + key) % modulus


def decode_one(response: int, pair: Pair, key: int, modulus: int) -> Optional[int]:
    """Invert commit_one: the bit whose pair member equals response - key.

    Returns None when neither member matches (an invalid opening, not a
    fault).  At most one branch can match because n0 != n1.
    """
    _check_residue(response, modulus, "response")
    _check_residue(key, modulus, "key")
    candidate = (response - key) % modulus
    if candidate == pair.n0 % modulus:
        return 0
    if candidate == pair.n1 % modulus:
        return 1
    return None


def binary_form(x: int, m: int) -> list[int]:
    """Bits of x, least significant first, padded to length m."""
    if not 0 <= x < (1 << m):
        raise ValueError(f"value {x} out of range for {m} bits")
    return [(x >> j) & 1 for j in range(m)]


def from_binary(bits: Sequence[int]) -> int:
    """Inverse of binary_form: sum of bits[j] * 2**j."""
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    return sum(b << j for j, b in enumerate(bits))


def segment_bounds(k: int, m: int) -> tuple[int, int]:
    """Tape slice consumed by round k: (start, count), 0-based.

    Round k uses m**(k-1) keys beginning right after the keys of all earlier
    rounds, so start = (m**(k-1) - 1) / (m - 1), the geometric partial sum.
    """
    if k < 1:
        raise ValueError("round index starts at 1")
    if m < 2:
        raise ValueError("m must be >= 2")
    count = m ** (k - 1)
    start = (count - 1) // (m - 1)
    return start, count


def round_payload_bits(k: int, tape: RandomTape, m: int) -> list[int]:
    """Bits committed in round k >= 2: binary forms of round (k-1)'s keys.

    Concatenated in tape order, each key least-significant-bit first, giving
    m**(k-1) bits.  Round 1's payload is the externally chosen bit, not a
    tape function, so k = 1 is rejected here.
    """
    if k < 2:
        raise ValueError("round 1 payload is the committed bit itself")
    out: list[int] = []
    for value in tape.segment(k - 1, m):
        out.extend(binary_form(value, m))
    return out


def commit_round(bits: Sequence[int], pairs: Sequence[Pair], keys: Sequence[int],
                 modulus: int) -> list[int]:
    """Elementwise commit_one: position j uses bits[j], pairs[j], keys[j]."""
    if not (len(bits) == len(pairs) == len(keys)):
        raise ValueError(f"length mismatch: {len(bits)} bits, "
                         f"{len(pairs)} pairs, {len(keys)} keys")
    return [commit_one(p, key, b, modulus) for b, p, key in zip(bits, pairs, keys)]
