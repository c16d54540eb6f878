"""Bob's acceptance logic.

Verification trusts nothing but the transcript: params are re-validated,
every count and residue is re-checked, every event is tested against its
round window, the unveil against its strict causal deadline, and finally
the unveiled keys are chained backwards, round R down to round 1, to
recover the committed bit.

Checks run in a fixed order (params, shape, timing, decode) so the reject
reason for a given transcript is deterministic: the reported reason is the
first failure.  Window endpoints are inclusive ("completed by" semantics);
the unveil deadline is strict, the conservative choice at a light-cone
bound.  A verdict is timestamped at the aggregation event, the earliest
moment Bob actually holds all the data in one place.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .codec import decode_one, from_binary
from .netsim import RoundRecord, Transcript, aggregate_event
from .spacetime import (SpacetimeEvent, round_site, round_window, spacelike,
                        unveil_deadline)

TIMING_VIOLATION = "timing_violation"
SITE_MISMATCH = "site_mismatch"
COUNT_MISMATCH = "count_mismatch"
DUPLICATE_PAIR_MEMBERS = "duplicate_pair_members"
DECODE_MISMATCH = "decode_mismatch"
RANGE_ERROR = "range_error"
INCOMPLETE_TRANSCRIPT = "incomplete_transcript"


@dataclass(frozen=True)
class Verdict:
    """accept(bit) or reject(reason), stamped with the aggregation time."""

    outcome: str  # "accept" | "reject"
    bit: Optional[int] = None
    reason: Optional[str] = None
    detail: Optional[str] = None
    reject_position: Optional[tuple[int, int]] = None
    issued_at: Optional[Fraction] = None

    @property
    def accepted(self) -> bool:
        return self.outcome == "accept"


def backward_decode(rounds: Sequence[RoundRecord], revealed: Sequence[int],
                    m: int):
    """Chain the unveiled keys back to the committed bit.

    The revealed list opens round R directly; each opened round's bits,
    grouped into m-bit numbers (LSB first, tape order), are the keys of the
    round before it.  Returns (bit, None) on success or (None, (round,
    position)) at the first invalid opening.
    """
    modulus = 1 << m
    keys = list(revealed)
    for k in range(len(rounds), 1, -1):
        rec = rounds[k - 1]
        bits = []
        for j, (value, pair, key) in enumerate(zip(rec.values, rec.pairs, keys)):
            bit = decode_one(value, pair, key, modulus)
            if bit is None:
                return None, (k, j)
            bits.append(bit)
        keys = [from_binary(bits[i * m:(i + 1) * m]) for i in range(len(bits) // m)]
    first = rounds[0]
    bit = decode_one(first.values[0], first.pairs[0], keys[0], modulus)
    if bit is None:
        return None, (1, 0)
    return bit, None


def _reject(reason: str, detail: str, issued_at=None, position=None) -> Verdict:
    return Verdict(outcome="reject", reason=reason, detail=detail,
                   reject_position=position, issued_at=issued_at)


def _shape_problem(transcript: Transcript) -> Optional[Verdict]:
    params = transcript.params
    modulus = params.modulus
    for i, rec in enumerate(transcript.rounds):
        k = i + 1
        if rec.round != k:
            return _reject(COUNT_MISMATCH, f"rounds not consecutive: "
                           f"position {i} holds round {rec.round}, expected {k}")
        if rec.site != round_site(k):
            return _reject(SITE_MISMATCH, f"round {k} recorded at site {rec.site}, "
                           f"schedule requires site {round_site(k)}")
        expected = params.m ** (k - 1)
        if len(rec.pairs) != expected:
            return _reject(COUNT_MISMATCH, f"round {k} carries {len(rec.pairs)} "
                           f"pairs, expected {expected}")
        for j, pair in enumerate(rec.pairs):
            if not (0 <= pair.n0 < modulus and 0 <= pair.n1 < modulus):
                return _reject(RANGE_ERROR, f"round {k} pair {j} member outside "
                               f"[0, {modulus})", position=(k, j))
            if pair.n0 == pair.n1:
                return _reject(DUPLICATE_PAIR_MEMBERS,
                               f"round {k} pair {j} members are equal",
                               position=(k, j))
        if len(rec.values) != expected:
            return _reject(COUNT_MISMATCH, f"round {k} carries {len(rec.values)} "
                           f"response values, expected {expected}")
        for j, value in enumerate(rec.values):
            if not 0 <= value < modulus:
                return _reject(RANGE_ERROR, f"round {k} response {j} outside "
                               f"[0, {modulus})", position=(k, j))
    last = transcript.last_round
    expected = params.m ** (last - 1)
    for u in transcript.unveils:
        if u.site not in (1, 2):
            return _reject(SITE_MISMATCH, f"unveil site {u.site} is not a site id")
        if u.round != last:
            return _reject(COUNT_MISMATCH, f"unveil targets round {u.round}, "
                           f"transcript ends at round {last}")
        if len(u.revealed) != expected:
            return _reject(COUNT_MISMATCH, f"unveil reveals {len(u.revealed)} "
                           f"values, expected {expected}")
        for j, value in enumerate(u.revealed):
            if not 0 <= value < modulus:
                return _reject(RANGE_ERROR, f"revealed value {j} outside "
                               f"[0, {modulus})", position=(last, j))
    return None


def _timing_problem(transcript: Transcript) -> Optional[Verdict]:
    params = transcript.params
    for rec in transcript.rounds:
        start, end, response_end = round_window(params, rec.round)
        if not (start <= rec.challenge_start <= rec.challenge_end <= end):
            return _reject(TIMING_VIOLATION, f"round {rec.round} challenge "
                           f"[{rec.challenge_start}, {rec.challenge_end}] outside "
                           f"window [{start}, {end}]")
        if not (rec.challenge_end <= rec.response_end <= response_end):
            return _reject(TIMING_VIOLATION, f"round {rec.round} response at "
                           f"{rec.response_end} outside (challenge_end, {response_end}]")
    last = transcript.last_round
    deadline = unveil_deadline(params, last)
    primary_site = 3 - round_site(last)
    unveils = transcript.unveils
    for u in unveils:
        if u.completes_at < 0:
            return _reject(TIMING_VIOLATION, f"unveil from site {u.site} "
                           f"completes before the protocol start")
    if len(unveils) == 1:
        u = unveils[0]
        if u.site != primary_site:
            return _reject(SITE_MISMATCH, f"unveil from site {u.site}, round "
                           f"{last} requires site {primary_site}")
        if not u.completes_at < deadline:
            return _reject(TIMING_VIOLATION, f"unveil completes at "
                           f"{u.completes_at}, not strictly before {deadline}")
    else:
        sites = sorted(u.site for u in unveils)
        if sites != [1, 2]:
            return _reject(SITE_MISMATCH, "dual unveil requires exactly one "
                           "message from each site")
        for u in unveils:
            if not u.completes_at < deadline:
                return _reject(TIMING_VIOLATION, f"unveil from site {u.site} "
                               f"completes at {u.completes_at}, not strictly "
                               f"before {deadline}")
        events = [SpacetimeEvent(u.completes_at, u.site) for u in unveils]
        if not spacelike(events[0], events[1], params):
            return _reject(TIMING_VIOLATION, "dual unveil emissions are not "
                           "spacelike separated")
    return None


def verify(transcript: Transcript) -> Verdict:
    """Run all checks in the fixed order and return the verdict."""
    if transcript.abort is not None:
        return _reject(INCOMPLETE_TRANSCRIPT, f"protocol aborted: {transcript.abort}")
    if not transcript.rounds:
        return _reject(INCOMPLETE_TRANSCRIPT, "no rounds recorded")
    if not transcript.unveils:
        return _reject(INCOMPLETE_TRANSCRIPT, "no unveiling recorded")
    if len(transcript.unveils) > 2:
        return _reject(COUNT_MISMATCH,
                       f"{len(transcript.unveils)} unveil messages; at most two")

    problems = transcript.params.problems()
    if problems:
        return _reject(RANGE_ERROR, "invalid params: " + "; ".join(problems))

    try:
        issued_at = aggregate_event(transcript).time
    except ValueError:
        # hostile timestamps can place aggregation before t=0; the timing
        # checks below reject such transcripts, just without a timestamp
        issued_at = None

    verdict = _shape_problem(transcript)
    if verdict is not None:
        return _with_time(verdict, issued_at)
    verdict = _timing_problem(transcript)
    if verdict is not None:
        return _with_time(verdict, issued_at)

    if len(transcript.unveils) == 2:
        a, b = transcript.unveils
        if a.revealed != b.revealed:
            return _with_time(_reject(DECODE_MISMATCH,
                                      "dual unveils reveal different lists"),
                              issued_at)
    bit, position = backward_decode(transcript.rounds,
                                    transcript.unveils[0].revealed,
                                    transcript.params.m)
    if bit is None:
        return _reject(DECODE_MISMATCH,
                       f"invalid opening at round {position[0]} "
                       f"position {position[1]}", issued_at=issued_at,
                       position=position)
    return Verdict(outcome="accept", bit=bit, issued_at=issued_at)


def dual_unveil_check(transcript: Transcript) -> Verdict:
    """Verify a transcript that must carry both Alices' unveilings."""
    if len(transcript.unveils) != 2:
        raise ValueError("dual_unveil_check requires exactly two unveil messages")
    return verify(transcript)


def _with_time(verdict: Verdict, issued_at) -> Verdict:
    return Verdict(outcome=verdict.outcome, bit=verdict.bit, reason=verdict.reason,
                   detail=verdict.detail, reject_position=verdict.reject_position,
                   issued_at=issued_at)
