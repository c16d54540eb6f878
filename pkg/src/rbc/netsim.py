"""Deterministic discrete-event message layer with light-cone enforcement.

The simulator owns all timing: agents never pick times, they only map a
causal view to data.  Every message carries its emission event and an
earliest arrival derived from worst-case geometry (cross-site transit takes
exactly delta_x - 2*delta, the physical minimum and the security worst
case; same-site transit takes the configured intra_delay in [0, 2*delta]).
A strategy is invoked with a CausalView containing exactly the messages
that have arrived at its site, so decisions cannot depend on spacelike
information by construction.

The event loop is single threaded and ordered by (time, site, sequence),
so identical seeds give identical transcripts, byte for byte.  Deadline
misses and malformed strategy output are recorded as transcript aborts,
not raised.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .agents import (AliceState, BobState, UnveilMessage, alice_response,
                     expected_unveil_length, honest_unveil_time, make_tape)
from .codec import CommitResponse, PairChallenge, RandomTape
from .rng import derive_seed
from .spacetime import (ProtocolParams, SpacetimeEvent, min_cross_delay,
                        round_site, round_window, unveil_deadline)

SAME_SITE = "same-site"
CROSS_SITE = "cross-site"


@dataclass(frozen=True)
class TestSignal:
    """Channel test ping sent by a Bob agent to the same-site Alice."""

    nonce: int


@dataclass(frozen=True)
class TestEcho:
    """Alice's immediate reply to a TestSignal."""

    nonce: int


@dataclass(frozen=True)
class RoundRelay:
    """Colluding-Alice forward of one completed round to the twin site.

    Travels at the cross-site minimum like everything else; this is the only
    way post-start information moves between cheating agents.
    """

    round: int
    challenge: PairChallenge
    response: CommitResponse


@dataclass(frozen=True)
class TimedMessage:
    payload: object
    sent: SpacetimeEvent
    destination: int
    transit: str
    earliest_arrival: Fraction


def send(payload: object, sent: SpacetimeEvent, destination: int,
         params: ProtocolParams) -> TimedMessage:
    """Stamp a payload with its transit class and earliest arrival."""
    if destination not in (1, 2):
        raise ValueError("destination must be site 1 or 2")
    if destination == sent.site:
        transit, delay = SAME_SITE, params.intra_delay
    else:
        transit, delay = CROSS_SITE, min_cross_delay(params)
    return TimedMessage(payload=payload, sent=sent, destination=destination,
                        transit=transit, earliest_arrival=sent.time + delay)


@dataclass(frozen=True)
class CausalView:
    """Everything one site can have seen by `now`: arrived messages only."""

    site: int
    now: Fraction
    messages: tuple[TimedMessage, ...]

    def challenge_for(self, k: int) -> Optional[PairChallenge]:
        for msg in self.messages:
            if isinstance(msg.payload, PairChallenge) and msg.payload.round == k:
                return msg.payload
        return None

    def relay_for(self, k: int) -> Optional[RoundRelay]:
        for msg in self.messages:
            if isinstance(msg.payload, RoundRelay) and msg.payload.round == k:
                return msg.payload
        return None


def causal_view(site: int, now: Fraction,
                messages: Sequence[TimedMessage]) -> CausalView:
    """Messages visible at (site, now): arrived (inclusive) and addressed here."""
    visible = tuple(m for m in messages
                    if m.destination == site and m.earliest_arrival <= now)
    return CausalView(site=site, now=now, messages=visible)


@dataclass(frozen=True)
class AlicePrivate:
    """Pre-agreed private inputs both Alice agents hold before t = 0."""

    params: ProtocolParams
    bit: int
    tape: RandomTape
    planned_rounds: int
    cheat_seed: int


class HonestAlice:
    """Protocol-following strategy: honest responses, true keys at unveil."""

    name = "honest"
    wants_relays = False

    def respond(self, view: CausalView, k: int, priv: AlicePrivate) -> tuple[int, ...]:
        challenge = view.challenge_for(k)
        if challenge is None:
            raise ValueError(f"round {k} challenge not in causal view")
        state = AliceState(priv.bit, priv.tape, priv.planned_rounds)
        return alice_response(k, challenge, state, priv.params).values

    def unveil(self, view: CausalView, last_round: int,
               priv: AlicePrivate) -> tuple[int, ...]:
        return priv.tape.segment(last_round, priv.params.m)


@dataclass(frozen=True)
class RoundRecord:
    """One committed round as it appears in the transcript."""

    round: int
    site: int
    challenge_start: Fraction
    challenge_end: Fraction
    pairs: tuple
    response_end: Fraction
    values: tuple[int, ...]


@dataclass(frozen=True)
class Transcript:
    """The audit artifact: everything the verifier is allowed to see."""

    params: ProtocolParams
    rounds: tuple[RoundRecord, ...]
    unveils: tuple[UnveilMessage, ...]
    aggregation: Optional[SpacetimeEvent]
    abort: Optional[str]
    alice_seed: Optional[int] = None
    bob_seed: Optional[int] = None

    @property
    def last_round(self) -> int:
        return self.rounds[-1].round if self.rounds else 0


@dataclass(frozen=True)
class Decision:
    """One strategy invocation: the view it got and the data it returned.

    log_size is the number of messages that existed when the strategy was
    invoked, so the exact view can be rebuilt from the message log prefix.
    """

    kind: str  # "respond" | "unveil"
    site: int
    time: Fraction
    round: int
    view: CausalView
    output: tuple[int, ...]
    log_size: int


@dataclass(frozen=True)
class SimResult:
    transcript: Transcript
    messages: tuple[TimedMessage, ...]
    decisions: tuple[Decision, ...]
    strategy_name: str
    bit: int
    planned_rounds: int


class _Abort(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _validate_values(values, count: int, modulus: int, what: str) -> tuple[int, ...]:
    values = tuple(values)
    if len(values) != count:
        raise _Abort(f"{what}: expected {count} values, got {len(values)}")
    for v in values:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < modulus:
            raise _Abort(f"{what}: value {v!r} outside [0, {modulus})")
    return values


def simulate(params: ProtocolParams, rounds: int, bit: int, alice_seed: int,
             bob_seed: int, *, strategy=None, dual_unveil: bool = False,
             handshake: bool = False) -> SimResult:
    """Run rounds 1..R plus unveiling under the given Alice strategy.

    Honest Bob agents always follow the schedule: round k's challenge
    transmission occupies [(k-1)T, (k-1)T + delta_t] at round_site(k), and
    Alice's reply completes the instant the challenge arrives.  The unveil
    is scheduled at the honest mirror time; strategies choose only data.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    strategy = resolve_strategy(strategy)

    tape = make_tape(params.m, rounds, alice_seed)
    priv = AlicePrivate(params=params, bit=bit, tape=tape, planned_rounds=rounds,
                        cheat_seed=derive_seed(alice_seed, "alice", "cheat"))
    bobs = {site: BobState(site=site, seed=bob_seed) for site in (1, 2)}

    log: list[TimedMessage] = []
    records: dict[int, RoundRecord] = {}
    pending_challenge: dict[int, tuple[Fraction, Fraction]] = {}
    unveils: list[UnveilMessage] = []
    decisions: list[Decision] = []
    abort: Optional[str] = None

    heap: list[tuple] = []
    seq = 0

    def schedule(time: Fraction, site: int, tag: str, data) -> None:
        nonlocal seq
        heapq.heappush(heap, (time, site, seq, tag, data))
        seq += 1

    def emit(payload, time: Fraction, from_site: int, to_site: int) -> TimedMessage:
        msg = send(payload, SpacetimeEvent(time, from_site), to_site, params)
        log.append(msg)
        schedule(msg.earliest_arrival, to_site, "deliver", msg)
        return msg

    if handshake:
        for site in (1, 2):
            emit(TestSignal(nonce=site), Fraction(0), site, site)
    for k in range(1, rounds + 1):
        schedule((k - 1) * params.period, round_site(k), "challenge", k)
    unveil_sites = [3 - round_site(rounds)]
    if dual_unveil:
        unveil_sites.append(round_site(rounds))
    for site in unveil_sites:
        schedule(honest_unveil_time(params, rounds), site, "unveil", None)

    def on_challenge(k: int, now: Fraction) -> None:
        site = round_site(k)
        challenge = bobs[site].challenge(k, params)
        start, end, _ = round_window(params, k)
        pending_challenge[k] = (start, end)
        emit(challenge, end, site, site)

    def on_deliver(msg: TimedMessage, now: Fraction) -> None:
        payload = msg.payload
        if isinstance(payload, TestSignal):
            emit(TestEcho(nonce=payload.nonce), now, msg.destination, msg.destination)
            return
        if not isinstance(payload, PairChallenge):
            return
        k = payload.round
        site = msg.destination
        _, _, response_deadline = round_window(params, k)
        if now > response_deadline:
            raise _Abort(f"round {k}: challenge arrived at {now}, past the "
                         f"response deadline {response_deadline}")
        log_size = len(log)
        view = causal_view(site, now, log)
        values = _validate_values(strategy.respond(view, k, priv),
                                  params.m ** (k - 1), params.modulus,
                                  f"round {k} response")
        decisions.append(Decision("respond", site, now, k, view, values, log_size))
        emit(CommitResponse(round=k, values=values), now, site, site)
        start, end = pending_challenge.pop(k)
        records[k] = RoundRecord(round=k, site=site, challenge_start=start,
                                 challenge_end=end, pairs=payload.pairs,
                                 response_end=now, values=values)
        if strategy.wants_relays:
            emit(RoundRelay(k, payload, CommitResponse(round=k, values=values)),
                 now, site, 3 - site)

    def on_unveil(site: int, now: Fraction) -> None:
        if now >= unveil_deadline(params, rounds) and site == 3 - round_site(rounds):
            raise _Abort(f"unveil at {now} missed the causal deadline")
        log_size = len(log)
        view = causal_view(site, now, log)
        revealed = _validate_values(strategy.unveil(view, rounds, priv),
                                    expected_unveil_length(rounds, params.m),
                                    params.modulus, "unveil")
        decisions.append(Decision("unveil", site, now, rounds, view, revealed,
                                  log_size))
        message = UnveilMessage(round=rounds, revealed=revealed, site=site,
                                completes_at=now)
        unveils.append(message)
        emit(message, now, site, site)

    try:
        while heap:
            time, site, _, tag, data = heapq.heappop(heap)
            if tag == "challenge":
                on_challenge(data, time)
            elif tag == "deliver":
                on_deliver(data, time)
            elif tag == "unveil":
                on_unveil(site, time)
    except _Abort as stop:
        abort = stop.reason

    ordered = tuple(records[k] for k in sorted(records))
    transcript = Transcript(params=params, rounds=ordered, unveils=tuple(unveils),
                            aggregation=None, abort=abort,
                            alice_seed=alice_seed, bob_seed=bob_seed)
    if abort is None and unveils:
        transcript = Transcript(params=params, rounds=ordered,
                                unveils=tuple(unveils),
                                aggregation=aggregate_event(transcript),
                                abort=None, alice_seed=alice_seed,
                                bob_seed=bob_seed)
    return SimResult(transcript=transcript, messages=tuple(log),
                     decisions=tuple(decisions), strategy_name=strategy.name,
                     bit=bit, planned_rounds=rounds)


def run_protocol(params: ProtocolParams, rounds: int, bit: int, alice_seed: int,
                 bob_seed: int, alice_strategy="honest", *,
                 dual_unveil: bool = False, handshake: bool = False) -> Transcript:
    """Convenience wrapper returning just the transcript."""
    return simulate(params, rounds, bit, alice_seed, bob_seed,
                    strategy=alice_strategy, dual_unveil=dual_unveil,
                    handshake=handshake).transcript


def resolve_strategy(strategy):
    """Accept a strategy object or one of the registered names."""
    if strategy is None or strategy == "honest":
        return HonestAlice()
    if isinstance(strategy, str):
        from . import adversary
        return adversary.strategy_by_name(strategy)
    return strategy


def replay_decisions(result: SimResult) -> None:
    """Re-derive every recorded decision from its causal view alone.

    Rebuilds each view from the message-log prefix that existed at decision
    time, checks it satisfies the causal predicate and matches the recorded
    view, then re-invokes the strategy (reconstructed from seeds) and
    requires identical output.  Raises AssertionError on any divergence;
    this is the executable form of the no-superluminal-information claim.
    """
    t = result.transcript
    strategy = resolve_strategy(result.strategy_name)
    tape = make_tape(t.params.m, result.planned_rounds, t.alice_seed)
    priv = AlicePrivate(params=t.params, bit=result.bit, tape=tape,
                        planned_rounds=result.planned_rounds,
                        cheat_seed=derive_seed(t.alice_seed, "alice", "cheat"))
    for decision in result.decisions:
        for msg in decision.view.messages:
            assert msg.destination == decision.site, "view leaked another site"
            assert msg.earliest_arrival <= decision.time, "view leaked the future"
        rebuilt = causal_view(decision.site, decision.time,
                              result.messages[:decision.log_size])
        assert rebuilt == decision.view, "view is not a pure causal filter"
        if decision.kind == "respond":
            output = tuple(strategy.respond(rebuilt, decision.round, priv))
        else:
            output = tuple(strategy.unveil(rebuilt, decision.round, priv))
        assert output == decision.output, (
            f"{decision.kind} at round {decision.round} not reproducible "
            f"from its causal view")


def aggregate_event(transcript: Transcript,
                    hq: Optional[int] = None) -> SpacetimeEvent:
    """Earliest event at HQ holding every round record and unveil.

    HQ defaults to the primary unveilee's site (3 - round_site(R)).  A record
    becomes available to the local Bob one intra_delay after its completion,
    then crosses in exactly delta_x - 2*delta if HQ is the other site.
    Verdicts may only be issued at or after this event.
    """
    if not transcript.unveils:
        raise ValueError("aggregation requires an unveiling")
    params = transcript.params
    last = transcript.last_round
    if hq is None:
        hq = 3 - round_site(last)
    elif hq not in (1, 2):
        raise ValueError("hq must be site 1 or 2")
    cross = min_cross_delay(params)

    def arrival(completed_at: Fraction, site: int) -> Fraction:
        local = completed_at + params.intra_delay
        return local if site == hq else local + cross

    moments = [arrival(rec.response_end, rec.site) for rec in transcript.rounds]
    moments.extend(arrival(u.completes_at, u.site) for u in transcript.unveils)
    return SpacetimeEvent(max(moments), hq)
