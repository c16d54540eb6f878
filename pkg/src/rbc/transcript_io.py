"""Versioned JSON transcript files.

The transcript is the audit artifact, so the format is bit-exact: residues
are JSON integers, every time is the canonical exact string of a rational
(see exact_str), and the writer always emits fields in one fixed order.
Serializing, parsing, and re-serializing any transcript reproduces the
file byte for byte.

The header names the seed-expansion generator, making files
self-describing, and records the run seeds when known.  Parsing validates
structure and types only; semantic checks (ranges against the modulus,
params invariants, timing) belong to the verifier, so a tampered but
well-formed file parses and is then rejected with a precise reason.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .agents import UnveilMessage
from .codec import Pair
from .netsim import RoundRecord, Transcript
from .rng import GENERATOR_ID
from .spacetime import ProtocolParams, SpacetimeEvent, exact_str

FORMAT_NAME = "rbc-transcript"
FORMAT_VERSION = "1"


class TranscriptFormatError(ValueError):
    """File is not a structurally valid transcript."""


def _parse_time(text) -> Fraction:
    if not isinstance(text, str):
        raise TranscriptFormatError(f"time must be a string, got {text!r}")
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise TranscriptFormatError(f"bad time string {text!r}: {exc}") from None


def _require(obj: dict, key: str, kind, what: str):
    if not isinstance(obj, dict) or key not in obj:
        raise TranscriptFormatError(f"{what}: missing field {key!r}")
    value = obj[key]
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise TranscriptFormatError(f"{what}.{key}: expected integer, "
                                        f"got {value!r}")
    elif not isinstance(value, kind):
        raise TranscriptFormatError(f"{what}.{key}: expected {kind.__name__}, "
                                    f"got {value!r}")
    return value


def _int_list(values, what: str) -> tuple[int, ...]:
    if not isinstance(values, list):
        raise TranscriptFormatError(f"{what}: expected a list")
    out = []
    for v in values:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise TranscriptFormatError(f"{what}: residues must be "
                                        f"non-negative integers, got {v!r}")
        out.append(v)
    return tuple(out)


def transcript_to_json_obj(t: Transcript) -> dict:
    rounds = []
    for rec in t.rounds:
        rounds.append({
            "k": rec.round,
            "site": rec.site,
            "challenge": {
                "start": exact_str(rec.challenge_start),
                "end": exact_str(rec.challenge_end),
                "pairs": [[p.n0, p.n1] for p in rec.pairs],
            },
            "response": {
                "end": exact_str(rec.response_end),
                "values": list(rec.values),
            },
        })
    unveils = [{
        "round": u.round,
        "site": u.site,
        "completes_at": exact_str(u.completes_at),
        "revealed": list(u.revealed),
    } for u in t.unveils]
    aggregation = None
    if t.aggregation is not None:
        aggregation = {"time": exact_str(t.aggregation.time),
                       "site": t.aggregation.site}
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "generator": GENERATOR_ID,
        "seeds": {"alice": t.alice_seed, "bob": t.bob_seed},
        "params": {
            "m": t.params.m,
            "modulus": t.params.modulus,
            "delta_x": exact_str(t.params.delta_x),
            "delta": exact_str(t.params.delta),
            "delta_t": exact_str(t.params.delta_t),
            "intra_delay": exact_str(t.params.intra_delay),
        },
        "rounds": rounds,
        "unveils": unveils,
        "aggregation": aggregation,
        "abort": t.abort,
    }


def serialize_transcript(t: Transcript) -> str:
    return json.dumps(transcript_to_json_obj(t), indent=2) + "\n"


def parse_transcript(text: str) -> Transcript:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TranscriptFormatError(f"not JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise TranscriptFormatError("top level must be an object")
    if obj.get("format") != FORMAT_NAME:
        raise TranscriptFormatError(f"unrecognized format {obj.get('format')!r}")
    if obj.get("version") != FORMAT_VERSION:
        raise TranscriptFormatError(f"unrecognized version {obj.get('version')!r}")

    p = _require(obj, "params", dict, "transcript")
    m = _require(p, "m", int, "params")
    modulus = _require(p, "modulus", int, "params")
    if not 0 <= m <= 64:
        raise TranscriptFormatError(f"m={m} outside the supported range [0, 64]")
    if modulus != 1 << m:
        raise TranscriptFormatError(f"modulus {modulus} does not match m={m}")
    params = ProtocolParams.unchecked(
        m,
        _parse_time(_require(p, "delta_x", str, "params")),
        _parse_time(_require(p, "delta", str, "params")),
        _parse_time(_require(p, "delta_t", str, "params")),
        _parse_time(_require(p, "intra_delay", str, "params")),
    )

    rounds = []
    raw_rounds = _require(obj, "rounds", list, "transcript")
    for i, r in enumerate(raw_rounds):
        what = f"rounds[{i}]"
        ch = _require(r, "challenge", dict, what)
        resp = _require(r, "response", dict, what)
        raw_pairs = _require(ch, "pairs", list, what + ".challenge")
        pairs = []
        for j, entry in enumerate(raw_pairs):
            if (not isinstance(entry, list) or len(entry) != 2):
                raise TranscriptFormatError(f"{what}: pair {j} must be a "
                                            f"two-element list")
            n0, n1 = _int_list(entry, f"{what} pair {j}")
            pairs.append(Pair(n0, n1))
        rounds.append(RoundRecord(
            round=_require(r, "k", int, what),
            site=_require(r, "site", int, what),
            challenge_start=_parse_time(_require(ch, "start", str, what)),
            challenge_end=_parse_time(_require(ch, "end", str, what)),
            pairs=tuple(pairs),
            response_end=_parse_time(_require(resp, "end", str, what)),
            values=_int_list(_require(resp, "values", list, what), what),
        ))

    unveils = []
    for i, u in enumerate(_require(obj, "unveils", list, "transcript")):
        what = f"unveils[{i}]"
        unveils.append(UnveilMessage(
            round=_require(u, "round", int, what),
            revealed=_int_list(_require(u, "revealed", list, what), what),
            site=_require(u, "site", int, what),
            completes_at=_parse_time(_require(u, "completes_at", str, what)),
        ))

    aggregation: Optional[SpacetimeEvent] = None
    raw_agg = obj.get("aggregation")
    if raw_agg is not None:
        time = _parse_time(_require(raw_agg, "time", str, "aggregation"))
        site = _require(raw_agg, "site", int, "aggregation")
        try:
            aggregation = SpacetimeEvent(time, site)
        except ValueError as exc:
            raise TranscriptFormatError(f"aggregation: {exc}") from None

    abort = obj.get("abort")
    if abort is not None and not isinstance(abort, str):
        raise TranscriptFormatError("abort must be null or a string")
    seeds = obj.get("seeds") or {}
    alice_seed = seeds.get("alice")
    bob_seed = seeds.get("bob")

    return Transcript(params=params, rounds=tuple(rounds), unveils=tuple(unveils),
                      aggregation=aggregation, abort=abort,
                      alice_seed=alice_seed, bob_seed=bob_seed)
