"""Geometry and scheduling for the two-site commitment protocol.

Both parties agree on a frame, two site coordinates separated by ``delta_x``
light-seconds (c = 1), and a placement tolerance ``delta``: each laboratory
sits somewhere within ``delta`` of its site, never disclosed more precisely.
All bounds here therefore use worst-case placement, so exact lab coordinates
never appear, only site ids 1 and 2.

Rounds repeat with period ``T = delta_x - 2*delta_t - 3*delta``, alternating
sites, sized so that each round's response completes outside the future
light cone of the other site's concurrent activity.  Every quantity is an
exact ``Fraction``; deadline comparisons are exact, with "completes strictly
before" semantics at light-cone bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

Scalar = Union[int, float, str, Fraction]


class GeometryError(ValueError):
    """Raised when protocol parameters violate a construction invariant."""


def as_exact(value: Scalar) -> Fraction:
    """Convert a scalar to an exact Fraction.

    Floats go through their shortest repr, so a literal like 0.1 means
    exactly 1/10 rather than its binary approximation.
    """
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def exact_str(value: Fraction) -> str:
    """Canonical exact text for a rational quantity.

    Integers print bare, terminating decimals print as minimal-digit
    decimals, everything else as "p/q".  One Fraction, one string, so
    serialized transcripts are byte-stable.
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    d = value.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = abs(value.numerator) * 10 ** digits // value.denominator
    sign = "-" if value.numerator < 0 else ""
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def params_problems(m: object, delta_x: Fraction, delta: Fraction,
                    delta_t: Fraction) -> list[str]:
    """All violated construction invariants, in a fixed check order.

    Bounds quantify the protocol's "much less than" requirements:
    delta < delta_x/10, delta_t < delta_x/10, and additionally
    delta + 2*delta_t < T so consecutive round windows are disjoint.
    """
    problems = []
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        problems.append("security parameter m must be an integer >= 2")
        return problems
    if delta_x <= 0:
        problems.append("delta_x must be > 0")
    if delta < 0:
        problems.append("delta must be >= 0")
    if delta_t <= 0:
        problems.append("delta_t must be > 0")
    if problems:
        return problems
    if 10 * delta >= delta_x:
        problems.append("site separation must dominate placement: 10*delta < delta_x")
    if 10 * delta_t >= delta_x:
        problems.append("round window must be short: 10*delta_t < delta_x")
    period = delta_x - 2 * delta_t - 3 * delta
    if period <= 0:
        problems.append(f"derived period T = {period} must be > 0")
    elif delta + 2 * delta_t >= period:
        problems.append("round windows overlap: need delta + 2*delta_t < T")
    return problems


@dataclass(frozen=True)
class ProtocolParams:
    """Security parameter and validated geometry/timing of one protocol run.

    Attributes:
        m: security parameter; residues live in [0, 2**m).
        delta_x: site separation in light-seconds.
        delta: laboratory placement tolerance.
        delta_t: length of the per-round challenge window.
        intra_delay: modelled one-way delay between same-site labs, any
            exact value in [0, 2*delta]; defaults to delta, the midpoint.
    """

    m: int
    delta_x: Fraction
    delta: Fraction
    delta_t: Fraction
    intra_delay: Fraction = field(default=None)  # type: ignore[assignment]

    def __init__(self, m: int, delta_x: Scalar, delta: Scalar, delta_t: Scalar,
                 intra_delay: Scalar | None = None):
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "delta_x", as_exact(delta_x))
        object.__setattr__(self, "delta", as_exact(delta))
        object.__setattr__(self, "delta_t", as_exact(delta_t))
        problems = params_problems(self.m, self.delta_x, self.delta, self.delta_t)
        if problems:
            raise GeometryError("; ".join(problems))
        intra = self.delta if intra_delay is None else as_exact(intra_delay)
        if not (0 <= intra <= 2 * self.delta):
            raise GeometryError("intra_delay must lie in [0, 2*delta]")
        object.__setattr__(self, "intra_delay", intra)

    @staticmethod
    def unchecked(m: object, delta_x: Fraction, delta: Fraction, delta_t: Fraction,
                  intra_delay: Fraction) -> "ProtocolParams":
        """Build without invariant checks (for parsed transcripts; the
        verifier re-runs params_problems and rejects instead of raising)."""
        self = object.__new__(ProtocolParams)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "delta_x", delta_x)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "delta_t", delta_t)
        object.__setattr__(self, "intra_delay", intra_delay)
        return self

    @property
    def modulus(self) -> int:
        return 1 << self.m

    @property
    def period(self) -> Fraction:
        return self.delta_x - 2 * self.delta_t - 3 * self.delta

    def problems(self) -> list[str]:
        probs = params_problems(self.m, self.delta_x, self.delta, self.delta_t)
        if not probs and not (0 <= self.intra_delay <= 2 * self.delta):
            probs.append("intra_delay must lie in [0, 2*delta]")
        return probs


@dataclass(frozen=True, order=True)
class SpacetimeEvent:
    """A timed occurrence at one of the two sites, in the agreed frame."""

    time: Fraction
    site: int

    def __post_init__(self):
        object.__setattr__(self, "time", as_exact(self.time))
        if self.time < 0:
            raise ValueError("event time must be >= 0")
        if self.site not in (1, 2):
            raise ValueError("site must be 1 or 2")


def period(params: ProtocolParams) -> Fraction:
    """Round period T = delta_x - 2*delta_t - 3*delta."""
    return params.period


def min_cross_delay(params: ProtocolParams) -> Fraction:
    """Conservative lower bound on cross-site signal delay: delta_x - 2*delta.

    Labs may each sit up to delta nearer the other site, so nothing can
    cross in less than this.
    """
    return params.delta_x - 2 * params.delta


def round_site(k: int) -> int:
    """Site hosting round k: odd rounds at site 1, even at site 2."""
    if k < 1:
        raise ValueError("round index starts at 1")
    return 1 if k % 2 == 1 else 2


def round_window(params: ProtocolParams, k: int) -> tuple[Fraction, Fraction, Fraction]:
    """Timing window of round k: (challenge_start, challenge_end, response_end).

    The challenge transmission must lie within [challenge_start,
    challenge_end] and the response must complete by response_end, both
    bounds inclusive ("completed by" semantics).
    """
    if k < 1:
        raise ValueError("round index starts at 1")
    start = (k - 1) * params.period
    return (start, start + params.delta_t, start + params.delta + 2 * params.delta_t)


def unveil_deadline(params: ProtocolParams, last_round: int) -> Fraction:
    """Latest moment an unveil for round R stays outside round R's future light cone.

    An unveil from site 3 - round_site(R) is causally safe iff its
    transmission completes strictly before (R-1)*T + (delta_x - 2*delta),
    the earliest instant round-R challenge information could reach that site.
    """
    if last_round < 1:
        raise ValueError("round index starts at 1")
    return (last_round - 1) * params.period + min_cross_delay(params)


def spacelike(e1: SpacetimeEvent, e2: SpacetimeEvent, params: ProtocolParams) -> bool:
    """True iff no signal can connect the events under worst-case placement.

    Cross-site pairs are spacelike when |t1 - t2| < delta_x - 2*delta.
    Same-site pairs are never reported spacelike: the labs' positions inside
    the delta-ball are unknown, so no separation can be guaranteed.
    """
    if e1.site == e2.site:
        return False
    return abs(e1.time - e2.time) < min_cross_delay(params)
