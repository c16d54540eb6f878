from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from rbc.spacetime import ProtocolParams


@pytest.fixture
def params_m2() -> ProtocolParams:
    return ProtocolParams(2, "1", "0.005", "0.01")


@pytest.fixture
def params_m3() -> ProtocolParams:
    return ProtocolParams(3, "1", "0.005", "0.01")


@st.composite
def valid_params(draw, m=st.integers(2, 5)):
    """Exact-rational params satisfying every construction invariant.

    delta and delta_t are drawn as delta_x / j with j >= 11, which already
    implies the tenth bounds and window disjointness, so no rejection is
    needed; delta = 0 is mixed in explicitly.
    """
    dx = Fraction(draw(st.integers(1, 50)), draw(st.integers(1, 20)))
    delta = Fraction(0) if draw(st.booleans()) else dx / draw(st.integers(11, 500))
    dt = dx / draw(st.integers(11, 500))
    return ProtocolParams(draw(m), dx, delta, dt)
