"""Tropical (min, +) weights over non-negative reals plus infinity.

Weights are plain floats holding negative natural logs of probabilities.
ZERO (+inf) is the semiring zero (reject); ONE (0.0) is the identity.
"""

import math

ZERO = math.inf
ONE = 0.0


def wplus(a: float, b: float) -> float:
    """Semiring addition: min of the two weights."""
    return a if a <= b else b


def wtimes(a: float, b: float) -> float:
    """Semiring multiplication: sum of the two weights."""
    return a + b


def is_weight(w: float) -> bool:
    """True for non-negative reals and +infinity; rejects NaN and negatives."""
    return w == math.inf or (w >= 0.0 and not math.isnan(w))


def check_weight(w: float) -> float:
    if not is_weight(w):
        raise ValueError(f"not a tropical weight: {w!r}")
    return w


def from_probability(p: float) -> float:
    """Weight of a probability in (0, 1]."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"probability out of range: {p!r}")
    return -math.log(p)
