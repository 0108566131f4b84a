"""Lanczos approximation of the Gamma function for real arguments."""

import math

_G = 7.0
_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def lanczos_gamma(x: float) -> float:
    """
    Gamma(x) for real x, relative accuracy ~1e-15 on (0, 30].

    Arguments below 1/2 go through the reflection formula.
    """
    if x == math.floor(x) and x <= 0:
        raise ValueError(f"Gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * lanczos_gamma(1.0 - x))
    x -= 1.0
    acc = _COEFFS[0]
    for i in range(1, len(_COEFFS)):
        acc += _COEFFS[i] / (x + i)
    t = x + _G + 0.5
    # t**(x+0.5)*exp(-t) split in two halves keeps x up to ~170 finite
    half = t ** (0.5 * (x + 0.5))
    return math.sqrt(2.0 * math.pi) * half * (half * math.exp(-t)) * acc
