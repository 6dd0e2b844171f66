"""Scalar log-gamma, digamma, and trigamma for positive real arguments.

All three use the same scheme: shift the argument above ``_SHIFT`` with the
upward recurrences

    ln Gamma(x) = ln Gamma(x+1) - ln x
    psi(x)      = psi(x+1)      - 1/x
    psi'(x)     = psi'(x+1)     + 1/x^2

and evaluate the standard asymptotic series at the shifted argument.  The
series are truncated where the first omitted term is below ~1e-16 at
x = ``_SHIFT``, so the recurrence, not the series, dominates the error.
"""

from __future__ import annotations

import math

from .errors import DomainError

_SHIFT = 8.0

# ln Gamma(x) ~ (x - 1/2) ln x - x + ln(2 pi)/2 + sum c_k / x^(2k-1),
# c_k = B_{2k} / (2k (2k-1)).
_LGAMMA_COEF = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)

# psi(x) ~ ln x - 1/(2x) - sum d_k / x^(2k), d_k = B_{2k} / (2k).
_DIGAMMA_COEF = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
    43867.0 / 14364.0,
)

# psi'(x) ~ 1/x + 1/(2x^2) + sum B_{2k} / x^(2k+1).
_TRIGAMMA_COEF = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
)

_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)


def _check_positive(x: float, name: str) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} requires a finite argument > 0, got {x!r}")
    return x


def log_gamma(x: float) -> float:
    """Natural log of the gamma function on x > 0."""
    x = _check_positive(x, "log_gamma")
    shift = 0.0
    while x < _SHIFT:
        shift += math.log(x)
        x += 1.0
    u = 1.0 / (x * x)
    tail = 0.0
    for c in reversed(_LGAMMA_COEF):
        tail = tail * u + c
    return (x - 0.5) * math.log(x) - x + _HALF_LN_2PI + tail / x - shift


def digamma(x: float) -> float:
    """Logarithmic derivative of the gamma function on x > 0."""
    x = _check_positive(x, "digamma")
    shift = 0.0
    while x < _SHIFT:
        shift += 1.0 / x
        x += 1.0
    u = 1.0 / (x * x)
    tail = 0.0
    for c in reversed(_DIGAMMA_COEF):
        tail = (tail + c) * u
    return math.log(x) - 0.5 / x - tail - shift


def trigamma(x: float) -> float:
    """Derivative of the digamma function on x > 0."""
    x = _check_positive(x, "trigamma")
    shift = 0.0
    while x < _SHIFT:
        shift += 1.0 / (x * x)
        x += 1.0
    u = 1.0 / (x * x)
    tail = 0.0
    for c in reversed(_TRIGAMMA_COEF):
        tail = (tail + c) * u
    return 1.0 / x + 0.5 * u + tail / x + shift
