"""Log-gamma and Euler's beta function."""

from __future__ import annotations

import math

__all__ = ["log_gamma", "gamma", "beta", "log_beta"]

# Lanczos approximation, g = 7, nine coefficients. Relative error of
# Gamma(x) is below ~2e-15 for x >= 0.5.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
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
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _check_positive(name: str, x: float) -> float:
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError(f"{name} requires a positive finite argument, got {x!r}")
    return x


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    x = _check_positive("log_gamma", x)
    if x == 1.0 or x == 2.0:
        return 0.0
    if x < 0.5:
        # Gamma(x) = Gamma(x + 1) / x keeps the series in its accurate range
        return log_gamma(x + 1.0) - math.log(x)
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def gamma(x: float) -> float:
    return math.exp(log_gamma(x))


def log_beta(x: float, y: float) -> float:
    x = _check_positive("beta", x)
    y = _check_positive("beta", y)
    return log_gamma(x) + log_gamma(y) - log_gamma(x + y)


def beta(x: float, y: float) -> float:
    """Euler beta B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y), via logs."""
    return math.exp(log_beta(x, y))
