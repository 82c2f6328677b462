"""Two-argument special means, their ordering, and the ln-based propositions.

All means sort their arguments first, so ``mean(k, a, b)`` and
``mean(k, b, a)`` are bit-identical. Logarithmic, identric and
p-logarithmic means are evaluated in log space and switch to a series
around the diagonal when ``|b - a| < 1e-8 * max(a, b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .classes import ClassSpec, MembershipVerdict, SearchConfig, check_membership
from .funcat import Interval, builtin_f, builtin_h
from .hadamard import closed_form_coefficients
from .quad import DEFAULT_TOL, integral_mean

__all__ = [
    "MEAN_KINDS",
    "CHAIN",
    "mean",
    "arithmetic",
    "geometric",
    "harmonic",
    "quadratic",
    "logarithmic",
    "identric",
    "log_identric",
    "p_log_mean",
    "MeanChain",
    "chain_check",
    "PropositionReport",
    "PROPOSITION_THEOREM",
    "proposition_check",
]

MEAN_KINDS = ("arithmetic", "geometric", "harmonic", "quadratic", "logarithmic",
              "identric", "p_logarithmic")
CHAIN = ("H", "G", "L", "I", "A", "K")
_DIAGONAL = 1e-8


def _ordered(a: float, b: float, strict: bool, name: str) -> tuple[float, float]:
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"{name} mean needs finite arguments, got ({a}, {b})")
    if strict and not (a > 0 and b > 0):
        raise ValueError(f"{name} mean needs a, b > 0, got ({a}, {b})")
    if not strict and not (a >= 0 and b >= 0):
        raise ValueError(f"{name} mean needs a, b >= 0, got ({a}, {b})")
    return (a, b) if a <= b else (b, a)


def _near_diagonal(a: float, b: float) -> bool:
    return b - a < _DIAGONAL * b


def arithmetic(a: float, b: float) -> float:
    a, b = _ordered(a, b, False, "arithmetic")
    return 0.5 * (a + b)


def geometric(a: float, b: float) -> float:
    a, b = _ordered(a, b, False, "geometric")
    return math.sqrt(a) * math.sqrt(b) if a != b else a


def harmonic(a: float, b: float) -> float:
    a, b = _ordered(a, b, False, "harmonic")
    if a + b == 0:
        raise ValueError("harmonic mean needs a + b > 0")
    if a == b:
        return a
    return 2.0 * a * b / (a + b)


def quadratic(a: float, b: float) -> float:
    a, b = _ordered(a, b, False, "quadratic")
    if a == b:
        return a
    return b * math.sqrt(0.5 * (1.0 + (a / b) ** 2))


def logarithmic(a: float, b: float) -> float:
    a, b = _ordered(a, b, True, "logarithmic")
    if a == b:
        return a
    if _near_diagonal(a, b):
        m, u = 0.5 * (a + b), (b - a) / (b + a)
        return m * (1.0 - u * u / 3.0)
    return (b - a) / math.log1p((b - a) / a)


def log_identric(a: float, b: float) -> float:
    """ln I(a, b) = (b ln b - a ln a)/(b - a) - 1."""
    a, b = _ordered(a, b, True, "identric")
    if a == b:
        return math.log(a)
    if _near_diagonal(a, b):
        m, u = 0.5 * (a + b), (b - a) / (b + a)
        return math.log(m) - u * u / 6.0
    return math.log(b) - 1.0 + a * math.log1p((b - a) / a) / (b - a)


def identric(a: float, b: float) -> float:
    a, b = _ordered(a, b, True, "identric")
    if a == b:
        return a
    return math.exp(log_identric(a, b))


def p_log_mean(a: float, b: float, p: float) -> float:
    """p-logarithmic mean; p = 0 gives I and p = -1 gives L."""
    p = float(p)
    if not math.isfinite(p):
        raise ValueError(f"p must be finite, got {p}")
    if p == 0.0:
        return identric(a, b)
    if p == -1.0:
        return logarithmic(a, b)
    a, b = _ordered(a, b, True, "p-logarithmic")
    if a == b:
        return a
    if _near_diagonal(a, b):
        m, u = 0.5 * (a + b), (b - a) / (b + a)
        return m * (1.0 + (p - 1.0) * u * u / 6.0)
    q = p + 1.0
    lb = math.log(b)
    ratio = math.log(a) - lb  # < 0
    log_core = q * lb + math.log(abs(math.expm1(q * ratio))) - math.log(abs(q)) - math.log(b - a)
    return math.exp(log_core / p)


_BY_KIND = {
    "arithmetic": arithmetic,
    "geometric": geometric,
    "harmonic": harmonic,
    "quadratic": quadratic,
    "logarithmic": logarithmic,
    "identric": identric,
}


def mean(kind: str, a: float, b: float, p: float | None = None) -> float:
    if kind == "p_logarithmic":
        if p is None:
            raise ValueError("p_logarithmic mean needs p")
        return p_log_mean(a, b, p)
    try:
        fn = _BY_KIND[kind]
    except KeyError:
        raise ValueError(f"unknown mean {kind!r}; expected one of {', '.join(MEAN_KINDS)}") from None
    return fn(a, b)


@dataclass(frozen=True)
class MeanChain:
    a: float
    b: float
    values: dict[str, float]
    comparisons: list[tuple[str, str, float, bool]]  # (lhs, rhs, margin, holds)

    @property
    def holds(self) -> bool:
        return all(c[3] for c in self.comparisons)


def chain_check(a: float, b: float) -> MeanChain:
    """H <= G <= L <= I <= A <= K with margins."""
    values = {
        "H": harmonic(a, b),
        "G": geometric(a, b),
        "L": logarithmic(a, b),
        "I": identric(a, b),
        "A": arithmetic(a, b),
        "K": quadratic(a, b),
    }
    comps = []
    for lo, hi in zip(CHAIN, CHAIN[1:]):
        margin = values[hi] - values[lo]
        slack = 8 * 2.0**-52 * max(values[hi], values[lo])
        comps.append((lo, hi, margin, margin >= -slack))
    return MeanChain(float(a), float(b), values, comps)


# Each proposition bound has the shape of the h(t) = t case of one theorem;
# the citation numbers printed next to the propositions do not line up with
# the theorem order, so the mapping is structural.
PROPOSITION_THEOREM = {
    1: "hs_symmetric_upper",
    2: "hs_sandwich",
    3: "hs_symmetric_upper",
    4: "hs_bullen",
}


@dataclass(frozen=True)
class PropositionReport:
    proposition: int
    a: float
    b: float
    s: float
    theorem: str
    ln_identric: float
    ln_identric_quadrature: float
    quadrature_error: float
    left_printed: float | None
    right_printed: float
    left_derived: float | None
    right_derived: float
    holds_as_printed: bool
    holds_as_derived: bool
    hypothesis: MembershipVerdict | None

    @property
    def hypothesis_established(self) -> bool | None:
        return None if self.hypothesis is None else self.hypothesis.member


def _chain_holds(left, middle, right) -> bool:
    scale = max(abs(v) for v in (left, middle, right) if v is not None)
    slack = 1e-12 * max(scale, 1.0)
    ok = middle <= right + slack
    if left is not None:
        ok = ok and left <= middle + slack
    return ok


def proposition_check(prop: int, a: float, b: float, s: float,
                      search: SearchConfig | None = None,
                      quad_tol: float = DEFAULT_TOL,
                      check_hypothesis: bool = True) -> PropositionReport:
    """Evaluate one of the four ln-based propositions at (a, b, s)."""
    if prop not in PROPOSITION_THEOREM:
        raise ValueError(f"proposition must be 1, 2, 3 or 4, got {prop}")
    a, b, s = float(a), float(b), float(s)
    if not (a > 2 and b > 2):
        raise ValueError(f"propositions need a, b in (2, inf), got ({a}, {b})")
    if a > b:
        raise ValueError(f"propositions need a <= b, got ({a}, {b})")
    if not 0.0 < s <= 1.0:
        raise ValueError(f"s must lie in (0, 1], got {s}")

    theorem = PROPOSITION_THEOREM[prop]
    ln_a, ln_b = math.log(a), math.log(b)
    ln_A = math.log(arithmetic(a, b))
    a_ln = 0.5 * (ln_a + ln_b)  # A(ln a, ln b) = ln G(a, b)
    ln_G2 = 2.0 * math.log(geometric(a, b))
    middle = log_identric(a, b)

    hypothesis = None
    if a < b:
        interval = Interval(a, b)
        ln = builtin_f("ln", interval)
        q = integral_mean(ln, interval, quad_tol)
        ln_quad, q_err = q.value, q.error_estimate
        if check_hypothesis:
            spec = ClassSpec("hs_second", h=builtin_h("identity"), s=s)
            hypothesis = check_membership(spec, ln, interval, search)
    else:
        ln_quad, q_err = middle, 0.0

    coef = closed_form_coefficients(theorem, s)
    left_p = left_d = None
    if prop == 1:
        right_p = 2.0 / (s + 1.0) * a_ln
        right_d = (ln_a + ln_b) * coef["int_hs"]
    elif prop == 2:
        left_p = 2.0 ** (s - 1.0) * ln_A
        right_p = a_ln / (s + 1.0)
        left_d = coef["left_factor"] * ln_A
        right_d = 0.5 * (ln_a + ln_b) * coef["int_hs_sum"]
    elif prop == 3:
        right_p = ln_G2 / (s + 1.0)
        right_d = (ln_a + ln_b) * coef["int_hs"]
    else:
        right_p = (0.5 * ln_G2 + ln_A) / (s + 1.0)
        right_d = (0.5 * (ln_a + ln_b) + ln_A) * coef["int_hs"]

    return PropositionReport(
        proposition=prop,
        a=a,
        b=b,
        s=s,
        theorem=theorem,
        ln_identric=middle,
        ln_identric_quadrature=ln_quad,
        quadrature_error=q_err,
        left_printed=left_p,
        right_printed=right_p,
        left_derived=left_d,
        right_derived=right_d,
        holds_as_printed=_chain_holds(left_p, middle, right_p),
        holds_as_derived=_chain_holds(left_d, middle, right_d),
        hypothesis=hypothesis,
    )
