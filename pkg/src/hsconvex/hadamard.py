"""Hadamard-type inequalities: evaluate every side, report margins.

Each theorem is a chain ``term_0 <= term_1 <= ...`` (one or two
comparisons). Every term carries the error bound inherited from the
quadrature that produced it, and a comparison is counted as holding when

    margin >= -(err_lhs + err_rhs + 1e-9 * scale),  scale = max |term|.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classes import ClassSpec, MembershipVerdict, SearchConfig, check_membership
from .funcat import Interval, RealFunction, builtin_h, h_power
from .quad import DEFAULT_TOL, QuadResult, integral_mean, integrate
from .specfun import beta

__all__ = [
    "THEOREMS",
    "PRODUCT_THEOREMS",
    "HS_THEOREMS",
    "SLACK",
    "Term",
    "Comparison",
    "InequalityReport",
    "ProductEndpointTerms",
    "TheoremInputError",
    "endpoint_terms",
    "evaluate_theorem",
    "closed_form_coefficients",
    "quadrature_coefficients",
]

THEOREMS = (
    "hh_classic",
    "bullen",
    "p_hadamard",
    "pachpatte_product",
    "s_convex_hadamard",
    "hs_upper",
    "hs_sandwich",
    "hs_product",
    "hs_symmetric_upper",
    "hs_bullen",
)
PRODUCT_THEOREMS = ("pachpatte_product", "hs_product")
HS_THEOREMS = ("hs_upper", "hs_sandwich", "hs_product", "hs_symmetric_upper", "hs_bullen")
_S_THEOREMS = ("s_convex_hadamard",) + HS_THEOREMS
SLACK = 1e-9

_UNIT = Interval(0.0, 1.0)


class TheoremInputError(ValueError):
    """Inputs do not fit the requested theorem."""


@dataclass(frozen=True)
class Term:
    label: str
    value: float
    error: float = 0.0


@dataclass(frozen=True)
class Comparison:
    lhs: str
    rhs: str
    margin: float
    slack: float
    holds: bool


@dataclass
class InequalityReport:
    theorem: str
    terms: list[Term]
    comparisons: list[Comparison]
    parameters: dict
    converged: bool = True
    hypotheses: list[MembershipVerdict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.comparisons)

    @property
    def hypothesis_established(self) -> bool | None:
        if not self.hypotheses:
            return None
        return all(v.member for v in self.hypotheses)

    def term(self, label: str) -> Term:
        for t in self.terms:
            if t.label == label:
                return t
        raise KeyError(label)

    def value(self, label: str) -> float:
        return self.term(label).value


@dataclass(frozen=True)
class ProductEndpointTerms:
    M: float
    N: float


def endpoint_terms(f: RealFunction, g: RealFunction, interval: Interval) -> ProductEndpointTerms:
    """M = f(a)g(a) + f(b)g(b),  N = f(a)g(b) + f(b)g(a)."""
    fa, fb = f(interval.a), f(interval.b)
    ga, gb = g(interval.a), g(interval.b)
    return ProductEndpointTerms(M=fa * ga + fb * gb, N=fa * gb + fb * ga)


def _hypothesis_spec(theorem: str, h: RealFunction | None, s: float | None) -> ClassSpec:
    if theorem in ("hh_classic", "bullen", "pachpatte_product"):
        return ClassSpec("convex")
    if theorem == "p_hadamard":
        return ClassSpec("p_function")
    if theorem == "s_convex_hadamard":
        return ClassSpec("s_convex_2", s=s)
    return ClassSpec("hs_second", h=h, s=s)


class _Builder:
    def __init__(self, tol: float):
        self.tol = tol
        self.terms: list[Term] = []
        self.converged = True

    def add(self, label: str, value: float, error: float = 0.0) -> Term:
        term = Term(label, float(value), float(error))
        self.terms.append(term)
        return term

    def quad(self, label: str, res: QuadResult) -> Term:
        self.converged &= res.converged
        return self.add(label, res.value, res.error_estimate)

    def compare(self, chain: list[Term]) -> list[Comparison]:
        scale = max(abs(t.value) for t in self.terms)
        out = []
        for lhs, rhs in zip(chain, chain[1:]):
            margin = rhs.value - lhs.value
            slack = lhs.error + rhs.error + SLACK * scale
            out.append(Comparison(lhs.label, rhs.label, margin, slack, margin >= -slack))
        return out


def _reflect(fn: RealFunction):
    return lambda t: fn.values(1.0 - np.asarray(t))


def evaluate_theorem(
    theorem: str,
    f: RealFunction,
    interval: Interval,
    g: RealFunction | None = None,
    h: RealFunction | None = None,
    s: float | None = None,
    quad_tol: float = DEFAULT_TOL,
    check_hypothesis: bool = False,
    search: SearchConfig | None = None,
) -> InequalityReport:
    """Evaluate all terms and comparisons of ``theorem`` for f (and g) on
    ``interval``. ``h`` defaults to h(t) = t for the (h-s) theorems."""
    if theorem not in THEOREMS:
        raise TheoremInputError(f"unknown theorem {theorem!r}; expected one of {', '.join(THEOREMS)}")
    notes: list[str] = []
    if theorem in PRODUCT_THEOREMS:
        if g is None:
            g = f
            notes.append("g not given; using g = f")
    elif g is not None:
        raise TheoremInputError(f"{theorem} takes a single function; g must be absent")
    if theorem in _S_THEOREMS:
        if s is None:
            raise TheoremInputError(f"{theorem} needs the parameter s")
        if not 0.0 < s <= 1.0:
            raise TheoremInputError(f"s must lie in (0, 1], got {s}")
    if theorem in HS_THEOREMS:
        h = h if h is not None else builtin_h("identity")
    else:
        h = None

    a, b = interval.a, interval.b
    B = _Builder(quad_tol)
    fa = B.add("f(a)", f(a))
    fb = B.add("f(b)", f(b))
    fm = B.add("f(mid)", f(interval.midpoint))

    if theorem in PRODUCT_THEOREMS:
        fg = RealFunction(f"{f.name}*{g.name}", lambda x: f.values(x) * g.values(x), a, b)
        pm = B.quad("product_mean", integral_mean(fg, interval, quad_tol))
        ga = B.add("g(a)", g(a))
        gb = B.add("g(b)", g(b))
        ends = endpoint_terms(f, g, interval)
        B.add("M", ends.M)
        N = B.add("N", ends.N)
    else:
        mean = B.quad("mean", integral_mean(f, interval, quad_tol))

    if theorem == "hh_classic":
        avg = B.add("endpoint_avg", 0.5 * (fa.value + fb.value))
        chain = [fm, mean, avg]
    elif theorem == "bullen":
        two = B.add("two_mean", 2.0 * mean.value, 2.0 * mean.error)
        rhs = B.add("bullen_rhs", 0.5 * (fa.value + fb.value + 2.0 * fm.value))
        chain = [two, rhs]
    elif theorem == "p_hadamard":
        two = B.add("two_mean", 2.0 * mean.value, 2.0 * mean.error)
        rhs = B.add("p_rhs", 2.0 * (fa.value + fb.value))
        chain = [fm, two, rhs]
    elif theorem == "pachpatte_product":
        rhs = B.add("rhs", ends.M / 3.0 + ends.N / 6.0)
        chain = [pm, rhs]
    elif theorem == "s_convex_hadamard":
        left = B.add("left", 2.0 ** (s - 1.0) * fm.value)
        right = B.add("right", (fa.value + fb.value) / (s + 1.0))
        chain = [left, mean, right]
    else:
        hs = h_power(h, s)
        if theorem == "hs_upper":
            i1 = B.quad("int_hs", integrate(hs, _UNIT, quad_tol))
            i2 = B.quad("int_hs_reflected", integrate(_reflect(hs), _UNIT, quad_tol))
            rhs = B.add("rhs", fa.value * i1.value + fb.value * i2.value,
                        abs(fa.value) * i1.error + abs(fb.value) * i2.error)
            chain = [mean, rhs]
        elif theorem == "hs_sandwich":
            half = hs(0.5)
            if half == 0.0:
                raise TheoremInputError(
                    f"h^s(1/2) = 0 for h={h.name}, s={s}; the left factor 1/(2 h^s(1/2)) is undefined"
                )
            B.add("hs_half", half)
            left = B.add("left", fm.value / (2.0 * half))
            both = lambda t: hs.values(t) + hs.values(1.0 - np.asarray(t))  # noqa: E731
            isum = B.quad("int_hs_sum", integrate(both, _UNIT, quad_tol))
            k = 0.5 * (fa.value + fb.value)
            right = B.add("right", k * isum.value, abs(k) * isum.error)
            chain = [left, mean, right]
        elif theorem == "hs_product":
            sq = lambda t: hs.values(t) ** 2  # noqa: E731
            sq_r = lambda t: hs.values(1.0 - np.asarray(t)) ** 2  # noqa: E731
            cross = lambda t: hs.values(t) * hs.values(1.0 - np.asarray(t))  # noqa: E731
            i1 = B.quad("int_h2s", integrate(sq, _UNIT, quad_tol))
            i2 = B.quad("int_h2s_reflected", integrate(sq_r, _UNIT, quad_tol))
            i3 = B.quad("int_cross", integrate(cross, _UNIT, quad_tol))
            c1 = fa.value * ga.value
            c2 = fb.value * gb.value
            rhs = B.add(
                "rhs",
                c1 * i1.value + c2 * i2.value + N.value * i3.value,
                abs(c1) * i1.error + abs(c2) * i2.error + abs(N.value) * i3.error,
            )
            chain = [pm, rhs]
        else:
            i1 = B.quad("int_hs", integrate(hs, _UNIT, quad_tol))
            if theorem == "hs_symmetric_upper":
                k = fa.value + fb.value
            else:
                k = 0.5 * (fa.value + fb.value) + fm.value
            rhs = B.add("rhs", k * i1.value, abs(k) * i1.error)
            chain = [mean, rhs]

    comparisons = B.compare(chain)
    if not B.converged:
        notes.append("quadrature did not converge for at least one term")

    params = {"f": f.name, "a": a, "b": b}
    if g is not None:
        params["g"] = g.name
    if h is not None:
        params["h"] = h.name
    if s is not None:
        params["s"] = float(s)

    report = InequalityReport(theorem, B.terms, comparisons, params, B.converged, notes=notes)
    if check_hypothesis:
        spec = _hypothesis_spec(theorem, h, s)
        report.hypotheses.append(check_membership(spec, f, interval, search))
        if theorem in PRODUCT_THEOREMS and g is not f:
            report.hypotheses.append(check_membership(spec, g, interval, search))
        if not report.hypothesis_established:
            report.notes.append("hypothesis not established")
    return report


def _check_s(s: float) -> float:
    if not (isinstance(s, (int, float)) and 0.0 < s <= 1.0):
        raise TheoremInputError(f"s must lie in (0, 1], got {s!r}")
    return float(s)


def closed_form_coefficients(theorem: str, s: float = 1.0) -> dict[str, float]:
    """Analytic values of the theorem's weight integrals when h(t) = t.

    Labels match the term labels produced by :func:`evaluate_theorem`, plus
    ``left_factor``/``right_factor`` multipliers where the theorem has them.
    """
    s = _check_s(s)
    if theorem == "hh_classic":
        return {"midpoint_factor": 1.0, "endpoint_factor": 0.5}
    if theorem == "bullen":
        return {"endpoint_factor": 0.5, "midpoint_factor": 1.0}
    if theorem == "p_hadamard":
        return {"midpoint_factor": 1.0, "endpoint_factor": 2.0}
    if theorem == "pachpatte_product":
        return {"M_factor": 1.0 / 3.0, "N_factor": 1.0 / 6.0}
    if theorem == "s_convex_hadamard":
        return {"left_factor": 2.0 ** (s - 1.0), "right_factor": 1.0 / (s + 1.0)}
    if theorem == "hs_upper":
        return {"int_hs": 1.0 / (s + 1.0), "int_hs_reflected": 1.0 / (s + 1.0)}
    if theorem == "hs_sandwich":
        return {"left_factor": 2.0 ** (s - 1.0), "int_hs_sum": 2.0 / (s + 1.0)}
    if theorem == "hs_product":
        return {
            "int_h2s": 1.0 / (2.0 * s + 1.0),
            "int_h2s_reflected": 1.0 / (2.0 * s + 1.0),
            "int_cross": beta(s + 1.0, s + 1.0),
        }
    if theorem in ("hs_symmetric_upper", "hs_bullen"):
        return {"int_hs": 1.0 / (s + 1.0)}
    raise TheoremInputError(f"unknown theorem {theorem!r}")


def quadrature_coefficients(theorem: str, h: RealFunction | None = None, s: float = 1.0,
                            tol: float = DEFAULT_TOL) -> dict[str, QuadResult | float]:
    """The same coefficients as :func:`closed_form_coefficients`, computed by
    quadrature for an arbitrary weight ``h`` (only the (h-s) theorems)."""
    if theorem not in HS_THEOREMS:
        raise TheoremInputError(f"{theorem} has no weight integrals")
    s = _check_s(s)
    hs = h_power(h if h is not None else builtin_h("identity"), s)
    r = lambda t: hs.values(1.0 - np.asarray(t))  # noqa: E731
    if theorem == "hs_upper":
        return {"int_hs": integrate(hs, _UNIT, tol), "int_hs_reflected": integrate(r, _UNIT, tol)}
    if theorem == "hs_sandwich":
        return {
            "left_factor": 1.0 / (2.0 * hs(0.5)),
            "int_hs_sum": integrate(lambda t: hs.values(t) + r(t), _UNIT, tol),
        }
    if theorem == "hs_product":
        return {
            "int_h2s": integrate(lambda t: hs.values(t) ** 2, _UNIT, tol),
            "int_h2s_reflected": integrate(lambda t: r(t) ** 2, _UNIT, tol),
            "int_cross": integrate(lambda t: hs.values(t) * r(t), _UNIT, tol),
        }
    return {"int_hs": integrate(hs, _UNIT, tol)}
