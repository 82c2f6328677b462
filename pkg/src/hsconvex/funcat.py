"""Named real functions with domain metadata.

Every function handed to the quadrature, class checker and inequality engine
is a :class:`RealFunction`: a vectorized evaluator plus a natural domain.
Evaluation outside the domain, or any non-finite value, raises
:class:`~hsconvex.expr.DomainError`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .expr import DomainError, evaluate_array, parse, unparse

__all__ = [
    "Interval",
    "RealFunction",
    "HPower",
    "CatalogError",
    "builtin_h",
    "builtin_f",
    "h_power",
    "from_expression",
    "resolve_function",
    "H_NAMES",
    "F_NAMES",
]

H_NAMES = ("identity", "one", "reciprocal", "power(p)")
F_NAMES = ("ln", "square", "identity", "power(p)", "abs", "expfn")


class CatalogError(ValueError):
    """Unknown catalog name, bad parameter or incompatible domain."""


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"interval endpoints must be finite, got ({self.a}, {self.b})")
        if not self.a < self.b:
            raise ValueError(f"interval needs a < b, got ({self.a}, {self.b})")

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def __iter__(self):
        return iter((self.a, self.b))


@dataclass(frozen=True)
class RealFunction:
    """Vectorized real function of one variable on a declared domain.

    ``lower``/``upper`` may be infinite. ``lower_open``/``upper_open`` mark
    excluded endpoints.
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    lower: float = -math.inf
    upper: float = math.inf
    lower_open: bool = False
    upper_open: bool = False

    def contains(self, x: float) -> bool:
        lo_ok = x > self.lower if self.lower_open else x >= self.lower
        hi_ok = x < self.upper if self.upper_open else x <= self.upper
        return lo_ok and hi_ok

    def values(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        lo = xs <= self.lower if self.lower_open else xs < self.lower
        hi = xs >= self.upper if self.upper_open else xs > self.upper
        outside = lo | hi
        if outside.any():
            bad = float(xs.flat[np.flatnonzero(outside)[0]])
            raise DomainError("outside natural domain", self.name, bad)
        with np.errstate(all="ignore"):
            out = np.asarray(self.func(xs), dtype=float)
        if out.shape != xs.shape:
            out = np.broadcast_to(out, xs.shape).copy()
        nonfinite = ~np.isfinite(out)
        if nonfinite.any():
            bad = float(xs.flat[np.flatnonzero(nonfinite)[0]])
            raise DomainError("non-finite result", self.name, bad)
        return out

    def __call__(self, x: float) -> float:
        return float(self.values(np.array([x], dtype=float))[0])

    def restrict(self, interval: Interval) -> "RealFunction":
        """Same evaluator on ``interval``; raises if it leaves the domain."""
        if not (self.contains(interval.a) and self.contains(interval.b)):
            raise CatalogError(
                f"{self.name} is not defined on [{interval.a}, {interval.b}] "
                f"(natural domain {self.domain_text()})"
            )
        return RealFunction(self.name, self.func, interval.a, interval.b)

    def domain_text(self) -> str:
        left = "(" if self.lower_open else "["
        right = ")" if self.upper_open else "]"
        return f"{left}{self.lower}, {self.upper}{right}"


@dataclass(frozen=True)
class HPower(RealFunction):
    """The composite t -> h(t)**s used by the (h-s) classes."""

    base: RealFunction | None = None
    s: float = 1.0


def _power_param(name: str) -> float | None:
    m = re.fullmatch(r"\s*power\s*\(\s*([^)]+?)\s*\)\s*", name)
    if m is None:
        return None
    try:
        p = float(m.group(1))
    except ValueError:
        raise CatalogError(f"invalid power parameter in {name!r}") from None
    if not (math.isfinite(p) and p > 0):
        raise CatalogError(f"power(p) requires p > 0, got {m.group(1)}")
    return p


def _pow_func(p: float):
    if p == 1.0:
        return lambda t: t
    if p == 2.0:
        return lambda t: t * t
    return lambda t: np.power(t, p)


def builtin_h(name: str) -> RealFunction:
    """Weight functions on [0, 1]: identity, one, reciprocal, power(p)."""
    if name == "identity":
        return RealFunction("identity", lambda t: t, 0.0, 1.0)
    if name == "one":
        return RealFunction("one", lambda t: np.ones_like(t), 0.0, 1.0)
    if name == "reciprocal":
        return RealFunction("reciprocal", lambda t: 1.0 / t, 0.0, 1.0, lower_open=True)
    p = _power_param(name)
    if p is not None:
        return RealFunction(f"power({p!r})", _pow_func(p), 0.0, 1.0)
    raise CatalogError(f"unknown h {name!r}; expected one of {', '.join(H_NAMES)}")


def _natural_f(name: str) -> RealFunction:
    if name == "ln":
        return RealFunction("ln", np.log, 0.0, math.inf, lower_open=True)
    if name == "square":
        return RealFunction("square", lambda x: x * x)
    if name == "identity":
        return RealFunction("identity", lambda x: x)
    if name == "abs":
        return RealFunction("abs", np.abs)
    if name in ("expfn", "exp"):
        return RealFunction("expfn", np.exp)
    p = _power_param(name)
    if p is not None:
        return RealFunction(f"power({p!r})", _pow_func(p), 0.0, math.inf)
    raise CatalogError(f"unknown f {name!r}; expected one of {', '.join(F_NAMES)}")


def builtin_f(name: str, domain: Interval) -> RealFunction:
    """Catalog function restricted to ``domain``."""
    return _natural_f(name).restrict(domain)


def h_power(h: RealFunction, s: float) -> HPower:
    """t -> h(t)**s, computed as exp(s*ln h(t)) with h(t) = 0 mapped to 0."""
    if not (isinstance(s, (int, float)) and 0.0 < s <= 1.0):
        raise CatalogError(f"s must lie in (0, 1], got {s!r}")
    s = float(s)

    def func(t, _h=h.func, _s=s):
        base = np.asarray(_h(t), dtype=float)
        if np.any(base < 0.0):
            bad = np.broadcast_to(np.asarray(t, dtype=float), base.shape)
            raise DomainError("negative weight", h.name, float(bad[base < 0.0][0]))
        if _s == 1.0:
            return base
        with np.errstate(divide="ignore"):
            out = np.exp(_s * np.log(base))
        return np.where(base == 0.0, 0.0, out)

    return HPower(
        name=h.name if s == 1.0 else f"{h.name}^{s!r}",
        func=func,
        lower=h.lower,
        upper=h.upper,
        lower_open=h.lower_open,
        upper_open=h.upper_open,
        base=h,
        s=s,
    )


def from_expression(source: str, domain: Interval | None = None) -> RealFunction:
    """Wrap a parsed expression; ``domain`` (if given) bounds evaluation."""
    tree = parse(source)
    name = unparse(tree)
    fn = RealFunction(name, lambda xs, _t=tree: evaluate_array(_t, xs))
    if domain is None:
        return fn
    return RealFunction(name, fn.func, domain.a, domain.b)


def _looks_like_name(spec: str) -> bool:
    # a bare one-letter name is the variable itself, not a misspelled entry
    if spec.startswith("power("):
        return True
    return re.fullmatch(r"[A-Za-z_]\w+", spec) is not None


def resolve_function(spec: str, domain: Interval | None = None, *, kind: str = "f") -> RealFunction:
    """Catalog name or expression text -> RealFunction.

    ``kind="h"`` resolves against the weight catalog on [0, 1].
    """
    spec = spec.strip()
    if kind == "h":
        try:
            return builtin_h(spec)
        except CatalogError:
            if _looks_like_name(spec):
                raise
        return from_expression(spec, Interval(0.0, 1.0))
    try:
        natural = _natural_f(spec)
    except CatalogError:
        if _looks_like_name(spec):
            raise
        return from_expression(spec, domain)
    return natural.restrict(domain) if domain is not None else natural
