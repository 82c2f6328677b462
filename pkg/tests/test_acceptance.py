"""Acceptance gate. One test (or group) per criterion; the terminal summary
prints a PASS/FAIL line for each criterion number."""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from hsconvex.classes import ClassSpec, check_membership, find_valid_s_range
from hsconvex.funcat import Interval, builtin_f, builtin_h
from hsconvex.hadamard import (
    HS_THEOREMS,
    THEOREMS,
    closed_form_coefficients,
    evaluate_theorem,
    quadrature_coefficients,
)
from hsconvex.means import chain_check, log_identric, p_log_mean, proposition_check
from hsconvex.quad import integral_mean, integrate
from hsconvex.specfun import beta

import oracles

UNIT = Interval(0.0, 1.0)
IDENT = builtin_h("identity")
LN_IV = Interval(2.0, 4.0)

# frozen regression values for the ln-on-[2,4] s-range (see test_classes)
ORACLE_BOUNDARY = (0.9202148437500001, 0.9203125000000001)
CHECKER_RANGE = [(0.001, 0.9195312500000001)]


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f} s, limit {self.limit} s"


def _value(q):
    return q if isinstance(q, float) else q.value


@pytest.mark.criterion(1, "coefficient reproduction for h(t) = t")
def test_criterion_1_coefficients():
    with Timer(1.0):
        up = quadrature_coefficients("hs_upper", IDENT, 1.0)
        assert abs(_value(up["int_hs"]) - 0.5) <= 1e-9
        assert abs(_value(up["int_hs_reflected"]) - 0.5) <= 1e-9
        prod = quadrature_coefficients("hs_product", IDENT, 1.0)
        assert abs(_value(prod["int_h2s"]) - 1 / 3) <= 1e-9
        assert abs(_value(prod["int_h2s_reflected"]) - 1 / 3) <= 1e-9
        assert abs(_value(prod["int_cross"]) - 1 / 6) <= 1e-9
        for k in range(1, 11):
            s = k / 10
            numeric = integrate(lambda t, s=s: t**s * (1 - t) ** s, UNIT).value
            assert abs(beta(s + 1, s + 1) - numeric) <= 1e-8
            assert closed_form_coefficients("hs_product", s)["int_cross"] == beta(s + 1, s + 1)


@pytest.mark.criterion(2, "specialization collapse at h(t) = t")
def test_criterion_2_specialization():
    with Timer(5.0):
        for fname in ("square", "power(1.5)", "expfn"):
            f = builtin_f(fname, UNIT)
            hh = evaluate_theorem("hh_classic", f, UNIT)
            bu = evaluate_theorem("bullen", f, UNIT)
            fa, fb, fm = hh.value("f(a)"), hh.value("f(b)"), hh.value("f(mid)")
            for s in (0.25, 0.5, 1.0):
                sc = evaluate_theorem("s_convex_hadamard", f, UNIT, s=s)
                up = evaluate_theorem("hs_upper", f, UNIT, h=IDENT, s=s)
                sw = evaluate_theorem("hs_sandwich", f, UNIT, h=IDENT, s=s)
                bl = evaluate_theorem("hs_bullen", f, UNIT, h=IDENT, s=s)
                for r in (up, sw, bl):
                    assert abs(r.value("mean") - hh.value("mean")) <= 1e-10
                # upper bound: (f(a) + f(b))/(s+1); at s = 1 the endpoint average
                assert abs(up.value("rhs") - sc.value("right")) <= 1e-10
                # sandwich: both sides of the s-convex chain
                assert abs(sw.value("left") - sc.value("left")) <= 1e-10
                assert abs(sw.value("right") - sc.value("right")) <= 1e-10
                assert abs(bl.value("rhs") - (0.5 * (fa + fb) + fm) / (s + 1)) <= 1e-10
                if s == 1.0:
                    assert abs(up.value("rhs") - hh.value("endpoint_avg")) <= 1e-10
                    assert abs(sw.value("left") - hh.value("f(mid)")) <= 1e-10
                    assert abs(sw.value("right") - hh.value("endpoint_avg")) <= 1e-10
                    assert abs(2 * bl.value("mean") - bu.value("two_mean")) <= 1e-10
                    assert abs(2 * bl.value("rhs") - bu.value("bullen_rhs")) <= 1e-10


@pytest.mark.criterion(3, "equality witnesses")
def test_criterion_3_equalities():
    with Timer(1.0):
        f = builtin_f("identity", UNIT)
        r = evaluate_theorem("hs_product", f, UNIT, g=f, h=IDENT, s=1.0)
        assert abs(r.value("product_mean") - 1 / 3) <= 1e-9
        assert abs(r.value("rhs") - 1 / 3) <= 1e-9
        r = evaluate_theorem("s_convex_hadamard", builtin_f("power(0.5)", UNIT), UNIT, s=0.5)
        assert abs(r.value("mean") - 2 / 3) <= 1e-9
        assert abs(r.value("right") - 2 / 3) <= 1e-9


@pytest.mark.criterion(4, "ln on [2, 4]: convexity witness and (h-s)_2 s-range")
def test_criterion_4_witness():
    with Timer(30.0):
        v = check_membership(ClassSpec("convex"), builtin_f("ln", LN_IV), LN_IV)
        assert v.status == "violated"
        w = v.witness
        assert w.defect >= 0.058
        distance = math.dist((w.x, w.y, w.t), (2.0, 4.0, 0.5))
        print(f"criterion 4 witness ({w.x}, {w.y}, {w.t}) defect {w.defect}, "
              f"distance to (2, 4, 0.5) = {distance:.4f}")
        assert distance <= 1e-2


@pytest.mark.criterion(4, "ln on [2, 4]: convexity witness and (h-s)_2 s-range")
def test_criterion_4_s_range():
    with Timer(30.0):
        ranges = find_valid_s_range("hs_second", IDENT, builtin_f("ln", LN_IV), LN_IV)
        assert not any(lo <= 1.0 <= hi for lo, hi in ranges)
        assert any(lo < 1.0 for lo, _ in ranges)
        assert ranges == CHECKER_RANGE
        tol = 1e-9 * (1 + math.log(4.0))
        assert oracles.max_defect_ln_hs_second(ORACLE_BOUNDARY[0]) <= tol
        assert oracles.max_defect_ln_hs_second(ORACLE_BOUNDARY[1]) > tol
        assert ORACLE_BOUNDARY[0] - ranges[0][1] <= 2e-3


def _hypothesis_spec(theorem, h, s):
    if theorem in ("hh_classic", "bullen", "pachpatte_product"):
        return ClassSpec("convex")
    if theorem == "p_hadamard":
        return ClassSpec("p_function")
    if theorem == "s_convex_hadamard":
        return ClassSpec("s_convex_2", s=s)
    return ClassSpec("hs_second", h=h, s=s)


@pytest.mark.criterion(5, "hypothesis-conditional soundness over 500 random tuples")
def test_criterion_5_soundness():
    rng = np.random.default_rng(42)
    tuples = members = comparisons = 0
    failures = []
    with Timer(120.0):
        while tuples < 500:
            a, b = np.sort(rng.uniform(0.0, 4.0, 2))
            if b - a < 1e-2:
                continue
            iv = Interval(float(a), float(b))
            choice = int(rng.integers(3))
            name = ("square", f"power({rng.uniform(1.0, 3.0):.6f})", "expfn")[choice]
            f = builtin_f(name, iv)
            h = builtin_h(("identity", "one")[int(rng.integers(2))])
            s = float(rng.choice([0.25, 0.5, 0.75, 1.0]))
            tuples += 1
            verdicts = {}
            for theorem in THEOREMS:
                spec = _hypothesis_spec(theorem, h, s)
                if spec.label not in verdicts:
                    verdicts[spec.label] = check_membership(spec, f, iv)
                if not verdicts[spec.label].member:
                    continue
                members += 1
                uses_s = theorem == "s_convex_hadamard" or theorem in HS_THEOREMS
                r = evaluate_theorem(theorem, f, iv, h=h if theorem in HS_THEOREMS else None,
                                     s=s if uses_s else None)
                comparisons += len(r.comparisons)
                if not r.holds:
                    failures.append((theorem, name, h.name, s, iv.a, iv.b))
    print(f"criterion 5: {tuples} tuples, {members} (tuple, theorem) pairs with hypothesis on grid, "
          f"{comparisons} comparisons, {len(failures)} counterexamples")
    assert members >= 500
    assert failures == []


@pytest.mark.criterion(6, "means suite")
def test_criterion_6_means():
    with Timer(10.0):
        rng = np.random.default_rng(42)
        for a, b in rng.uniform(0.1, 100.0, size=(1000, 2)):
            assert chain_check(a, b).holds
        for a, b in rng.uniform(2.0, 50.0, size=(100, 2)):
            a, b = float(min(a, b)), float(max(a, b))
            iv = Interval(a, b)
            assert abs(log_identric(a, b) - integral_mean(builtin_f("ln", iv), iv).value) <= 1e-8
        ps = [-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5]
        for a, b in rng.uniform(0.1, 100.0, size=(100, 2)):
            vals = [p_log_mean(a, b, p) for p in ps]
            assert all(hi >= lo * (1 - 1e-14) for lo, hi in zip(vals, vals[1:]))


@pytest.mark.criterion(7, "proposition audit at (3, 5), s = 1")
def test_criterion_7_propositions():
    with Timer(5.0):
        r = proposition_check(1, 3.0, 5.0, 1.0)
        assert not r.holds_as_printed
        assert r.hypothesis is not None and not r.hypothesis.member
        assert r.ln_identric > r.right_printed
        assert abs(r.right_printed - 0.5 * (math.log(3) + math.log(5))) <= 1e-12
        r4 = proposition_check(4, 3.0, 5.0, 1.0)
        assert not r4.holds_as_printed and not r4.hypothesis.member


SWEEP_THEOREMS = THEOREMS


def _full_sweep() -> bytes:
    out = []
    for theorem in SWEEP_THEOREMS:
        proc = subprocess.run(
            [sys.executable, "-m", "hsconvex", "sweep", "--theorem", theorem, "--f", "square",
             "--a", "0", "--b", "4", "--random-intervals", "6", "--check-hypothesis", "--seed", "42"],
            capture_output=True, check=False,
        )
        assert proc.returncode in (0, 1), proc.stderr.decode()
        out.append(proc.stdout)
    return b"".join(out)


@pytest.mark.criterion(8, "determinism of the seeded sweep")
def test_criterion_8_determinism():
    first, second = _full_sweep(), _full_sweep()
    assert first and first == second
