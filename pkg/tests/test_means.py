import math

import numpy as np
import pytest

from hsconvex.funcat import Interval, builtin_f
from hsconvex.means import (
    CHAIN,
    MEAN_KINDS,
    PROPOSITION_THEOREM,
    arithmetic,
    chain_check,
    geometric,
    harmonic,
    identric,
    log_identric,
    logarithmic,
    mean,
    p_log_mean,
    proposition_check,
    quadratic,
)
from hsconvex.quad import integral_mean

FIXED_KINDS = [k for k in MEAN_KINDS if k != "p_logarithmic"]
P_GRID = [p for p in range(-5, 6) if p not in (-1, 0)]


def _all_means(a, b):
    out = {k: mean(k, a, b) for k in FIXED_KINDS}
    out.update({f"L_{p}": p_log_mean(a, b, p) for p in (-3.5, 0.5, 2.0)})
    return out


def test_examples():
    assert arithmetic(2, 4) == 3.0
    assert harmonic(2, 6) == 3.0
    assert quadratic(1, 7) == 5.0
    assert abs(logarithmic(1, math.e) - (math.e - 1)) <= 1e-15


def test_identric_examples_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30
    # I(1, e) = e^(1/(e-1))
    ref = float(mpmath.e ** (1 / (mpmath.e - 1)))
    assert abs(identric(1, math.e) - ref) <= 1e-15 * ref
    # I(2, 4) = 8/e
    assert abs(identric(2, 4) - float(8 / mpmath.e)) <= 1e-15 * 3


def test_identric_large_arguments_do_not_overflow():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    a, b = mpmath.mpf(5e5), mpmath.mpf(1e6)
    ref = float(mpmath.exp((b * mpmath.log(b) - a * mpmath.log(a)) / (b - a) - 1))
    assert math.isclose(identric(5e5, 1e6), ref, rel_tol=1e-13)


def test_p_log_mean_examples():
    assert abs(p_log_mean(1, 2, 1) - 1.5) <= 1e-15
    assert abs(p_log_mean(1, 2, 2) - math.sqrt(7 / 3)) <= 1e-15


def test_p_log_mean_routes_special_p():
    assert p_log_mean(1, 2, 0) == identric(1, 2)
    assert p_log_mean(1, 2, -1) == logarithmic(1, 2)


def test_p_log_mean_tends_to_identric():
    target = identric(1, 2)
    gaps = [abs(p_log_mean(1, 2, p) - target) for p in (1e-1, 1e-3, 1e-5)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] <= 1e-5
    assert abs(target - 1.4715177646857693) <= 1e-15


def test_p_log_mean_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    rng = np.random.default_rng(8)
    for a, b in rng.uniform(0.1, 100, size=(50, 2)):
        for p in (-4.5, -2, 0.3, 3):
            A, B = mpmath.mpf(float(min(a, b))), mpmath.mpf(float(max(a, b)))
            ref = ((B ** (p + 1) - A ** (p + 1)) / ((p + 1) * (B - A))) ** (1 / mpmath.mpf(p))
            assert math.isclose(p_log_mean(a, b, p), float(ref), rel_tol=1e-12)


def test_diagonal_returns_argument():
    for k, v in _all_means(5.0, 5.0).items():
        assert abs(v - 5.0) <= 1e-15 * 5, k
    c = chain_check(5, 5)
    assert c.holds
    assert all(abs(v - 5.0) <= 1e-15 * 5 for v in c.values.values())


@pytest.mark.parametrize("a", [1.0, 3.7, 1e3])
@pytest.mark.parametrize("eps", [1e-9, 1e-10, 1e-12, 1e-15])
def test_near_diagonal_series(a, eps):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 50
    b = a * (1 + eps)
    A, B = mpmath.mpf(a), mpmath.mpf(b)
    ref_L = (B - A) / (mpmath.log(B) - mpmath.log(A))
    ref_I = mpmath.exp((B * mpmath.log(B) - A * mpmath.log(A)) / (B - A) - 1)
    ref_L2 = ((B**3 - A**3) / (3 * (B - A))) ** mpmath.mpf(0.5)
    assert math.isclose(logarithmic(a, b), float(ref_L), rel_tol=1e-14)
    assert math.isclose(identric(a, b), float(ref_I), rel_tol=1e-14)
    assert math.isclose(p_log_mean(a, b, 2), float(ref_L2), rel_tol=1e-14)


def test_chain_example():
    c = chain_check(2, 4)
    assert c.holds
    assert [x[0] for x in c.comparisons] == list(CHAIN[:-1])
    v = c.values
    assert abs(v["H"] - 8 / 3) <= 1e-15
    assert abs(v["G"] - 2 * math.sqrt(2)) <= 1e-15
    assert abs(v["L"] - 2 / math.log(2)) <= 1e-15
    assert abs(v["I"] - 8 / math.e) <= 1e-15
    assert v["A"] == 3.0
    assert abs(v["K"] - math.sqrt(10)) <= 1e-15


def test_chain_on_random_pairs():
    rng = np.random.default_rng(42)
    for a, b in rng.uniform(0.1, 100, size=(1000, 2)):
        assert chain_check(a, b).holds, (a, b)


def test_log_identric_equals_integral_mean_of_ln():
    rng = np.random.default_rng(7)
    for a, b in rng.uniform(2, 50, size=(100, 2)):
        a, b = min(a, b), max(a, b)
        iv = Interval(float(a), float(b))
        q = integral_mean(builtin_f("ln", iv), iv)
        assert abs(log_identric(a, b) - q.value) <= 1e-8


def test_p_log_mean_monotone_in_p():
    rng = np.random.default_rng(13)
    for a, b in rng.uniform(0.1, 100, size=(100, 2)):
        ps = sorted(P_GRID + [-1, 0])
        vals = [p_log_mean(a, b, p) for p in ps]
        for lo, hi in zip(vals, vals[1:]):
            assert hi >= lo * (1 - 1e-14)


@pytest.mark.parametrize("kind", FIXED_KINDS)
def test_symmetry_is_bit_exact(kind):
    rng = np.random.default_rng(21)
    for a, b in rng.uniform(0.1, 100, size=(200, 2)):
        assert mean(kind, a, b) == mean(kind, b, a)
    for a, b in rng.uniform(0.1, 100, size=(50, 2)):
        assert p_log_mean(a, b, 2.5) == p_log_mean(b, a, 2.5)


@pytest.mark.parametrize("kind", FIXED_KINDS)
@pytest.mark.parametrize("lam", [0.5, 2.0, 10.0])
def test_homogeneity(kind, lam):
    rng = np.random.default_rng(4)
    for a, b in rng.uniform(0.1, 100, size=(100, 2)):
        base = mean(kind, a, b)
        assert math.isclose(mean(kind, lam * a, lam * b), lam * base, rel_tol=1e-12)


@pytest.mark.parametrize("p", [-3.0, 0.5, 2.0])
def test_p_log_homogeneity(p):
    rng = np.random.default_rng(5)
    for a, b in rng.uniform(0.1, 100, size=(50, 2)):
        assert math.isclose(p_log_mean(2 * a, 2 * b, p), 2 * p_log_mean(a, b, p), rel_tol=1e-12)


def test_harmonic_needs_positive_sum():
    assert harmonic(0.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        harmonic(0.0, 0.0)


@pytest.mark.parametrize("kind", ["logarithmic", "identric"])
def test_domain_errors(kind):
    with pytest.raises(ValueError):
        mean(kind, 0.0, 1.0)
    with pytest.raises(ValueError):
        mean(kind, -1.0, 1.0)


def test_unknown_kind():
    with pytest.raises(ValueError):
        mean("contraharmonic", 1, 2)
    with pytest.raises(ValueError):
        mean("p_logarithmic", 1, 2)


# propositions

def test_proposition_one_fails_with_failed_hypothesis():
    r = proposition_check(1, 3, 5, 1.0)
    assert r.theorem == "hs_symmetric_upper"
    assert abs(r.ln_identric - 1.3756763480830863) <= 1e-15
    assert abs(r.right_printed - 0.5 * (math.log(3) + math.log(5))) <= 1e-15
    assert r.right_printed == pytest.approx(1.3540, abs=1e-4)
    assert not r.holds_as_printed and not r.holds_as_derived
    assert r.hypothesis_established is False
    assert abs(r.ln_identric - r.ln_identric_quadrature) <= 1e-10


def test_proposition_four_fails():
    r = proposition_check(4, 3, 5, 1.0)
    expected = 0.5 * (0.5 * (math.log(3) + math.log(5)) + math.log(4))
    assert abs(r.right_printed - expected) <= 1e-15
    assert abs(r.right_printed - 1.3701) <= 1e-4
    assert not r.holds_as_printed


def test_proposition_two_carries_both_right_bounds():
    r = proposition_check(2, 3, 5, 0.5)
    assert math.isclose(r.right_derived, 2 * r.right_printed, rel_tol=1e-15)
    assert r.left_printed == r.left_derived


@pytest.mark.parametrize("prop", [1, 3, 4])
def test_diagonal_equality(prop):
    r = proposition_check(prop, 3.0, 3.0, 1.0)
    assert r.hypothesis is None
    assert abs(r.right_printed - math.log(3)) <= 1e-15
    assert abs(r.ln_identric - math.log(3)) <= 1e-15
    assert r.holds_as_printed and r.holds_as_derived


def test_diagonal_proposition_two_derived_bound():
    r = proposition_check(2, 3.0, 3.0, 1.0)
    assert abs(r.left_derived - math.log(3)) <= 1e-15
    assert abs(r.right_derived - math.log(3)) <= 1e-15
    assert r.holds_as_derived
    # the printed right bound is half of ln a and cannot hold
    assert not r.holds_as_printed


def test_mapping_covers_every_proposition():
    assert set(PROPOSITION_THEOREM) == {1, 2, 3, 4}


@pytest.mark.parametrize(
    "args",
    [(0, 3, 5, 1.0), (1, 2.0, 5, 1.0), (1, 1, 5, 1.0), (1, 5, 3, 1.0), (1, 3, 5, 0.0), (1, 3, 5, 1.5)],
)
def test_proposition_input_errors(args):
    with pytest.raises(ValueError):
        proposition_check(*args)


def test_means_agree_with_direct_formulas():
    rng = np.random.default_rng(99)
    for a, b in rng.uniform(0.5, 20, size=(100, 2)):
        assert math.isclose(geometric(a, b), math.sqrt(a * b), rel_tol=1e-15)
        assert math.isclose(harmonic(a, b), 2 * a * b / (a + b), rel_tol=1e-15)
        assert math.isclose(quadratic(a, b), math.sqrt((a * a + b * b) / 2), rel_tol=1e-15)
        assert math.isclose(logarithmic(a, b), (b - a) / (math.log(b) - math.log(a)), rel_tol=1e-11)
