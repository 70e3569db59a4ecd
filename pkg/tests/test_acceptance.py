"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.

Criterion 9 is expected to fail: the coordinate-dominance split fixture has
no supporting price (spending all wealth on the single tracked good is
affordable and strictly preferred at any normalized price), so the endowment
is provably not Walrasian there.  The test encodes the stated expectation
and is left red on purpose; the README carries the write-up, and the
``dominance-split`` demo scenario emits the machine-checkable evidence.
"""

import time

import numpy as np
import pytest

from choquet_lab.choquet import (
    StepFunction,
    check_choquet_properties,
    choquet,
    comonotone_pair,
    random_step_function,
    riemann_choquet,
)
from choquet_lab.economy import (
    check_condition_c1,
    check_excess_convexity,
    check_walras,
    check_wealth_dominance,
    condition_c2_witness,
    endowment_is_walrasian,
    find_price,
    search_improvement,
)
from choquet_lab.fixtures import (
    cobb_douglas_economy,
    identity_family,
    intro_sectioned_family,
    linear_profile,
    split_dominance_economy,
    square_family,
    square_measure,
    square_profile,
    sqrt_measure,
)
from choquet_lab.intervals import IntervalSet, random_interval_set, uniform_partition
from choquet_lab.measures import FuzzyMeasure, check_measure_properties
from choquet_lab.product import (
    ProductSet,
    ProductStepFunction,
    fubini_check,
    integrate_sectional_over,
    product_set_from_levels,
    range_realize,
)


def _report(number: int, name: str, ok: bool, elapsed: float, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {number:02d} {name}: {status} in {elapsed:.2f}s{suffix}")


def test_criterion_01_choquet_exactness():
    """Sorted-threshold integral vs brute-force Riemann sum on 1e5 t-nodes."""
    start = time.time()
    rng = np.random.default_rng(1001)
    mus = [
        square_measure(),
        sqrt_measure(),
        FuzzyMeasure.lebesgue(),
        FuzzyMeasure.sectioned(
            [IntervalSet([(0.0, 0.25)]), IntervalSet([(0.25, 1.0)])], [2.0, 1.0]
        ),
    ]
    tnodes = 100_000
    worst = 0.0
    ok = True
    for i in range(100):
        f = random_step_function(rng)
        mu = mus[i % len(mus)]
        tol = mu.total * max(f.max_value, 1e-12) / tnodes
        gap = abs(choquet(f, mu) - riemann_choquet(f, mu, tnodes))
        worst = max(worst, gap - tol)
        ok = ok and gap <= tol
    elapsed = time.time() - start
    ok = ok and elapsed < 10.0
    _report(1, "choquet-exactness", ok, elapsed, f"worst slack {worst:.2e}")
    assert ok


def test_criterion_02_analytic_fixtures():
    """Integrals of x and x^2 against the squared distortion, comonotone sum.

    Oracles: int_0^1 (1-t)^2 dt = 1/3; int_0^1 (1-sqrt t)^2 dt = 1/6; the sum
    x + x^2 integrates to 1/2 by substituting t = s + s^2."""
    start = time.time()
    mu = square_measure()
    f = linear_profile(1000)
    h = square_profile(1000)
    vf = choquet(f, mu)
    vh = choquet(h, mu)
    vsum = choquet(f + h, mu)
    ok = (
        abs(vf - 1.0 / 3.0) <= 2e-3
        and abs(vh - 1.0 / 6.0) <= 5e-3
        and abs(vsum - 0.5) <= 5e-3
        and abs(vsum - vf - vh) <= 5e-3
    )
    elapsed = time.time() - start
    _report(2, "analytic-fixtures", ok, elapsed, f"1/3->{vf:.5f} 1/6->{vh:.5f} 1/2->{vsum:.5f}")
    assert ok


def test_criterion_03_integral_properties():
    """Homogeneity through horizontal additivity on 500 trials each; the
    convex distortion must leave a recorded subadditivity counterexample."""
    start = time.time()
    ok = True
    for mu in (sqrt_measure(), FuzzyMeasure.lebesgue(),
               FuzzyMeasure.sectioned(
                   [IntervalSet([(0.0, 0.5)]), IntervalSet([(0.5, 1.0)])], [1.0, 1.0]
               )):
        rep = check_choquet_properties(mu, trials=500, seed=2024)
        ok = ok and rep.all_pass and rep.results["subadditivity"]["checked"]
    convex_rep = check_choquet_properties(square_measure(), trials=500, seed=2024)
    ok = ok and not convex_rep.results["subadditivity"]["checked"]
    for name in ("homogeneity", "monotonicity", "translation",
                 "comonotone_additivity", "horizontal_additivity"):
        ok = ok and convex_rep.results[name]["passed"]
    counterexample = check_measure_properties(square_measure(), trials=500, seed=2024)
    ok = ok and not counterexample.subadditive and counterexample.witness is not None
    elapsed = time.time() - start
    _report(3, "integral-properties", ok, elapsed)
    assert ok


def test_criterion_04_fubini():
    """Both integration orders agree within 2e-3 on 50 random product step
    functions at K=100, 1000 x-cells, 1e4 t-nodes."""
    start = time.time()
    rng = np.random.default_rng(4004)
    families = [identity_family(100), square_family(100), intro_sectioned_family(100)]
    cells = uniform_partition(1000)
    worst = 0.0
    for i in range(50):
        fam = families[i % len(families)]
        sections = tuple(
            StepFunction(cells, rng.uniform(0.0, 2.0, size=1000), validate=False)
            for _ in range(fam.K)
        )
        rep = fubini_check(fam, ProductStepFunction(sections), tnodes=10_000)
        worst = max(worst, rep.deviation)
    elapsed = time.time() - start
    ok = worst <= 2e-3 and elapsed < 60.0
    _report(4, "fubini-decomposition", ok, elapsed, f"worst deviation {worst:.2e}")
    assert ok


def test_criterion_05_level_sets():
    """Constructed sets hit prescribed section levels within 1e-9."""
    start = time.time()
    rng = np.random.default_rng(5005)
    worst = 0.0
    for fam in (square_family(100), intro_sectioned_family(100)):
        for _ in range(50):
            tau = rng.uniform(0.0, 1.0, size=fam.K)
            H = product_set_from_levels(fam, tau)
            got = np.array([mu(sec) for mu, sec in zip(fam.measures, H.sections)])
            worst = max(worst, float(np.max(np.abs(got - tau))))
    elapsed = time.time() - start
    ok = worst <= 1e-9
    _report(5, "level-set-construction", ok, elapsed, f"worst {worst:.2e}")
    assert ok


def test_criterion_06_range_convexity():
    """Convex combinations of achievable integrals are reconstructed within 1e-6."""
    start = time.time()
    rng = np.random.default_rng(6006)
    fam = square_family(100)
    worst = 0.0
    ok = True
    for _ in range(100):
        phi = rng.uniform(0.1, 2.0, size=(fam.K, 2))
        H1 = ProductSet(tuple(random_interval_set(rng, allow_empty=True) for _ in range(fam.K)))
        H2 = ProductSet(tuple(random_interval_set(rng, allow_empty=True) for _ in range(fam.K)))
        z1 = integrate_sectional_over(fam, phi, H1)
        z2 = integrate_sectional_over(fam, phi, H2)
        for c in rng.uniform(0.0, 1.0, size=10):
            res = range_realize(fam, phi, c * z1 + (1 - c) * z2)
            if not res.feasible or res.deviation > 1e-6:
                ok = False
            else:
                worst = max(worst, res.deviation)
    elapsed = time.time() - start
    _report(6, "range-convexity", ok, elapsed, f"worst {worst:.2e}")
    assert ok


def test_criterion_07_cobb_douglas_equilibrium():
    """(f, p) = ((2y, 2(1-y)), (1/2, 1/2)) is accepted and cannot be improved."""
    start = time.time()
    eco, allocation, exact_price = cobb_douglas_economy(K=100)
    walras = check_walras(eco, allocation, exact_price)
    search = find_price(eco, allocation, seed=77)
    price_ok = search.found and np.max(np.abs(search.price - 0.5)) <= 1e-3
    walras_found = check_walras(eco, allocation, search.price) if search.found else None
    core = search_improvement(eco, allocation, "improve", budget=500,
                              levels=4, yblocks=8, demand_grid=50, seed=77)
    no_witness = not hasattr(core, "coalition")
    ok = walras.verdict and price_ok and walras_found.verdict and no_witness
    elapsed = time.time() - start
    _report(7, "cobb-douglas-equilibrium", ok, elapsed,
            f"price {np.round(search.price, 6).tolist() if search.found else None}")
    assert ok


def test_criterion_08_excess_geometry():
    """Supporting price ~ (1/2, 1/2), mixing convexity <= 1e-8, per-node
    wealth equality at the equilibrium pair."""
    start = time.time()
    eco, allocation, exact_price = cobb_douglas_economy(K=100)
    search = find_price(eco, allocation, seed=88)
    price_ok = search.found and np.max(np.abs(search.price - 0.5)) <= 1e-3
    convexity = check_excess_convexity(eco, allocation, trials=200, seed=88)
    wealth = check_wealth_dominance(eco, allocation, exact_price)
    equality = wealth.passed and wealth.max_gap <= 1e-9
    ok = price_ok and convexity.passed and equality
    elapsed = time.time() - start
    _report(8, "excess-set-geometry", ok, elapsed,
            f"mixing {convexity.max_mixing_deviation:.2e}, wealth gap {wealth.max_gap:.2e}")
    assert ok


def test_criterion_09_endowment_equilibrium_split_fixture():
    """Stated expectation: the endowment is Walrasian on the split-dominance
    fixture.  The verdict is honestly False: at any normalized price, an
    agent tracking good j alone can afford wealth/p_j > e_j of it, which is
    strictly preferred, so (w2) fails somewhere.  Kept red deliberately."""
    start = time.time()
    eco = split_dominance_economy(K=100)
    report = endowment_is_walrasian(eco, seed=99)
    elapsed = time.time() - start
    ok = report.verdict and elapsed < 30.0
    _report(9, "endowment-equilibrium-split", ok, elapsed,
            "verdict False: no supporting price exists for this preference split")
    assert elapsed < 30.0
    assert report.verdict, (
        "stated expectation is True, but no normalized price can make the "
        "endowment budget-maximal on both halves of the preference split: "
        "agents tracking good j alone always afford wealth/p_j > e_j of it"
    )


def test_criterion_10_integral_conditions():
    """(c1) integral subadditivity on 500 random pairs; (c2) order diagnostic
    exhibits a violating coalition on 100 constructed pairs."""
    start = time.time()
    fam = identity_family(10)
    violation = check_condition_c1(fam, trials=500, seed=1010)
    rng = np.random.default_rng(1010)
    fam20 = intro_sectioned_family(20)
    c2_ok = True
    for _ in range(100):
        g = rng.uniform(0.5, 2.0, size=20)
        f = np.clip(g - rng.uniform(0.0, 0.3, size=20), 0.0, None)
        k = int(rng.integers(20))
        f[k] = g[k] + rng.uniform(0.1, 1.0)
        witness = condition_c2_witness(fam20, f, g)
        if witness is None or witness.lhs <= witness.rhs:
            c2_ok = False
    ok = violation <= 1e-12 and c2_ok
    elapsed = time.time() - start
    _report(10, "integral-conditions", ok, elapsed, f"c1 violation {violation:.2e}")
    assert ok
