import numpy as np
import pytest

from choquet_lab.choquet import StepFunction, comonotone_pair
from choquet_lab.errors import StructuralError, UnsupportedFamilyError
from choquet_lab.intervals import IntervalSet, random_interval_set
from choquet_lab.measures import Distortion, FuzzyMeasure
from choquet_lab.product import (
    ProductSet,
    ProductStepFunction,
    SectionFamily,
    check_price_commutation,
    fubini_check,
    integrate_product,
    integrate_sectional_over,
    product_measure,
    product_set_from_levels,
    range_realize,
)


def identity_family(K=100):
    return SectionFamily.homothetic(Distortion.identity(), K=K)


def square_family(K=100):
    return SectionFamily.homothetic(Distortion.power(2.0), K=K)


def intro_family(K=100):
    # two x-blocks, y-halves: node measures concentrate on one block each
    blocks = [IntervalSet([(0.0, 0.5)]), IntervalSet([(0.5, 1.0)])]
    return SectionFamily.from_y_intervals(blocks, [(0.0, 0.5), (0.5, 1.0)], K=K)


def wedge(fam):
    """H with H_y = [0, y)."""
    ys = fam.ygrid
    return ProductSet(
        tuple(IntervalSet([(0.0, y)]) if y > 0 else IntervalSet.empty() for y in ys)
    )


class TestSectionFamily:
    def test_normalized_square_family(self):
        fam = square_family()
        assert fam.convex_type
        assert np.allclose(fam.totals, 1.0)
        # normalization rescales, it does not reshape: mu([0,1/2)) stays 0.25
        assert fam.measures[0](IntervalSet([(0.0, 0.5)])) == pytest.approx(0.25)

    def test_sectioned_family_normalization(self):
        fam = intro_family()
        assert fam.convex_type
        assert np.allclose(fam.totals, 1.0)
        # first node is supported on the first block only
        assert fam.measures[0](IntervalSet([(0.5, 1.0)])) == 0.0

    def test_heterogeneous_family(self):
        measures = [
            FuzzyMeasure.distorted(Distortion.power(1.0 + k / 10)) for k in range(10)
        ]
        fam = SectionFamily.heterogeneous(measures)
        assert not fam.convex_type
        with pytest.raises(UnsupportedFamilyError):
            fam.uniform_chain(0.5)
        with pytest.raises(UnsupportedFamilyError):
            range_realize(fam, np.ones(10), np.array([0.5]))

    def test_uniform_chain_homothetic(self):
        fam = square_family()
        X_t = fam.uniform_chain(0.25)
        assert X_t == IntervalSet([(0.0, 0.5)])  # g^{-1}(0.25) = 0.5

    def test_uniform_chain_sectioned_hits_every_node(self):
        fam = intro_family(K=10)
        for t in (0.2, 0.5, 0.9):
            X_t = fam.uniform_chain(t)
            for mu in fam.measures:
                assert mu(X_t) == pytest.approx(t * mu.total, abs=1e-9)


class TestProductMeasure:
    def test_wedge_measure_is_half(self):
        fam = identity_family()
        assert product_measure(fam, wedge(fam)) == pytest.approx(0.5, abs=1e-4)

    def test_empty_and_full(self):
        fam = square_family()
        assert product_measure(fam, ProductSet.empty(fam.K)) == 0.0
        assert product_measure(fam, ProductSet.full(fam.K)) == pytest.approx(1.0)

    def test_section_count_mismatch(self):
        fam = identity_family(K=10)
        with pytest.raises(StructuralError):
            product_measure(fam, ProductSet.full(9))

    def test_monotone_on_nested_pairs(self):
        fam = square_family(K=20)
        rng = np.random.default_rng(0)
        for _ in range(500):
            big = ProductSet(tuple(random_interval_set(rng) for _ in range(20)))
            small = ProductSet(
                tuple(s.intersection(random_interval_set(rng)) for s in big.sections)
            )
            assert product_measure(fam, small) <= product_measure(fam, big) + 1e-12


class TestIntegrateProduct:
    def test_constant_on_normalized_family(self):
        for fam in (identity_family(K=30), square_family(K=30), intro_family(K=30)):
            f = ProductStepFunction.uniform(StepFunction.constant(2.5), fam.K)
            assert integrate_product(fam, f) == pytest.approx(2.5)

    def test_linear_profile_square_distortion(self):
        fam = square_family()
        f = ProductStepFunction.uniform(StepFunction.from_samples(lambda x: x, 1000), fam.K)
        assert integrate_product(fam, f) == pytest.approx(1.0 / 3.0, abs=2e-3)

    def test_sectional_phi(self):
        fam = identity_family()
        phi = fam.ygrid
        val = integrate_product(fam, ProductStepFunction.sectional(phi))
        assert val == pytest.approx(0.5, abs=1e-4)

    def test_matches_sectional_over_full(self):
        fam = square_family(K=17)
        phi = np.linspace(0.2, 1.4, 17)
        a = integrate_product(fam, ProductStepFunction.sectional(phi))
        b = integrate_sectional_over(fam, phi, ProductSet.full(fam.K))
        assert a == pytest.approx(b, abs=1e-12)


class TestSectionalOver:
    def test_constant_one_recovers_measure(self):
        fam = intro_family(K=40)
        rng = np.random.default_rng(1)
        H = ProductSet(tuple(random_interval_set(rng) for _ in range(40)))
        assert integrate_sectional_over(fam, np.ones(40), H) == pytest.approx(
            product_measure(fam, H), abs=1e-12
        )

    def test_wedge_weighted_by_phi(self):
        fam = identity_family()
        val = integrate_sectional_over(fam, fam.ygrid, wedge(fam))
        assert val == pytest.approx(1.0 / 3.0, abs=1e-3)

    def test_vector_constant_full_space(self):
        fam = square_family(K=25)
        phi = np.tile([1.0, 2.0], (25, 1))
        out = integrate_sectional_over(fam, phi, ProductSet.full(25))
        assert out == pytest.approx([1.0, 2.0])

    def test_agrees_with_product_integral_of_cut(self):
        fam = square_family(K=15)
        rng = np.random.default_rng(2)
        phi = rng.uniform(0.1, 2.0, size=(15, 2))
        H = ProductSet(tuple(random_interval_set(rng) for _ in range(15)))
        a = integrate_sectional_over(fam, phi, H)
        b = integrate_product(fam, ProductStepFunction.sectional_on(phi, H))
        assert np.max(np.abs(a - b)) <= 1e-9

    def test_sectional_additivity(self):
        fam = intro_family(K=20)
        rng = np.random.default_rng(3)
        for _ in range(50):
            f1 = rng.uniform(0.5, 2.0, size=20)
            f2 = rng.uniform(0.0, 0.5, size=20)
            H = ProductSet(tuple(random_interval_set(rng, allow_empty=True) for _ in range(20)))
            for sign in (+1, -1):
                combo = f1 + sign * f2
                lhs = integrate_sectional_over(fam, combo, H)
                rhs = integrate_sectional_over(fam, f1, H) + sign * integrate_sectional_over(
                    fam, f2, H
                )
                assert lhs == pytest.approx(rhs, abs=1e-9)


class TestFubini:
    def test_single_value_function(self):
        fam = square_family(K=10)
        f = ProductStepFunction.uniform(StepFunction.constant(1.3), 10)
        rep = fubini_check(fam, f, tnodes=500)
        assert rep.deviation <= 1e-9

    def test_linear_identity_family(self):
        fam = identity_family()
        f = ProductStepFunction.uniform(StepFunction.from_samples(lambda x: x, 1000), 100)
        rep = fubini_check(fam, f, tnodes=10_000)
        assert rep.deviation <= 1e-3
        assert rep.lhs == pytest.approx(0.5, abs=2e-3)

    def test_linear_square_family(self):
        fam = square_family()
        f = ProductStepFunction.uniform(StepFunction.from_samples(lambda x: x, 1000), 100)
        rep = fubini_check(fam, f, tnodes=10_000)
        assert rep.deviation <= 2e-3
        assert rep.rhs == pytest.approx(1.0 / 3.0, abs=2e-3)

    def test_tnodes_floor(self):
        fam = identity_family(K=5)
        f = ProductStepFunction.uniform(StepFunction.constant(1.0), 5)
        with pytest.raises(StructuralError):
            fubini_check(fam, f, tnodes=50)

    def test_comonotone_in_x_additivity(self):
        fam = square_family(K=10)
        rng = np.random.default_rng(4)
        for _ in range(200):
            pairs = [comonotone_pair(rng, max_cells=6) for _ in range(10)]
            f1 = ProductStepFunction(tuple(p[0] for p in pairs))
            f2 = ProductStepFunction(tuple(p[1] for p in pairs))
            both = ProductStepFunction(tuple(a + b for a, b in zip(f1.sections, f2.sections)))
            lhs = integrate_product(fam, both)
            rhs = integrate_product(fam, f1) + integrate_product(fam, f2)
            assert lhs == pytest.approx(rhs, abs=1e-9)


class TestPriceCommutation:
    def test_projection(self):
        fam = identity_family(K=20)
        phi = np.column_stack([fam.ygrid, 1.0 - fam.ygrid])
        rep = check_price_commutation(fam, [1.0, 0.0], phi)
        assert rep.max_deviation <= 1e-9

    def test_balanced_pair_sums_to_one(self):
        fam = identity_family()
        phi = np.column_stack([fam.ygrid, 1.0 - fam.ygrid])
        rep = check_price_commutation(fam, [1.0, 1.0], phi)
        assert rep.max_deviation <= 1e-9
        total = integrate_sectional_over(fam, phi @ np.array([1.0, 1.0]), ProductSet.full(100))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_separable_fixture(self):
        # oracle: mu_y([0,1/2)) = 0.25 per node, so both sides are
        # 5 * avg(y) * 0.25 = 0.625
        fam = square_family()
        gx = StepFunction.indicator(IntervalSet([(0.0, 0.5)]))
        phi = np.column_stack([fam.ygrid, fam.ygrid])
        rep = check_price_commutation(fam, [2.0, 3.0], phi, gx=gx)
        assert rep.max_deviation <= 1e-9
        both = integrate_product(fam, ProductStepFunction.separable(gx, phi @ np.array([2.0, 3.0])))
        assert both == pytest.approx(0.625, abs=1e-3)


class TestLevelSets:
    def test_full_levels(self):
        fam = square_family(K=10)
        H = product_set_from_levels(fam, np.ones(10))
        assert H == ProductSet.full(10)

    def test_identity_wedge(self):
        fam = identity_family(K=10)
        H = product_set_from_levels(fam, fam.ygrid)
        for y, sec, mu in zip(fam.ygrid, H.sections, fam.measures):
            assert sec == IntervalSet([(0.0, y)])
            assert mu(sec) == pytest.approx(y, abs=1e-9)

    def test_square_quarter_levels(self):
        fam = square_family(K=8)
        H = product_set_from_levels(fam, np.full(8, 0.25))
        for sec, mu in zip(H.sections, fam.measures):
            assert sec == IntervalSet([(0.0, 0.5)])
            assert mu(sec) == pytest.approx(0.25, abs=1e-9)

    def test_level_postcondition_random(self):
        rng = np.random.default_rng(5)
        for fam in (square_family(K=30), intro_family(K=30)):
            for _ in range(100):
                levels = rng.uniform(0, 1, size=30)
                H = product_set_from_levels(fam, levels)
                for lvl, sec, mu in zip(levels, H.sections, fam.measures):
                    assert mu(sec) == pytest.approx(lvl * mu.total, abs=1e-9)


class TestRangeRealize:
    def test_scalar_target(self):
        fam = square_family(K=50)
        res = range_realize(fam, np.ones(50), 0.37)
        assert res.feasible
        assert res.deviation <= 1e-6
        assert res.achieved == pytest.approx([0.37], abs=1e-6)

    def test_zero_target(self):
        fam = square_family(K=20)
        res = range_realize(fam, np.ones(20), 0.0)
        assert res.feasible
        assert res.achieved == pytest.approx([0.0], abs=1e-6)

    def test_out_of_range_gets_direction(self):
        fam = square_family(K=20)
        res = range_realize(fam, np.ones(20), 1.5)
        assert not res.feasible
        d = res.separating_direction
        assert d is not None
        # d certifies: d.target exceeds the zonotope's support in direction d
        support = np.mean(np.maximum(0.0, np.ones(20) * d[0]))
        assert d[0] * 1.5 > support + 1e-9

    def test_roundtrip_random_levels(self):
        rng = np.random.default_rng(6)
        fam = square_family(K=40)
        for _ in range(100):
            phi = rng.uniform(0.1, 2.0, size=(40, 2))
            levels = rng.uniform(0, 1, size=40)
            H = product_set_from_levels(fam, levels)
            target = integrate_sectional_over(fam, phi, H)
            res = range_realize(fam, phi, target)
            assert res.feasible
            assert res.deviation <= 1e-6

    def test_convex_combinations_realizable(self):
        rng = np.random.default_rng(7)
        fam = intro_family(K=30)
        phi = np.column_stack([fam.ygrid, 1.0 - fam.ygrid])
        for _ in range(50):
            H1 = ProductSet(tuple(random_interval_set(rng, allow_empty=True) for _ in range(30)))
            H2 = ProductSet(tuple(random_interval_set(rng, allow_empty=True) for _ in range(30)))
            z1 = integrate_sectional_over(fam, phi, H1)
            z2 = integrate_sectional_over(fam, phi, H2)
            for c in rng.uniform(0, 1, size=3):
                res = range_realize(fam, phi, c * z1 + (1 - c) * z2)
                assert res.feasible
                assert res.deviation <= 1e-6
