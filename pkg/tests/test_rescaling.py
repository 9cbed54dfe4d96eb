import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_row
from querypower import (RescalingError, RescalingRow, SizeWeights,
                        builtin_family, check_recursion, harmonic, make_row,
                        normalized_weights)

F = Fraction


class TestMakeRow:
    def test_from_affine_tail_sums(self):
        row = make_row(4, F=[1 - F(k, 5) for k in range(5)])
        assert row.mu == tuple([F(1, 5)] * 5)
        assert row.f == (F(1, 5), F(1, 20), F(1, 30), F(1, 20), F(1, 5))

    def test_from_constant_f(self):
        row = make_row(3, f=[F(1, 8)] * 4)
        assert row.mu == tuple(F(comb(3, k), 8) for k in range(4))
        assert row.F[2] == F(1, 2)

    def test_from_harmonic_tail_sums(self):
        h3 = harmonic(3)
        tails = [F(1)] + [(h3 - harmonic(k - 1)) / h3 for k in range(1, 4)]
        row = make_row(3, F=tails)
        assert row.f == (F(0), F(2, 11), F(1, 11), F(2, 11))
        assert row == builtin_family("shapley").row(3)

    def test_rejections(self):
        with pytest.raises(RescalingError):
            make_row(2, mu=[F(1, 2), F(1, 2), F(1, 2)])     # sum != 1
        with pytest.raises(RescalingError):
            make_row(2, mu=[F(3, 2), F(-1, 2), F(0)])       # negative entry
        with pytest.raises(RescalingError):
            make_row(2, F=[F(1), F(1, 4), F(1, 2)])          # not decreasing
        with pytest.raises(RescalingError):
            make_row(2, F=[F(1, 2), F(1, 4), F(0)])          # F[0] != 1
        with pytest.raises(RescalingError):
            make_row(2, f=[F(1), F(1)])                      # wrong length
        with pytest.raises(RescalingError):
            make_row(2, mu=[1, 0, 0], f=[1, 0, 0])           # two sources
        with pytest.raises(RescalingError):
            make_row(2)                                      # no source

    def test_point_masses_and_zero_interior_are_legal(self):
        end = make_row(3, mu=[0, 0, 0, 1])
        assert end.is_semivalue_row() and not end.is_regular()
        start = make_row(3, mu=[1, 0, 0, 0])
        assert start.c_norm() == 0


class TestRoundTrips:
    @pytest.mark.parametrize("seed", range(8))
    def test_mu_to_f_to_F_and_back(self, seed):
        rng = random.Random(seed)
        n = rng.randint(1, 12)
        row = random_row(rng, n)
        assert make_row(n, f=list(row.f)) == row
        assert make_row(n, F=list(row.F[:-1])) == row

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 10), st.data())
    def test_roundtrip_property(self, n, data):
        weights = data.draw(st.lists(st.integers(0, 20), min_size=n + 1,
                                     max_size=n + 1))
        if sum(weights) == 0:
            weights[0] = 1
        row = RescalingRow(n, [F(w, sum(weights)) for w in weights])
        assert make_row(n, F=list(row.F[:-1])) == row
        assert make_row(n, f=list(row.f)) == row

    def test_three_validations_agree(self):
        rng = random.Random(42)
        for _ in range(30):
            n = rng.randint(1, 8)
            row = random_row(rng, n)
            # all three coordinates of a valid row are accepted
            assert make_row(n, mu=list(row.mu)) == row
            assert make_row(n, f=list(row.f)) == row
            assert make_row(n, F=list(row.F[:-1])) == row
            # breaking total mass is rejected in every coordinate
            bad_mu = list(row.mu)
            bad_mu[0] += F(1, 7)
            with pytest.raises(RescalingError):
                make_row(n, mu=bad_mu)
            bad_f = list(row.f)
            bad_f[0] += F(1, 7)
            with pytest.raises(RescalingError):
                make_row(n, f=bad_f)
            bad_F = list(row.F[:-1])
            bad_F[0] += F(1, 7)
            with pytest.raises(RescalingError):
                make_row(n, F=bad_F)


class TestBuiltinFamilies:
    def test_uniform_row(self, uniform):
        assert uniform.row(4).mu[2] == F(1, 5)
        assert uniform.row(4).F[:5] == tuple(1 - F(k, 5) for k in range(5))

    def test_coleman_row_constant_f(self, coleman):
        assert coleman.row(4).f == tuple([F(1, 16)] * 5)

    def test_shapley_row(self, shapley_family):
        row = shapley_family.row(3)
        assert row.mu[0] == 0
        assert sum(row.mu) == 1
        assert harmonic(3) == F(11, 6)

    def test_unknown_name(self):
        with pytest.raises(RescalingError):
            builtin_family("banzhaf")

    def test_harmonic_increments(self):
        for j in range(1, 30):
            assert harmonic(j) - harmonic(j - 1) == F(1, j)


class TestSelfDuality:
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 9])
    def test_uniform_and_coleman_self_dual(self, uniform, coleman, n):
        assert uniform.row(n).is_self_dual()
        assert coleman.row(n).is_self_dual()

    def test_shapley_not_self_dual(self, shapley_family):
        row = shapley_family.row(3)
        assert not row.is_self_dual()
        assert row.mu[0] != row.mu[3]


class TestCNorm:
    @pytest.mark.parametrize("n", [1, 2, 4, 7, 11])
    def test_uniform_and_coleman_half(self, uniform, coleman, n):
        assert uniform.row(n).c_norm() == F(1, 2)
        assert coleman.row(n).c_norm() == F(1, 2)

    @pytest.mark.parametrize("n", [1, 2, 3, 6, 10])
    def test_shapley_reciprocal_harmonic(self, shapley_family, n):
        assert shapley_family.row(n).c_norm() == 1 / harmonic(n)

    def test_semivalue_row_iff_point_mass_at_n(self):
        rng = random.Random(4)
        for _ in range(40):
            n = rng.randint(1, 8)
            row = random_row(rng, n)
            point_mass = row.mu == tuple(
                F(1) if k == n else F(0) for k in range(n + 1))
            assert row.is_semivalue_row() == point_mass


class TestRecursionChecks:
    def test_uniform_standard_holds(self, uniform):
        report = check_recursion(uniform, "standard_f", 12)
        assert report.holds
        assert uniform.f(3, 1) == uniform.f(4, 1) + uniform.f(4, 2) == F(1, 12)

    def test_coleman_standard_holds(self, coleman):
        assert check_recursion(coleman, "standard_f", 12).holds

    def test_raw_shapley_fails_standard(self, shapley_family):
        report = check_recursion(shapley_family, "standard_f", 6)
        assert not report.holds

    def test_normalized_shapley_holds_standard(self, shapley_family):
        weights = normalized_weights(shapley_family)
        for n in range(1, 12):
            for k in range(1, n + 1):
                assert weights.f(n, k) == F(1, k * comb(n, k))
        assert check_recursion(weights, "standard_f", 12).holds

    def test_uniform_extended_fails_with_recorded_witness(self, uniform):
        report = check_recursion(uniform, "extended_f", 4)
        assert not report.holds
        assert (3, 1) in report.witnesses()
        entry = {(n, k): (lhs, rhs) for n, k, lhs, rhs in report.violations}
        lhs, rhs = entry[(3, 1)]
        assert lhs == F(1, 12)
        assert rhs == F(1, 12) + F(1, 30)

    @pytest.mark.parametrize("form", ["F_form", "mu_form"])
    def test_equivalent_forms_agree_with_standard(self, form, uniform, coleman,
                                                  shapley_family):
        sources = [uniform, coleman, shapley_family,
                   normalized_weights(shapley_family),
                   SizeWeights("half-split", lambda n, k: F(1, (n + 1) * comb(n, k)))]
        for source in sources:
            standard = check_recursion(source, "standard_f", 9)
            other = check_recursion(source, form, 9)
            assert standard.holds == other.holds
            assert standard.witnesses() == other.witnesses()

    def test_unknown_form(self, uniform):
        with pytest.raises(RescalingError):
            check_recursion(uniform, "sideways", 5)

    def test_plain_callable_accepted(self):
        report = check_recursion(lambda n, k: F(1, 2**n) if k <= n else F(0),
                                 "standard_f", 10)
        assert report.holds


class TestRegularity:
    def test_uniform_regular(self, uniform):
        assert uniform.row(5).is_regular()

    def test_point_mass_not_regular(self):
        assert not make_row(4, mu=[0, 0, 0, 0, 1]).is_regular()

    def test_shapley_regular(self, shapley_family):
        assert shapley_family.row(6).is_regular()
