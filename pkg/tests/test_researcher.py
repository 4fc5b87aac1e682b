"""Researcher payoff, FOC optimizers, cutoffs, and the novelty-output relation."""

import math

import numpy as np
import pytest

from kfrontier.knowledge import make_knowledge
from kfrontier.researcher import (
    EconomyParams,
    cost,
    opt_choice,
    opt_deepen,
    opt_expand,
    opt_rho_given_d,
    payoff,
    researcher_cutoffs,
    substitutes_or_complements,
)
from kfrontier.specfun import ctilde_prime_inv
from kfrontier.valuation import benefit, benefit_cutoffs, sigma2
from oracles import grid_best

INF = math.inf
P1 = EconomyParams(q=1.0, eta=1.0)


class TestPayoffAndCost:
    def test_zero_output_costs_nothing(self):
        assert cost(0.0, 2.0, INF, P1) == 0.0
        assert payoff(0.0, 2.0, INF, P1) == 0.0

    def test_zero_distance(self):
        assert cost(0.7, 0.0, 5.0, P1) == 0.0

    def test_unit_kernel_point(self):
        # ctilde(erf(1)) = 1, so cost is exactly the variance.
        assert cost(math.erf(1.0), 2.0, INF, P1) == pytest.approx(2.0, rel=1e-12)

    def test_costless_certain_expansion(self):
        p0 = EconomyParams(q=1.0, eta=0.0)
        assert payoff(1.0, 3.0, INF, p0) == pytest.approx(1.5)

    def test_payoff_bounded_by_expected_benefit(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            X = float(rng.uniform(1.0, 12.0))
            d = float(rng.uniform(0.0, X / 2.0))
            rho = float(rng.uniform(0.0, 0.999))
            assert payoff(rho, d, X, P1) <= rho * benefit(d, X, 1.0) + 1e-15


class TestOptRhoGivenD:
    def test_short_area_independent_of_d(self):
        X = 3.0
        expected = ctilde_prime_inv(2.0 * X / 6.0)
        for d in (0.3, 0.9, 1.5):
            assert opt_rho_given_d(d, X, P1) == pytest.approx(expected, rel=1e-12)

    def test_sixq_bridge_value(self):
        got = opt_rho_given_d(3.0, 6.0, P1)
        expected = ctilde_prime_inv((3.0 - 2.0 / math.sqrt(3.0)) / 1.5)
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(0.543, abs=1e-3)

    def test_degenerate_distance(self):
        assert opt_rho_given_d(0.0, 4.0, P1) == 0.0

    def test_vanishing_ratio(self):
        assert opt_rho_given_d(1e-9, INF, EconomyParams(q=1.0, eta=1e12)) < 1e-6


class TestOptExpand:
    def test_costless_limit(self):
        ch = opt_expand(EconomyParams(q=1.0, eta=0.0))
        assert (ch.d, ch.rho) == (3.0, 1.0)
        assert ch.payoff == pytest.approx(1.5)

    def test_small_eta_approaches_costless(self):
        ch = opt_expand(EconomyParams(q=1.0, eta=1e-8))
        assert ch.d == pytest.approx(3.0, abs=1e-4)
        assert ch.rho > 0.9999

    def test_matches_grid_oracle(self):
        ch = opt_expand(P1)
        best, d_g, rho_g, dd, dr = grid_best(INF, 1.0, 1.0, nd=800, nrho=800)
        assert ch.payoff >= best - 1e-6
        assert abs(ch.d - d_g) <= dd
        assert abs(ch.rho - rho_g) <= dr

    def test_distance_band(self):
        for eta in np.logspace(-2, 2, 9):
            ch = opt_expand(EconomyParams(q=1.0, eta=float(eta)))
            assert 2.0 < ch.d < 3.0
            assert 0.0 < ch.rho < 1.0
            assert ch.payoff > 0.0

    def test_scale_invariance(self):
        ref = opt_expand(EconomyParams(q=1.0, eta=1.0))
        for q in (0.5, 2.0):
            ch = opt_expand(EconomyParams(q=q, eta=1.0))
            assert ch.d / q == pytest.approx(ref.d, abs=1e-9)
            assert ch.rho == pytest.approx(ref.rho, abs=1e-9)

    def test_first_order_conditions_hold(self):
        ch = opt_expand(P1)
        from kfrontier.specfun import ctilde, ctilde_prime

        assert ctilde_prime(ch.rho) == pytest.approx(1.0 - ch.d / 6.0, rel=1e-9)
        assert ch.rho * (1.0 - ch.d / 3.0) == pytest.approx(ctilde(ch.rho), rel=1e-9)


class TestOptDeepen:
    def test_midpoint_branch_below_switch(self):
        cuts = researcher_cutoffs(P1)
        for X in (3.0, 5.0, cuts.x_tilde - 0.05):
            ch = opt_deepen(X, P1)
            assert ch.d == pytest.approx(X / 2.0)

    def test_interior_beyond_switch(self):
        ch = opt_deepen(10.0, P1)
        assert ch.d < 5.0
        assert ch.d < 4.0
        assert 10.0 - ch.d > 4.0

    def test_interior_constraint_always(self):
        cuts = researcher_cutoffs(P1)
        for X in np.linspace(cuts.x_tilde + 0.01, 14.0, 9):
            ch = opt_deepen(float(X), P1)
            if ch.d < float(X) / 2.0 - 1e-9:
                assert ch.d < 4.0
                assert float(X) - ch.d > 4.0

    @pytest.mark.parametrize("X", [3.0, 5.0, 7.0, 10.0])
    def test_matches_grid_oracle(self, X):
        ch = opt_deepen(X, P1)
        best, d_g, rho_g, dd, dr = grid_best(X, 1.0, 1.0, nd=800, nrho=800)
        assert ch.payoff >= best - 1e-6
        assert abs(ch.d - d_g) <= dd
        assert abs(ch.rho - rho_g) <= dr

    def test_local_optimality_coarse_grid(self):
        for X, eta in ((3.0, 0.25), (7.0, 1.0), (10.0, 4.0)):
            p = EconomyParams(q=1.0, eta=eta)
            ch = opt_deepen(X, p)
            for dd in np.linspace(-0.05, 0.05, 41):
                for dr in np.linspace(-0.02, 0.02, 41):
                    d2 = min(max(ch.d + dd, 0.0), X / 2.0)
                    r2 = min(max(ch.rho + dr, 0.0), 0.999999)
                    assert payoff(r2, d2, X, p) <= ch.payoff + 1e-9

    def test_costless_uses_benefit_maximizer(self):
        from kfrontier.valuation import d0

        p0 = EconomyParams(q=1.0, eta=0.0)
        for X in (5.0, 9.0):
            ch = opt_deepen(X, p0)
            assert ch.rho == 1.0
            assert ch.d == pytest.approx(d0(X, 1.0), abs=1e-9)

    def test_rejects_bad_area(self):
        with pytest.raises(ValueError):
            opt_deepen(INF, P1)


class TestOptChoice:
    def test_single_point_expands(self):
        F = make_knowledge([(0.0, 42.0)])
        ch = opt_choice(F, P1)
        assert ch.kind == "expand"
        assert ch.x == pytest.approx(ch.d)
        exp = opt_expand(P1)
        assert (ch.d, ch.rho) == (exp.d, exp.rho)

    def test_expand_left(self):
        F = make_knowledge([(0.0, 42.0)])
        ch = opt_choice(F, P1, side="left")
        assert ch.x == pytest.approx(-ch.d)

    def test_wide_gap_deepened(self):
        cuts = researcher_cutoffs(P1)
        F = make_knowledge([(0.0, 0.0), (cuts.x_hat + 0.5, 0.0)])
        ch = opt_choice(F, P1)
        assert ch.kind == "deepen"
        assert ch.area_index == 1
        assert ch.x == pytest.approx(ch.d)

    def test_narrow_gaps_expand(self):
        cuts = researcher_cutoffs(P1)
        w = cuts.x_hat - 0.2
        F = make_knowledge([(0.0, 0.0), (w, 0.0), (2 * w, 0.0)])
        ch = opt_choice(F, P1)
        assert ch.kind == "expand"
        assert ch.x == pytest.approx(2 * w + ch.d)

    def test_equal_areas_take_lowest_index(self):
        cuts = researcher_cutoffs(P1)
        w = cuts.x_check  # best possible area length, twice
        F = make_knowledge([(0.0, 0.0), (w, 0.0), (2 * w, 0.0)])
        ch = opt_choice(F, P1)
        assert ch.kind == "deepen"
        assert ch.area_index == 1


class TestResearcherCutoffs:
    def test_output_peak_closed_form(self):
        expected = 8.0 * math.cos(math.pi / 18.0) / math.sqrt(3.0)
        for eta in (0.1, 1.0, 10.0):
            cuts = researcher_cutoffs(EconomyParams(q=1.0, eta=eta))
            assert cuts.x_dot == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(4.5486, abs=1e-4)

    def test_output_peak_matches_grid(self):
        expected = 8.0 * math.cos(math.pi / 18.0) / math.sqrt(3.0)
        for eta in (0.5, 1.0, 2.0):
            p = EconomyParams(q=1.0, eta=eta)
            grid = np.linspace(3.0, 6.0, 601)
            rhos = [opt_rho_given_d(X / 2.0, float(X), p) for X in grid]
            assert grid[int(np.argmax(rhos))] == pytest.approx(expected, abs=0.01)

    def test_ordering(self):
        for eta in (0.25, 1.0, 4.0):
            c = researcher_cutoffs(EconomyParams(q=1.0, eta=eta))
            assert 2.0 < c.x_hat < c.x_dot < c.x_check < c.x_tilde < 8.0

    def test_expand_cutoff_decreasing_in_eta(self):
        vals = [researcher_cutoffs(EconomyParams(q=1.0, eta=e)).x_hat
                for e in (0.5, 1.0, 2.0)]
        assert vals[0] > vals[1] > vals[2]

    def test_expand_cutoff_costless_limit(self):
        c = researcher_cutoffs(EconomyParams(q=1.0, eta=1e-4))
        assert c.x_hat == pytest.approx(benefit_cutoffs(1.0).x_hat0, abs=1e-2)

    def test_expand_cutoff_is_indifference_point(self):
        c = researcher_cutoffs(P1)
        u_deep = opt_deepen(c.x_hat, P1).payoff
        u_exp = opt_expand(P1).payoff
        assert u_deep == pytest.approx(u_exp, abs=1e-8)

    def test_payoff_single_peaked(self):
        grid = np.linspace(2.0, 12.0, 200)
        pays = [opt_deepen(float(X), P1).payoff for X in grid]
        peak = int(np.argmax(pays))
        assert all(b > a for a, b in zip(pays[:peak], pays[1:peak]))
        assert all(b < a for a, b in zip(pays[peak:], pays[peak + 1:]))
        cuts = researcher_cutoffs(P1)
        assert grid[peak] == pytest.approx(cuts.x_check, abs=grid[1] - grid[0])


class TestSubstitutesOrComplements:
    def test_short_area_independent(self):
        assert substitutes_or_complements(1.0, 3.0, P1) == "independent"

    def test_medium_area_complements(self):
        assert substitutes_or_complements(2.0, 5.0, P1) == "complements"
        assert substitutes_or_complements(0.3, 5.0, P1) == "complements"

    def test_expanding_substitutes(self):
        for d in (0.5, 3.0, 7.0):
            assert substitutes_or_complements(d, INF, P1) == "substitutes"

    def test_long_area_substitutes(self):
        assert substitutes_or_complements(2.0, 9.0, P1) == "substitutes"

    def test_intermediate_area_split(self):
        X = 7.0
        assert substitutes_or_complements(1.0, X, P1) == "substitutes"
        assert substitutes_or_complements(3.2, X, P1) == "complements"

    def test_classification_matches_ratio_slope(self):
        """Finite-difference sign of benefit/variance in d agrees everywhere."""
        h = 1e-5
        rng = np.random.default_rng(77)
        for _ in range(200):
            X = float(rng.uniform(0.5, 12.0))
            d = float(rng.uniform(2 * h, X / 2.0 - 2 * h))
            ratio = lambda dd: benefit(dd, X, 1.0) / sigma2(dd, X)  # noqa: E731
            slope = (ratio(d + h) - ratio(d - h)) / (2 * h)
            label = substitutes_or_complements(d, X, P1)
            if abs(slope) < 1e-6:
                assert label == "independent"
            elif slope > 0:
                assert label == "complements"
            else:
                assert label == "substitutes"
