"""Exact solvers: full enumeration and ordering enumeration."""

from fractions import Fraction

import pytest

from netpricing import (
    BMNPP,
    EnumerationTooLarge,
    GenParams,
    TooManyOutlets,
    brute_force,
    evaluate_prices,
    generate,
    ladder_exact,
)
from tests.conftest import two_node_instance


def tiny_params(model, seed, outlets=3, demands=4):
    return GenParams(
        model=model,
        n_outlets=outlets,
        n_demands=demands,
        density=0.7,
        seed=seed,
        grid_min="0",
        grid_max="10",
        grid_step="1",
    )


class TestBruteForce:
    def test_disjoint_oracle(self, tiny_disjoint):
        revenue, prices = brute_force(tiny_disjoint)
        assert revenue == Fraction(1600)
        assert prices == (900, 700)

    def test_connected_oracle(self, tiny_connected):
        revenue, prices = brute_force(tiny_connected)
        assert revenue == Fraction(1400)
        # Several vectors attain 1400; ties keep the lexicographically first.
        assert prices == (700, 700)

    def test_returned_prices_reproduce_revenue(self, tiny_disjoint):
        revenue, prices = brute_force(tiny_disjoint)
        assert evaluate_prices(tiny_disjoint, prices)[0] == revenue

    def test_size_guard(self, tiny_disjoint):
        with pytest.raises(EnumerationTooLarge) as err:
            brute_force(tiny_disjoint, limit=10)
        assert "26" in str(err.value)

    def test_spread_cap_honoured(self):
        inst = two_node_instance([(0, 0), (1, 1)], pi=100)
        revenue, prices = brute_force(inst)
        assert max(prices) - min(prices) <= 100
        assert revenue == Fraction(1500)


class TestLadderExact:
    def test_disjoint_oracle(self, tiny_disjoint):
        revenue, ladder, prices = ladder_exact(tiny_disjoint)
        assert revenue == Fraction(1600)
        assert ladder == (1, 0)
        assert prices == (900, 700)

    def test_outlet_count_guard(self):
        params = GenParams(n_outlets=9, n_demands=3, density=0.5, seed=0)
        with pytest.raises(TooManyOutlets):
            ladder_exact(generate(params))

    def test_agrees_with_brute_force_mnpp(self):
        for seed in range(20):
            inst = generate(tiny_params("mnpp", seed))
            assert ladder_exact(inst)[0] == brute_force(inst)[0]

    def test_dominates_brute_force_bmnpp(self):
        # Under logit demand an ordering can route a tied price to a more
        # profitable outlet than the evaluator's lowest-id rule, so the
        # ordering optimum is an upper bound rather than an exact match.
        for seed in range(10):
            inst = generate(tiny_params(BMNPP, seed))
            lr = ladder_exact(inst)[0]
            br = brute_force(inst)[0]
            assert lr >= br - 1e-9 * max(1.0, abs(br))

    def test_spread_cap_honoured(self):
        inst = two_node_instance([(0, 0), (1, 1)], pi=100)
        revenue, _, prices = ladder_exact(inst)
        assert max(prices) - min(prices) <= 100
        assert revenue == Fraction(1500)
