import numpy as np
import pytest
import scipy.sparse as sp

from reward_placement import (
    Instance,
    KnapsackInput,
    MobilityModel,
    ParameterError,
    ResourceLimitError,
    SaturateParams,
    SolveReport,
    all_greedy,
    brute_force,
    bws,
    dp_rrp,
    gen_hitting_set_adversarial,
    knapsack_dp,
    bicriteria_beta,
    myopic,
    objective,
    optimal_per_model,
    psi_saturate,
    reward_profile,
    solve,
)
from reward_placement.solvers import ALGORITHMS, REPORT_COLUMNS, dp_rrp_table

from conftest import chain_ab, enumerate_subsets, prepared, random_instance, random_model

HEURISTICS = (all_greedy, myopic, bws, dp_rrp)


def two_city():
    """Two models over five states. Model 0 sends everyone to state 1,
    model 1 to state 3; state 2 collects a share of the traffic in both."""
    def model(target):
        T = np.zeros((5, 5))
        T[0, target] = 0.6
        T[0, 2] = 0.4
        T[1:, :] = np.eye(5)[1:]
        return MobilityModel(np.eye(5)[0], sp.csr_matrix(T), np.ones((5, 2)))

    return Instance((model(1), model(3)), np.ones(5, dtype=np.int64), 1)


def split_pair():
    """Model i moves everyone from state 2 to state i; budget 1."""
    def model(i):
        T = np.eye(3)
        T[2] = np.eye(3)[i]
        return MobilityModel([0.0, 0.0, 1.0], sp.csr_matrix(T), np.ones((3, 1)))

    return Instance((model(0), model(1)), np.ones(3, dtype=np.int64), 1)


class TestOptimalPerModel:
    def test_chain(self):
        inst = Instance((chain_ab(2),), [1, 1], 1)
        prof, placements = optimal_per_model(inst, reward_profile(inst.models))
        assert placements[0].members == (1,)
        assert prof.denominators[0] == 2.0

    def test_exact_dominates_greedy(self, rng):
        for _ in range(10):
            inst = random_instance(rng, 10, 3)
            exact = prepared(inst, "exact-dp").denominators
            greedy = prepared(inst, "greedy").denominators
            assert (exact >= greedy - 1e-12).all()

    def test_matches_single_model_enumeration(self, rng):
        inst = random_instance(rng, 10, 3)
        prof = prepared(inst)
        for i in range(3):
            best = max(
                sum(prof.values[i, s] for s in sub)
                for sub in enumerate_subsets(10)
                if sum(inst.costs[s] for s in sub) <= inst.budget
            )
            assert prof.denominators[i] == pytest.approx(best, abs=1e-12)

    def test_unknown_oracle(self, rng):
        inst = random_instance(rng, 4, 1)
        with pytest.raises(ParameterError):
            optimal_per_model(inst, reward_profile(inst.models), "nope")


class TestObjective:
    def test_own_optimum_scores_one(self, rng):
        inst = random_instance(rng, 8, 1)
        prof = prepared(inst)
        assert objective(inst, prof, prof.optimal[0])[0] == 1.0

    def test_empty_scores_zero(self, rng):
        inst = random_instance(rng, 8, 2)
        assert objective(inst, prepared(inst), [])[0] == 0.0

    def test_shared_state_beats_single_model_optimum(self):
        inst = two_city()
        prof = prepared(inst)
        assert prof.optimal == ((1,), (3,))
        scores = {s: objective(inst, prof, [s]) for s in range(5)}
        own, ratios = scores[1]
        assert ratios[0] == 1.0 and ratios[1] < 1.0
        assert max(scores, key=lambda s: scores[s][0]) == 2
        assert scores[2][0] > own
        assert brute_force(inst, prof).placement.members == (2,)

    def test_requires_denominators(self, rng):
        inst = random_instance(rng, 4, 1)
        with pytest.raises(ParameterError):
            objective(inst, reward_profile(inst.models), [0])

    def test_degenerate_model_excluded(self):
        # model 1 keeps everyone on state 0, which is too expensive
        T = np.array([[1.0, 0.0], [0.0, 1.0]])
        dead = MobilityModel([1.0, 0.0], T, np.ones((2, 1)))
        inst = Instance((chain_ab(1), dead), [5, 1], 1)
        prof = prepared(inst)
        assert prof.degenerate.tolist() == [False, True]
        score, ratios = objective(inst, prof, [1])
        assert score == 1.0 and ratios[1] == 1.0
        rep = all_greedy(inst, prof)
        assert "degenerate-models" in rep.flags
        for alg in ALGORITHMS:
            assert solve(inst, prof, alg).score == 1.0


class TestSaturate:
    def test_single_model_uniform_costs(self, rng):
        for _ in range(10):
            inst = random_instance(rng, 10, 1, max_cost=1)
            rep = psi_saturate(inst, prepared(inst), SaturateParams(epsilon=0.01))
            assert rep.score >= 0.99
            assert rep.budget_used <= inst.budget

    def test_bicriteria_two_models(self, rng):
        eps = 0.01
        beta = bicriteria_beta(2, eps)
        for _ in range(10):
            inst = random_instance(rng, 8, 2)
            prof = prepared(inst)
            rep = psi_saturate(inst, prof, SaturateParams(eps, beta))
            assert rep.score >= brute_force(inst, prof).score - eps
            assert rep.budget_used <= beta * inst.budget

    def test_beta_one_respects_budget(self, rng):
        for _ in range(20):
            inst = random_instance(rng, 10, 3)
            assert psi_saturate(inst, prepared(inst)).budget_used <= inst.budget

    def test_unaffordable_saturation_flags(self):
        # each model needs its own state, the budget buys only one
        inst = split_pair()
        rep = psi_saturate(inst, prepared(inst))
        assert rep.placement.members == () and rep.score == 0.0
        assert "no-feasible-saturation" in rep.flags
        assert brute_force(inst, prepared(inst)).score == 0.0

    def test_greedy_oracle_name(self, rng):
        inst = random_instance(rng, 6, 2)
        rep = solve(inst, reward_profile(inst.models), "greedy-saturate")
        assert rep.algorithm == "greedy-saturate"

    def test_bicriteria_beta_value(self):
        assert bicriteria_beta(2, 0.01) == pytest.approx(1 + np.log(600))

    def test_params_validation(self):
        with pytest.raises(ParameterError):
            SaturateParams(epsilon=0.0)
        with pytest.raises(ParameterError):
            SaturateParams(beta=0.5)
        with pytest.raises(ParameterError):
            SaturateParams(inner_oracle="magic")


class TestHeuristics:
    def test_all_greedy_identical_models(self, rng):
        m = random_model(rng, 8, 3)
        inst = Instance((m, m), rng.integers(1, 4, size=8), 5)
        assert all_greedy(inst, prepared(inst)).score == 1.0

    def test_myopic_first_pick(self, rng):
        inst = random_instance(rng, 10, 3)
        prof = prepared(inst)
        keys = (prof.values / prof.denominators[:, None]).min(axis=0) / inst.costs
        affordable = inst.costs <= inst.budget
        expected = int(np.argmax(np.where(affordable, keys, -np.inf)))
        solo = Instance(inst.models, inst.costs, int(inst.costs[expected]))
        # with the budget equal to its cost only the first pick fits
        assert myopic(solo, prof).placement.members == (expected,)

    def test_myopic_single_model_uniform_costs_optimal(self, rng):
        for _ in range(10):
            inst = random_instance(rng, 10, 1, max_cost=1)
            assert myopic(inst, prepared(inst)).score == pytest.approx(1.0, abs=1e-12)

    def test_bws_matches_myopic_on_one_model(self, rng):
        for _ in range(10):
            inst = random_instance(rng, 12, 1)
            prof = prepared(inst)
            assert bws(inst, prof).placement.members == myopic(inst, prof).placement.members

    def test_bws_follows_the_smaller_model(self, rng):
        m = random_model(rng, 8, 3)
        inst = Instance((m, m), np.ones(8, dtype=np.int64), 1)
        prof = prepared(inst)
        v = prof.values[0]
        scaled = type(prof)(np.vstack([v, 10 * v]))
        rep = bws(inst, scaled)
        assert rep.placement.members == (int(np.argmax(v)),)

    def test_dp_rrp_single_model_is_knapsack(self, rng):
        for _ in range(10):
            inst = random_instance(rng, 10, 1)
            prof = prepared(inst)
            p, _ = knapsack_dp(KnapsackInput(prof.normalized()[0], inst.costs, inst.budget))
            assert dp_rrp(inst, prof).placement.members == p.members

    def test_dp_rrp_suite_against_brute_force(self, rng):
        for _ in range(10):
            inst = random_instance(rng, 10, 3, budget=12)
            prof = prepared(inst)
            assert dp_rrp(inst, prof).score <= brute_force(inst, prof).score + 1e-12


class TestLazyEquivalence:
    @pytest.mark.parametrize("seed", range(15))
    def test_same_placements(self, seed):
        rng = np.random.default_rng(900 + seed)
        inst = random_instance(rng, 30, 4, max_cost=5)
        prof = prepared(inst)
        for fn in (myopic, bws):
            lazy = fn(inst, prof, lazy=True, verify_lazy=True)
            eager = fn(inst, prof, lazy=False)
            assert lazy.placement.members == eager.placement.members
            assert "lazy-mismatch" not in lazy.flags

    def test_bws_lazy_large_block_boundary(self):
        rng = np.random.default_rng(5)
        inst = random_instance(rng, 600, 3, K=2, max_cost=3, density=0.02)
        prof = prepared(inst)
        assert bws(inst, prof, lazy=True).placement.members == bws(inst, prof, lazy=False).placement.members


class TestDpTable:
    def test_boundary_zeros(self, rng):
        g = rng.random((3, 6))
        table = dp_rrp_table(g, [1, 2, 1, 3, 2, 1], 5, keep_entries=True)
        assert table.entries.shape == (7, 6, 3)
        assert (table.entries[0] == 0).all()
        assert (table.entries[:, 0] == 0).all()
        assert not table.take[:, 0].any()

    def test_last_row_matches_entries(self, rng):
        g = rng.random((2, 5))
        table = dp_rrp_table(g, [1, 1, 2, 2, 1], 4, keep_entries=True)
        np.testing.assert_array_equal(table.entries[-1], table.last_row.T)

    def test_tie_keeps_not_choosing(self):
        table = dp_rrp_table(np.array([[0.0, 0.0]]), [1, 1], 2)
        assert table.members == ()

    def test_memory_guard(self, rng):
        inst = random_instance(rng, 10, 3, budget=40)
        with pytest.raises(ResourceLimitError):
            dp_rrp(inst, prepared(inst), max_cells=100)
        with pytest.raises(ResourceLimitError):
            dp_rrp_table(np.ones((3, 10)), np.ones(10), 40, max_cells=100)


class TestBruteForce:
    def test_zero_budget(self, rng):
        # nothing is affordable, so every model is degenerate and scores 1
        inst = random_instance(rng, 6, 2, budget=0)
        rep = brute_force(inst, prepared(inst))
        assert rep.placement.members == () and rep.score == 1.0
        assert "degenerate-models" in rep.flags

    def test_empty_placement_scores_zero(self):
        inst = split_pair()
        rep = brute_force(inst, prepared(inst))
        assert rep.placement.members == () and rep.score == 0.0

    def test_single_model_matches_knapsack(self, rng):
        for _ in range(5):
            inst = random_instance(rng, 10, 1)
            prof = prepared(inst)
            _, v = knapsack_dp(KnapsackInput(prof.normalized()[0], inst.costs, inst.budget))
            assert brute_force(inst, prof).score == pytest.approx(v, abs=1e-12)

    def test_dominates_heuristics(self, rng):
        for _ in range(15):
            inst = random_instance(rng, 12, 3)
            prof = prepared(inst)
            opt = brute_force(inst, prof).score
            for fn in HEURISTICS:
                assert fn(inst, prof).score <= opt + 1e-12
            assert psi_saturate(inst, prof).score <= opt + 1e-12

    def test_cap(self, rng):
        inst = random_instance(rng, 21, 1)
        with pytest.raises(ResourceLimitError):
            brute_force(inst, reward_profile(inst.models))


class TestAdversarial:
    @pytest.mark.parametrize("collection", [
        [["a", "b"], ["c", "d"], ["e", "f"]],
        [["a", "b"], ["c", "d", "e", "f"], ["g"]],
    ])
    def test_heuristics_fail_brute_force_succeeds(self, collection):
        inst = gen_hitting_set_adversarial(collection, 3)
        prof = prepared(inst)
        for fn in (all_greedy, myopic, bws, dp_rrp):
            assert fn(inst, prof).score == 0.0
        right = sum(len(b) for b in collection)
        assert brute_force(inst, prof).score >= 1.0 / right
        eps = 0.01
        rep = psi_saturate(inst, prof, SaturateParams(eps, bicriteria_beta(inst.num_settings, eps)))
        assert rep.score > 0.0


class TestReports:
    def test_invariants(self, rng):
        inst = random_instance(rng, 10, 3)
        prof = prepared(inst)
        for alg in ALGORITHMS:
            rep = solve(inst, prof, alg)
            assert rep.score == rep.per_model_ratio.min()
            assert rep.budget_used == sum(int(inst.costs[s]) for s in rep.placement.members)
            assert rep.budget_used <= inst.budget
            np.testing.assert_allclose(rep.regret, 1 - rep.per_model_ratio)

    def test_row_round_trip(self, rng):
        inst = random_instance(rng, 8, 2)
        rep = solve(inst, prepared(inst), "psi-saturate", epsilon=0.05, beta=2.0)
        row = rep.as_row(inst)
        assert tuple(row) == REPORT_COLUMNS
        back = SolveReport.from_row({k: str(v) for k, v in row.items()})
        assert back.score == rep.score and back.budget_used == rep.budget_used
        assert back.beta == 2.0 and back.epsilon == 0.05 and back.algorithm == "psi-saturate"

    def test_deterministic(self, rng):
        inst = random_instance(rng, 12, 3)
        prof = prepared(inst)
        for alg in ALGORITHMS:
            assert solve(inst, prof, alg).placement.members == solve(inst, prof, alg).placement.members

    def test_unknown_algorithm(self, rng):
        inst = random_instance(rng, 4, 1)
        with pytest.raises(ParameterError):
            solve(inst, prepared(inst), "simulated-annealing")
