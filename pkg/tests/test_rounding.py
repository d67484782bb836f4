from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import kstest

from dedk import instances
from dedk.errors import BadParams, InfeasibleInput, NotBipartite, NotStructured
from dedk.graph import build_instance, is_feasible, min_weight_k_path
from dedk.lp import solve_lp
from dedk.rounding import (
    Discrete,
    bipartite_correlated,
    cut_rule,
    derandomize,
    discrete,
    expected_cost,
    independent,
    monte_carlo_round,
    per_edge_cut_probability,
    sample_labels,
    structured_level,
    structured_round,
)

from conftest import small_dags


def random_feasible_x(inst, rng):
    """Random weights scaled so the lightest k-path weighs exactly 1."""
    w = rng.uniform(0.05, 1.0, inst.m)
    p = min_weight_k_path(inst, w)
    return np.zeros(inst.m) if p is None else np.minimum(w / p.weight, 1.0)


def all_dists(inst):
    out = [independent("uniform"), independent("polyD"), discrete(1), discrete(3)]
    try:
        out.append(bipartite_correlated(inst))
    except NotBipartite:
        pass
    return out


def test_cut_rule_example():
    inst = build_instance(3, [(0, 1, 1.0), (1, 2, 1.0)], 2)
    sol = cut_rule(inst, np.full(2, 1 / 3), np.array([0.9, 0.5, 0.7]))
    assert sol.deleted == {0} and sol.feasible and is_feasible(inst, sol.deleted)


def test_zero_edge_kept_and_heavy_edge_cut():
    inst = build_instance(3, [(0, 1, 1.0), (1, 2, 1.0)], 2)
    sol = cut_rule(inst, np.array([0.0, 1.0]), np.array([0.0, 1.0, 0.0]))
    assert 0 not in sol.deleted
    k = 4
    p = build_instance(5, [(i, i + 1, 1.0) for i in range(4)], k)
    x = np.full(4, 2 / (k + 1))
    for labels in np.random.default_rng(0).random((200, 5)):
        assert cut_rule(p, x, labels).deleted == {0, 1, 2, 3}
    assert cut_rule(p, x, np.array([0.0, 1.0, 0.0, 1.0, 0.0])).deleted == {0, 1, 2, 3}


def test_infeasible_x_detected():
    inst = instances.path(2)
    with pytest.raises(InfeasibleInput):
        cut_rule(inst, np.zeros(2), np.array([0.0, 0.5, 1.0]))


def test_sampler_examples():
    inst = instances.bipartite(3, 3, 1.0, seed=0, k=1)
    rng = np.random.default_rng(1)
    assert set(np.unique(discrete(1).sample(inst, rng, 100))) <= {0.0, 1.0}
    labels = independent("uniform").sample(inst, rng, 10**5)
    assert np.all(np.abs(labels.mean(axis=0) - 0.5) < 0.01)
    assert np.all((labels >= 0) & (labels <= 1))


def test_bipartite_differences_are_uniform():
    inst = instances.bipartite(2, 3, 1.0, seed=4, k=1, orient="mixed")
    dist = bipartite_correlated(inst)
    labels = dist.sample(inst, np.random.default_rng(2), 10**6)
    for e in range(inst.m):
        z = labels[:, inst.heads[e]] - labels[:, inst.tails[e]]
        assert kstest(z, "uniform", args=(-1, 2)).statistic < 0.002


def test_bipartite_requires_two_coloring():
    odd = build_instance(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], 1)
    with pytest.raises(NotBipartite):
        bipartite_correlated(odd)
    inst = instances.path(3)
    with pytest.raises(NotBipartite):
        bipartite_correlated(inst, parts=((0, 1), (2, 3)))


def test_per_edge_probabilities():
    k = 3
    assert per_edge_cut_probability(independent("uniform"), 1 / (k + 1), k) == pytest.approx(0.5, abs=1e-15)
    dist = bipartite_correlated(instances.path(2))
    for i in range(21):
        xe = Fr(i, 20) * Fr(2, k + 1)
        assert per_edge_cut_probability(dist, xe, k) == Fr(k + 1) * xe / 2
    for r in range(1, 51):
        lo = (1 + Fr(1, r + 1)) / (k + 1)
        assert per_edge_cut_probability(Discrete(r), lo, k) == Fr(r + 2, 2 * (r + 1))


def test_per_edge_probability_matches_frequency():
    k = 3
    inst = build_instance(2, [(0, 1, 1.0)] * 5, 1)
    x = np.array([0.05, 0.2, 0.25, 0.35, 0.45])
    rng = np.random.default_rng(5)
    for dist in (independent("uniform"), independent("polyD"), Discrete(4)):
        labels = dist.sample(inst, rng, 4 * 10**5)
        rise = labels[:, 1] - labels[:, 0]
        for xe in x:
            freq = np.mean(rise <= (k + 1) * xe - 1)
            assert abs(freq - float(per_edge_cut_probability(dist, xe, k))) < 0.004


def test_structured_detection():
    k = 3
    assert structured_level([0, 1.4 / (k + 1)], k) == 2
    assert per_edge_cut_probability(Discrete(2), Fr(14, 10 * (k + 1)), k) == Fr(2, 3)
    # 1.5/(k+1) opens the r = 1 band, so it rounds with r = 1 and probability 3/4
    assert structured_level([0, 1.5 / (k + 1)], k) == 1
    assert per_edge_cut_probability(Discrete(1), Fr(3, 2 * (k + 1)), k) == Fr(3, 4)
    assert structured_level([0, 2 / (k + 1)], k) == 1
    assert structured_level([(1 + 1 / 8) / (k + 1)], k) == 7
    with pytest.raises(NotStructured):
        structured_level([1.2 / (k + 1), 1.6 / (k + 1)], k)
    with pytest.raises(NotStructured):
        structured_level([0.5 / (k + 1)], k)


def test_structured_round_precuts_heavy_edges():
    k = 3
    inst = instances.path(k)
    sol, r = structured_round(inst, np.full(3, 2 / (k + 1)), rng=0)
    assert r == 1 and sol.deleted == {0, 1, 2}


def test_structured_expected_cost_half():
    k = 3
    inst = instances.path(k)
    x = np.full(3, 1 / 3)  # threshold 1/3 -> r = 2
    r = structured_level(x, k)
    assert r == 2
    mc = monte_carlo_round(inst, x, Discrete(r), 20000, 0)
    assert mc.mean_cost <= 0.5 * (k + 1) * x.sum() * (1 + 3 * mc.std_error / mc.mean_cost)


def test_ratio_examples_on_random_feasible_points():
    rng = np.random.default_rng(11)
    cases = [(instances.bipartite(5, 5, 0.6, seed=s, k=3, orient="mixed")) for s in range(4)]
    cases += small_dags(6, seed=3)
    for inst in cases:
        x = random_feasible_x(inst, rng)
        if x.sum() == 0:
            continue
        bounds = [(independent("uniform"), 0.586), (independent("polyD"), 0.549)]
        if inst.bipartite_parts is not None:
            bounds.append((bipartite_correlated(inst), 0.5))
        for dist, alpha in bounds:
            mc = monte_carlo_round(inst, x, dist, 4000, rng)
            se_ratio = mc.std_error / ((inst.k + 1) * float(inst.costs @ x))
            assert mc.empirical_ratio <= alpha + 3 * se_ratio
            exact = expected_cost(inst, x, dist) / ((inst.k + 1) * float(inst.costs @ x))
            assert exact <= alpha + 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_rounding_always_feasible(seed):
    rng = np.random.default_rng(seed)
    inst = (small_dags(1, seed=seed)[0] if seed % 2 else
            instances.bipartite(4, 5, 0.6, seed=seed, k=int(rng.integers(1, 4)), orient="mixed"))
    for x in (solve_lp(inst).x, random_feasible_x(inst, rng)):
        for dist in all_dists(inst):
            for labels in dist.sample(inst, rng, 100):
                assert is_feasible(inst, cut_rule(inst, x, labels).deleted)


def test_monte_carlo_matches_expectation_and_is_deterministic():
    inst = instances.random_dag(10, 0.5, seed=3, k=2)
    x = random_feasible_x(inst, np.random.default_rng(0))
    dist = independent("polyD")
    a = monte_carlo_round(inst, x, dist, 20000, 7)
    b = monte_carlo_round(inst, x, dist, 20000, 7)
    assert a.mean_cost == b.mean_cost and a.best.deleted == b.best.deleted
    assert abs(a.mean_cost - expected_cost(inst, x, dist)) < 4 * a.std_error
    assert is_feasible(inst, a.best.deleted)
    assert sample_labels(dist, inst, 3).tolist() == sample_labels(dist, inst, 3).tolist()


def test_empirical_ratio_nan_without_lp_cost():
    inst = build_instance(4, [(0, 1, 1), (2, 3, 1)], 2)
    mc = monte_carlo_round(inst, np.zeros(2), independent("uniform"), 10, 0)
    assert np.isnan(mc.empirical_ratio) and mc.best.cost == 0


def test_trials_must_be_positive():
    with pytest.raises(BadParams):
        monte_carlo_round(instances.path(1), np.ones(1), independent("uniform"), 0)


def test_derandomize_examples():
    one = build_instance(2, [(0, 1, 1.0)], 1)
    sol = derandomize(one, np.zeros(1), independent("uniform"), grid_size=2)
    assert sol.cost == 0 and not sol.feasible
    k = 4
    p = instances.path(k)
    sol = derandomize(p, np.full(k, 1 / k), independent("polyD"), 64)
    assert sol.feasible and len(sol.deleted) >= 1
    with pytest.raises(BadParams):
        derandomize(p, np.full(k, 1 / k), independent("uniform"), 1)
    with pytest.raises(BadParams):
        derandomize(p, np.full(k, 1 / k), Discrete(2), 8)


def test_derandomize_beats_average():
    rng = np.random.default_rng(21)
    good = total = 0
    for inst in small_dags(20, seed=6):
        x = random_feasible_x(inst, rng)
        if x.sum() == 0:
            continue
        for name in ("uniform", "polyD"):
            dist = independent(name)
            sol = derandomize(inst, x, dist, 64)
            assert sol.feasible
            mc = monte_carlo_round(inst, x, dist, 10**4, rng)
            total += 1
            good += sol.cost <= mc.mean_cost + 2 * mc.std_error + 1e-9
    assert good >= 0.95 * total
