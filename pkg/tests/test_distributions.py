import csv
import math
from fractions import Fraction as Fr

import numpy as np
import pytest

from dedk.distributions import (
    IndepLabelDensity,
    builtin_densities,
    difference_cdf,
    discrete_r,
    grid_max_ratio,
    sup_ratio,
    uniform_pm1_cdf,
    write_ratio_csv,
)
from dedk.errors import BadParams
from dedk.piecewise import PiecewisePoly


@pytest.fixture(scope="module")
def cdfs():
    return {name: difference_cdf(d) for name, d in builtin_densities().items()}


def polyd_oracle_sample(rng, size):
    """Mixture sampler for 2/3 + (23/3)(1-2x)^22: uniform w.p. 2/3, else |1-2X| = V^(1/23)."""
    mix = rng.random(size) < 2 / 3
    s = rng.random(size) ** (1 / 23) * np.where(rng.random(size) < 0.5, -1.0, 1.0)
    return np.where(mix, rng.random(size), (1 - s) / 2)


def test_uniform_difference_cdf_pieces(cdfs):
    F = cdfs["uniform"]
    assert F.breakpoints == (-1, 0, 1)
    assert F.pieces[0] == (Fr(1, 2), Fr(1), Fr(1, 2))
    assert F.pieces[1] == (Fr(1, 2), Fr(1), -Fr(1, 2))


def test_polyd_values(cdfs):
    d = builtin_densities()["polyD"]
    assert d.density.exact(0) == Fr(25, 3)
    assert d.density.integral() == 1
    F = cdfs["polyD"]
    assert F.exact(-1) == 0 and F.exact(0) == Fr(1, 2) and F.exact(1) == 1


def test_symmetry_and_monotonicity(cdfs):
    t = np.linspace(-1, 1, 10**6 + 1)
    for F in cdfs.values():
        for q in (Fr(1, 3), Fr(2, 7), Fr(9, 10)):
            assert F.exact(-q) == 1 - F.exact(q)
        vals = F(t)
        assert np.max(np.abs(vals + vals[::-1] - 1)) <= 1e-12
        assert np.all(np.diff(vals) >= -1e-15)
        assert vals[0] >= 0 and vals[-1] <= 1


def test_polyd_against_sampling_oracle(cdfs):
    rng = np.random.default_rng(2024)
    edges = np.linspace(-1, 1, 401)
    counts = np.zeros(len(edges) - 1)
    total = 10**7
    for _ in range(10):
        z = polyd_oracle_sample(rng, total // 10) - polyd_oracle_sample(rng, total // 10)
        counts += np.histogram(z, bins=edges)[0]
    empirical = np.concatenate([[0.0], np.cumsum(counts) / total])
    assert np.max(np.abs(empirical - cdfs["polyD"](edges))) < 3e-3


def test_sup_ratio_uniform(cdfs):
    t_star, alpha = sup_ratio(cdfs["uniform"])
    assert abs(alpha - (2 - math.sqrt(2))) < 1e-12
    assert abs(t_star - (math.sqrt(2) - 1)) < 1e-12


def test_sup_ratio_polyd(cdfs):
    res = sup_ratio(cdfs["polyD"])
    assert 0.5481 < res.alpha < 0.5482 and 0.548 < res.alpha < 0.549
    assert abs(res.t_star - 0.2666) < 0.001


def test_sup_ratio_flat_ratio_takes_first_point():
    res = sup_ratio(uniform_pm1_cdf())
    assert res.t_star == -1 and res.alpha == 0.5


def test_grid_agrees_with_exact(cdfs):
    for F in cdfs.values():
        _, g = grid_max_ratio(F)
        assert abs(g - sup_ratio(F).alpha) < 1e-6


def test_discrete_difference_distribution():
    d = discrete_r(1)
    assert d.difference_cdf_at(-1) == Fr(1, 4)
    assert d.difference_cdf_at(0) == Fr(3, 4)
    assert d.difference_cdf_at(1) == 1
    for r in range(1, 51):
        assert discrete_r(r).difference_cdf_at(0) == 1 - Fr(r, 2 * (r + 1))


def test_quantile_inverts_cdf():
    d = builtin_densities()["polyD"]
    u = np.random.default_rng(0).random(10**5)
    x = d.quantile(u)
    assert np.max(np.abs(d.cdf(x) - u)) < 1e-12
    assert d.quantile(0.5) == pytest.approx(0.5, abs=1e-12)


def test_density_validation():
    with pytest.raises(BadParams):
        IndepLabelDensity("half", PiecewisePoly((0, 1), ((Fr(1, 2),),)))
    with pytest.raises(BadParams):
        # integrates to 1 but dips below zero
        IndepLabelDensity("dip", PiecewisePoly((0, 1), ((Fr(-1, 2), 3),)))


def test_ratio_csv(tmp_path, cdfs):
    out = tmp_path / "ratio.csv"
    write_ratio_csv(cdfs["uniform"], out, points=101)
    rows = list(csv.reader(open(out)))
    assert rows[0] == ["t", "F(t)", "F(t)/(t+1)"] and len(rows) == 102
    assert float(rows[1][2]) == 0.0  # F(t)/(t+1) = (t+1)/2 near -1
    assert float(rows[51][2]) == pytest.approx(0.5)
