import statistics
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmdboot.diagnostics import information_fractions
from mmdboot.simulate import GOOD_DATA, POOR_DATA, SimConfig, end_to_end_study, generate, replicate_study


@st.composite
def configs(draw):
    max_size = draw(st.integers(1, 150))
    return SimConfig(
        n_populations=draw(st.integers(2, 8)),
        n_traits=draw(st.integers(1, 15)),
        max_size=max_size,
        lambda1=draw(st.integers(1, max_size)),
        lambda2=draw(st.integers(1, max_size)),
        master_seed=draw(st.integers(0, 2**63)),
    )


@settings(max_examples=150, deadline=None)
@given(configs())
def test_generated_counts_invariants(cfg):
    c = generate(cfg)
    assert c.shape == (cfg.n_populations, cfg.n_traits)
    assert np.all((cfg.lambda1 <= c.pop_size) & (c.pop_size <= cfg.max_size))
    floor = np.minimum(cfg.lambda2, c.pop_size)[:, None]
    assert np.all((floor <= c.n) & (c.n <= c.pop_size[:, None]))
    assert np.all((0 <= c.k) & (c.k <= c.n))


def test_deterministic():
    assert generate(GOOD_DATA) == generate(GOOD_DATA)
    assert generate(GOOD_DATA) != generate(replace(GOOD_DATA, master_seed=8))


def test_good_data_regime():
    for seed in range(20):
        c = generate(replace(GOOD_DATA, master_seed=seed))
        assert c.pop_size.min() >= 50 and c.n.min() >= 45
        assert information_fractions(c).min() > 0.5


def test_poor_data_regime():
    low = [information_fractions(generate(replace(POOR_DATA, master_seed=s))).min() for s in range(100)]
    assert min(low) < 0.5
    assert generate(POOR_DATA).n.min() >= 2


def test_saturated_measurement():
    c = generate(SimConfig(max_size=30, lambda1=30, lambda2=30))
    assert np.all(c.pop_size == 30) and np.all(c.n == 30)
    assert np.all(information_fractions(c) == 1.0)


def test_measurement_floor_monotone():
    means = [information_fractions(generate(replace(GOOD_DATA, lambda2=l2))).mean() for l2 in (2, 25, 45, 75, 100)]
    assert means == sorted(means)


@pytest.mark.parametrize("field, value", [("n_populations", 1), ("lambda1", 0), ("lambda1", 101), ("lambda2", 0)])
def test_invalid_config(field, value):
    with pytest.raises(ValueError):
        replace(GOOD_DATA, **{field: value})


def test_two_population_study():
    r = end_to_end_study(replace(GOOD_DATA, n_populations=2), iterations=50)
    assert r.relative_error_pct == 0.0 and r.topology_preserved


def test_study_deterministic_across_workers():
    a = end_to_end_study(GOOD_DATA, iterations=100, workers=1)
    b = end_to_end_study(GOOD_DATA, iterations=100, workers=4)
    assert a == b


@pytest.fixture(scope="module")
def good_study():
    return replicate_study(GOOD_DATA, 50)


@pytest.mark.slow
def test_good_data_median_relative_error(good_study):
    assert statistics.median(r.relative_error_pct for r in good_study) <= 10.0


@pytest.mark.slow
def test_poor_data_has_larger_error_and_worse_topology(good_study):
    poor = replicate_study(POOR_DATA, 20)
    assert statistics.median(r.relative_error_pct for r in poor) > 10.0
    good_rate = np.mean([r.topology_preserved for r in good_study])
    poor_rate = np.mean([r.topology_preserved for r in poor])
    assert good_rate > poor_rate


@pytest.mark.slow
@pytest.mark.xfail(
    strict=True,
    reason="exact UPGMA topology is fragile to near-tied merges; only about 40% of "
    "simulated good-data replicates keep every cluster, although median E stays below 10%",
)
def test_good_data_topology_majority(good_study):
    assert sum(r.topology_preserved for r in good_study) > len(good_study) / 2
