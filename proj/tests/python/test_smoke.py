import math
import textwrap

import numpy as np
import pytest

import corebandit as cb


def test_pool_is_centered_symmetric():
    rewards = [0.2, 0.9, 0.4, 1.3]
    pool = cb.build_pool(rewards, 0.6)
    assert len(pool) == 2 * len(rewards)
    assert abs(sum(pool)) < 1e-12
    assert sorted(pool) == pytest.approx(sorted(-v for v in pool))
    mu = np.mean(rewards)
    expected = 0.36 * np.mean((np.array(rewards) - mu) ** 2)
    assert cb.pool_variance(rewards, 0.6) == pytest.approx(expected, rel=1e-12)


def test_empty_history_rejected():
    with pytest.raises(ValueError):
        cb.build_pool([], 1.0)


def test_init_length_formula():
    n, z = 1000, 0.6
    expected = math.ceil(4 * math.log(n) / (z - 1 - math.log(z)) + 1)
    assert cb.init_length(n, z, 1) == expected
    assert cb.init_length(n, z, 10**6) == 10**6


def test_generation_is_seeded():
    assert cb.generate_mab(10, "gaussian", seed=4) == cb.generate_mab(10, "gaussian", seed=4)
    means = cb.generate_mab(10, seed=5)
    assert all(0.25 <= m <= 0.75 for m in means)
    x, theta, mu = cb.generate_linear(50, 10, seed=2)
    assert x.shape == (50, 10)
    assert np.allclose(x @ theta, mu)
    assert np.linalg.matrix_rank(x[-10:]) == 10


def test_cascade_clicks():
    assert cb.cascade_expected_clicks([0.5, 0.5, 0.1], [0, 1]) == pytest.approx(0.75)


def test_klucb_index_bounds():
    idx = cb.klucb_index(3, 10, 100)
    assert 0.3 <= idx <= 1.0
    assert cb.klucb_index(0, 0, 5) == 1.0


def test_core_agent_protocol():
    agent = cb.CoreAgent(4, horizon=200, seed=3)
    arms = []
    for t in range(1, 201):
        arm = agent.select(t)
        arms.append(arm)
        agent.observe(float(arm == 2))
    assert arms[:4] == [0, 1, 2, 3]
    assert agent.rounds_played == 200
    with pytest.raises(cb.ProtocolError):
        agent.observe(1.0)


def test_lincore_agent_runs():
    x, _, mu = cb.generate_linear(8, 3, seed=1)
    agent = cb.LinCoreAgent(x, horizon=100, seed=1)
    rng = np.random.default_rng(0)
    for t in range(1, 101):
        arm = agent.select(t)
        agent.observe(mu[arm] + 0.1 * rng.standard_normal())
    assert agent.rounds_played == 100


def test_run_experiment(tmp_path):
    cfg = tmp_path / "exp.yaml"
    cfg.write_text(textwrap.dedent(f"""\
        experiment: mab
        env: {{family: bernoulli, K: 3}}
        agents:
          - kind: core
          - kind: ucb1
        n: 300
        instances: 2
        runs: 2
        seed: 9
        stride: 100
        out_dir: {tmp_path / 'out'}
        """))
    res = cb.run_experiment(str(cfg), workers=1, write=True)
    assert {r["agent"] for r in res["aggregate"]} == {"CORe(alpha=0.6,z=0.6)", "UCB1"}
    assert all(len(v) == 4 for v in res["final_regret"].values())
    assert (tmp_path / "out" / "aggregate.csv").exists()
    again = cb.run_experiment(str(cfg), workers=2)
    assert again["final_regret"] == res["final_regret"]


def test_bad_config_reports_field(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("experiment: mab\nagents: [{kind: core, z: 1.5}]\n")
    with pytest.raises(ValueError, match="z"):
        cb.run_experiment(str(cfg))


def test_posterior_check():
    rep = cb.check_posterior_equivalence(0.5, 0.5, [1.0, 0.0, 1.0], 20000, 1)
    assert rep["passed"]
