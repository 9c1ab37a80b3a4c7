#include <cmath>
#include <limits>

#include "corebandit/agents.hpp"
#include "corebandit/envs.hpp"
#include "corebandit/errors.hpp"
#include "doctest.h"

using namespace corebandit;

TEST_CASE("init_length") {
  // Oracle: ceil(4 ln n / (z - 1 - ln z) + 1), evaluated here independently.
  auto oracle = [](double n, double z) { return std::ceil(4 * std::log(n) / (z - 1 - std::log(z)) + 1); };
  CHECK(init_length(10000, 0.6, 10) == 334);
  CHECK(oracle(10000, 0.6) == 334);
  CHECK(init_length(100, 0.5, 200) == 200);
  CHECK(init_length(100, 0.5, 2) == 97);
  for (double z : {0.1, 0.3, 0.6, 0.9}) {
    CHECK(init_length(5000, z, 1) == static_cast<std::size_t>(oracle(5000, z)));
  }
  CHECK_THROWS_AS(init_length(100, 0.0, 2), ParameterError);
  CHECK_THROWS_AS(init_length(100, 1.0, 2), ParameterError);
  CHECK_THROWS_AS(init_length(100, 1.5, 2), ParameterError);
}

TEST_CASE("perturbed means and selection") {
  MabAgentState st(2);
  st.record(0, 1.0);
  st.record(1, 1.0);
  st.record(0, 1.0);
  st.record(1, 1.0);
  st.record(1, 1.0);
  const std::vector<double> sums{0.5, -0.3};
  const auto est = perturbed_means(st, sums);
  CHECK(est[0] == doctest::Approx(1.25));
  CHECK(est[1] == doctest::Approx(0.9));
  CHECK(argmax_lowest(est) == 0);

  MabAgentState partial(3);
  partial.record(0, 0.9);
  partial.record(2, 0.1);
  Rng rng(1);
  const auto pool = build_pool(partial.rewards, 1.0);
  CHECK(core_select(partial, pool, rng) == 1);
  CHECK(std::isinf(perturbed_means(partial, std::vector<double>{0, 0, 0})[1]));

  // Degenerate pool: plain empirical-mean argmax.
  MabAgentState flat(3);
  for (int i = 0; i < 3; ++i) flat.record(static_cast<std::size_t>(i), 0.5);
  flat.record(1, 0.5);
  const auto zeros = build_pool(flat.rewards, 1.0);
  CHECK(core_select(flat, zeros, rng) == 0);
  MabAgentState st2(3);
  st2.record(0, 0.2);
  st2.record(1, 0.8);
  st2.record(2, 0.5);
  const std::vector<double> none{0.8, 0.8, 0.8};
  RewardPool zero_pool = build_pool(std::vector<double>{0.8, 0.8}, 1.0);
  CHECK(core_select(st2, zero_pool, rng) == 1);
}

TEST_CASE("perturbation sums use one draw per past observation") {
  MabAgentState st(3);
  const std::vector<std::size_t> arms{0, 1, 1, 2, 0, 1};
  for (std::size_t i = 0; i < arms.size(); ++i) st.record(arms[i], 0.1 * double(i));
  const auto pool = build_pool(st.rewards, 0.7);
  Rng a(99), b(99);
  const auto sums = perturbation_sums(st, pool, a);
  std::vector<double> oracle(3, 0.0);
  for (const auto arm : arms) oracle[arm] += pool.draw(b);
  for (int i = 0; i < 3; ++i) CHECK(sums[static_cast<std::size_t>(i)] == oracle[static_cast<std::size_t>(i)]);
}

TEST_CASE("CORe round-robin initialization and determinism") {
  CoreParams p;
  p.horizon = 200;
  CoreAgent agent(10, p, 3);
  CHECK(agent.init_rounds() == init_length(200, 0.6, 10));
  Rng env(1);
  MabInstance inst{{0.3, 0.4, 0.5, 0.6, 0.7, 0.2, 0.1, 0.35, 0.45, 0.55}, NoiseModel::bernoulli()};
  std::vector<std::size_t> first;
  for (std::size_t t = 1; t <= 200; ++t) {
    const auto arm = agent.select(t);
    if (t <= agent.init_rounds()) CHECK(arm == (t - 1) % 10);
    first.push_back(arm);
    agent.observe(sample_reward(inst, arm, env));
  }
  CoreAgent again(10, p, 3);
  Rng env2(1);
  for (std::size_t t = 1; t <= 200; ++t) {
    const auto arm = again.select(t);
    CHECK(arm == first[t - 1]);
    again.observe(sample_reward(inst, arm, env2));
  }
}

TEST_CASE("policy protocol") {
  CoreParams p;
  p.horizon = 50;
  CoreAgent agent(3, p, 1);
  CHECK_THROWS_AS(agent.observe(1.0), ProtocolError);
  CHECK_THROWS_AS(agent.select(2), ProtocolError);
  agent.select(1);
  CHECK_THROWS_AS(agent.select(2), ProtocolError);
  agent.observe(0.0);
  CHECK(agent.rounds_played() == 1);
}

TEST_CASE("CORe parameter validation") {
  CoreParams p;
  p.z = 1.0;
  CHECK_THROWS_AS(CoreAgent(3, p, 0), ParameterError);
  p.z = 0.6;
  p.alpha = 0.0;
  CHECK_THROWS_AS(CoreAgent(3, p, 0), ParameterError);
  p.alpha = 0.6;
  p.lambda = 0.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p.allow_zero_ridge = true;
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("linear model state") {
  LinearModelState st(3, 0.5);
  Rng rng(2);
  for (int i = 0; i < 40; ++i) {
    Eigen::VectorXd x(3);
    for (int j = 0; j < 3; ++j) x[j] = rng.uniform(-1, 1);
    st.add(x, rng.normal());
    // Gram matrix stays symmetric positive definite and matches a recomputation.
    const auto& g = st.gram();
    CHECK((g - g.transpose()).norm() == 0.0);
    CHECK((g - st.recompute_gram()).norm() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
    CHECK(eig.eigenvalues().minCoeff() >= 0.5 - 1e-10);
  }
  st.set_lambda(2.0);
  CHECK((st.gram() - st.recompute_gram()).norm() < 1e-10);
  CHECK_THROWS_AS(st.add(Eigen::VectorXd::Zero(2), 1.0), ParameterError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(1, 1) = -1;
  CHECK_THROWS_AS(factor_spd(bad), InternalError);
}

TEST_CASE("lincore_fit scalar example") {
  LinearModelState st(1, 1.0);
  st.add(Eigen::VectorXd::Ones(1), 1.0);
  st.add(Eigen::VectorXd::Ones(1), 0.0);
  const std::vector<double> z{0.2, -0.2};
  CHECK(lincore_fit(st, z)[0] == doctest::Approx(1.0 / 3.0));
  const std::vector<double> zero{0.0, 0.0};
  CHECK(lincore_fit(st, zero)[0] == doctest::Approx(ridge_estimate(st)[0]));
  LinearModelState empty(2, 1.0);
  Rng rng(0);
  CHECK_THROWS_AS(lincore_fit(empty, std::vector<double>{}), EmptyHistory);
}

TEST_CASE("lincore_select") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd th(2);
  th << 1, 0;
  CHECK(lincore_select(th, x) == 0);
  CHECK(lincore_select(Eigen::VectorXd::Zero(2), x) == 0);
  th << 0, 1;
  CHECK(lincore_select(th, x) == 1);
}

TEST_CASE("one-hot LinCORe fit equals CORe perturbed means") {
  // Diagonal Gram with lambda = 0 reduces the solve to per-arm averages.
  const std::size_t k = 4;
  MabAgentState mab(k);
  LinearModelState lin(k, 0.0);
  Rng rng(17);
  for (int i = 0; i < 30; ++i) {
    const auto arm = static_cast<std::size_t>(i) % k;
    const double y = rng.normal(0.5, 0.5);
    mab.record(arm, y);
    lin.add(Eigen::VectorXd::Unit(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(arm)), y);
  }
  const auto pool = build_pool(mab.rewards, 0.6);
  Rng a(5), b(5);
  const auto est = perturbed_means(mab, perturbation_sums(mab, pool, a));
  const auto theta = lincore_fit(lin, pool, b);
  for (std::size_t i = 0; i < k; ++i) CHECK(theta[static_cast<Eigen::Index>(i)] == doctest::Approx(est[i]).epsilon(1e-12));
}

TEST_CASE("LinCORe minimum-eigenvalue ridge") {
  Rng rng(4);
  const auto inst = generate_linear(12, 3, NoiseModel::gaussian(), rng);
  CoreParams p;
  p.horizon = 100;
  p.ridge_mode = RidgeMode::kMinEigenQuarter;
  LinCoreAgent agent(inst.features, p, 1);
  Rng env(2);
  for (std::size_t t = 1; t <= agent.init_rounds() + 1; ++t) {
    const auto arm = agent.select(t);
    agent.observe(sample_reward(inst, arm, env));
  }
  Eigen::MatrixXd data = Eigen::MatrixXd::Zero(3, 3);
  for (std::size_t l = 0; l < agent.init_rounds(); ++l) {
    const Eigen::VectorXd x = inst.features.row(static_cast<Eigen::Index>(l % 12)).transpose();
    data += x * x.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(data);
  CHECK(agent.state().lambda() == doctest::Approx(eig.eigenvalues().minCoeff() / 4).epsilon(1e-9));
}
