#include <cmath>
#include <limits>

#include "corebandit/baselines.hpp"
#include "corebandit/envs.hpp"
#include "doctest.h"

using namespace corebandit;

TEST_CASE("ucb1 index") {
  CHECK(ucb1_index(0.5, 2, 55) == doctest::Approx(2.5018).epsilon(1e-3 / 2.5));
  CHECK(std::isinf(ucb1_index(0.5, 0, 10)));
  CHECK(ucb1_index(0.3, 100000000, 1000) == doctest::Approx(0.3).epsilon(1e-3));
}

TEST_CASE("ucbv index") {
  // Independent evaluation of mean + sqrt(2 V ln t / s) + 3 b ln t / s.
  const double lt = std::log(7.0);
  CHECK(ucbv_index(0.5, 0.25, 2, 7, 1.0) == doctest::Approx(0.5 + std::sqrt(0.25 * lt) + 1.5 * lt));
  CHECK(ucbv_index(0.4, 0.0, 10, 7, 1.0) == doctest::Approx(0.4 + 0.3 * lt));
  CHECK(std::isinf(ucbv_index(0.5, 0.1, 0, 3, 1.0)));
  // ln t = 2 case from the formula: 0.5 + sqrt(0.5) + 3.
  CHECK(0.5 + std::sqrt(2 * 0.25 * 2 / 2) + 3 * 1 * 2.0 / 2 == doctest::Approx(4.2071).epsilon(1e-4));
}

TEST_CASE("Bernoulli TS sampler") {
  Rng rng(1);
  double s = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) s += bern_ts_sample(3, 1, rng);
  CHECK(std::abs(s / n - 4.0 / 6.0) < 0.002);
  for (int i = 0; i < 20; ++i) CHECK(bern_ts_sample(1e6, 0, rng) > 1 - 1e-4);
  for (int i = 0; i < 20; ++i) {
    const double u = bern_ts_sample(0, 0, rng);
    CHECK((u >= 0 && u <= 1));
  }
}

TEST_CASE("Gaussian TS sampler") {
  Rng rng(2);
  const int n = 400000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = gauss_ts_sample(0.5, 0.5, 1.5, 3, rng);
    s += x;
    s2 += x * x;
  }
  const double m = s / n;
  CHECK(std::abs(m - 0.5) < 4 * 0.25 / std::sqrt(n));
  CHECK(std::sqrt(s2 / n - m * m) == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("PHE estimates") {
  CHECK(phe_estimate(2.0, 2, std::vector<double>{1.0, 0.0}) == doctest::Approx(0.75));
  CHECK(phe_pseudo_count(1.0, 2) == 2);
  CHECK(phe_pseudo_count(0.5, 3) == 2);
  CHECK(phe_pseudo_count(0.1, 10) == 1);
  CHECK(phe_pseudo_count(0.0, 10) == 0);
  Rng rng(3);
  CHECK(phe_estimate(1.5, 3, 0.0, PseudoFamily::kBernoulli, rng) == doctest::Approx(0.5));
}

TEST_CASE("arm statistics") {
  ArmStats st(3);
  st.record(1, 1.0);
  st.record(1, 3.0);
  CHECK(st.mean(1) == 2.0);
  CHECK(st.variance(1) == 1.0);
  CHECK(st.first_unpulled() == 0);
}

TEST_CASE("baseline agents pull every arm first and stay in range") {
  Rng env(5);
  MabInstance inst{{0.2, 0.8, 0.5, 0.4}, NoiseModel::bernoulli()};
  std::vector<std::unique_ptr<BanditPolicy>> agents;
  agents.push_back(std::make_unique<Ucb1Agent>(4));
  agents.push_back(std::make_unique<UcbVAgent>(4, 1.0));
  agents.push_back(std::make_unique<BernoulliTsAgent>(4, 1));
  agents.push_back(std::make_unique<GaussianTsAgent>(4, 0.5, 0.5, 1));
  agents.push_back(std::make_unique<PheAgent>(4, 0.5, PseudoFamily::kBernoulli, 1));
  agents.push_back(std::make_unique<PheAgent>(4, 0.5, PseudoFamily::kGaussian, 1));
  for (auto& a : agents) {
    std::vector<int> pulls(4, 0);
    for (std::size_t t = 1; t <= 2000; ++t) {
      const auto arm = a->select(t);
      REQUIRE(arm < 4);
      if (a->name() == "UCB1" || a->name() == "UCB-V") {
        if (t <= 4) CHECK(arm == t - 1);
      }
      ++pulls[arm];
      a->observe(sample_reward(inst, arm, env));
    }
    CHECK_MESSAGE(pulls[1] > 1000, a->name());
  }
}

TEST_CASE("linear baseline primitives") {
  LinearModelState st(1, 1.0);
  st.add(Eigen::VectorXd::Ones(1), 1.0);
  st.add(Eigen::VectorXd::Ones(1), 0.0);
  // G = 3, xy_sum = 1.
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(1, 1);
  CHECK(linucb_scores(st, x, 1.0)[0] == doctest::Approx(1.0 / 3 + 1 / std::sqrt(3.0)));
  CHECK(linucb_scores(st, x, 0.0)[0] == doctest::Approx(ridge_estimate(st)[0]));
  Rng rng(1);
  CHECK(lints_sample(st, 0.0, rng)[0] == doctest::Approx(ridge_estimate(st)[0]));

  // LinTS draws have covariance sigma^2 G^{-1}.
  LinearModelState st2(2, 1.0);
  Eigen::VectorXd a(2), b(2);
  a << 1, 0.5;
  b << -0.3, 1;
  for (int i = 0; i < 5; ++i) {
    st2.add(a, 0.4);
    st2.add(b, 0.1);
  }
  const Eigen::MatrixXd target = 0.25 * st2.gram().inverse();
  const Eigen::VectorXd center = ridge_estimate(st2);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd d = lints_sample(st2, 0.5, rng) - center;
    cov += d * d.transpose();
  }
  cov /= n;
  CHECK((cov - target).norm() < 0.02 * target.norm());

  // LinPHE with Bernoulli pseudo noise: Z takes values +/- a/2.
  const Eigen::VectorXd th = linphe_fit(st, 1.0, PseudoFamily::kBernoulli, rng);
  const double v = th[0] * 3 - 1;  // sum of the two Z values
  CHECK((std::abs(v - 1.0) < 1e-12 || std::abs(v) < 1e-12 || std::abs(v + 1.0) < 1e-12));
}

TEST_CASE("one-hot LinUCB has a per-arm mean plus c / sqrt(s) structure") {
  LinearModelState st(3, 1e-9);
  const std::vector<int> arms{0, 1, 2, 0, 0, 1};
  const std::vector<double> ys{1, 0, 0.5, 0, 1, 1};
  for (std::size_t i = 0; i < arms.size(); ++i) st.add(Eigen::VectorXd::Unit(3, arms[i]), ys[i]);
  const auto scores = linucb_scores(st, Eigen::MatrixXd::Identity(3, 3), 2.0);
  CHECK(scores[0] == doctest::Approx(2.0 / 3 + 2 / std::sqrt(3.0)).epsilon(1e-6));
  CHECK(scores[1] == doctest::Approx(0.5 + 2 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(scores[2] == doctest::Approx(0.5 + 2.0).epsilon(1e-6));
}

TEST_CASE("linear baseline agents learn an easy problem") {
  Rng rng(8);
  const auto inst = generate_linear(10, 3, NoiseModel::gaussian(0.1), rng);
  const auto best = argmax_lowest(inst.means());
  std::vector<std::unique_ptr<BanditPolicy>> agents;
  agents.push_back(std::make_unique<LinUcbAgent>(inst.features, 0.5, 1.0));
  agents.push_back(std::make_unique<LinTsAgent>(inst.features, 0.1, 1.0, 2));
  agents.push_back(std::make_unique<LinPheAgent>(inst.features, 0.5, PseudoFamily::kGaussian, 1.0, 2));
  for (auto& a : agents) {
    Rng env(3);
    int hits = 0;
    for (std::size_t t = 1; t <= 1500; ++t) {
      const auto arm = a->select(t);
      if (t > 1000) hits += arm == best;
      a->observe(sample_reward(inst, arm, env));
    }
    CHECK_MESSAGE(hits > 350, a->name());
  }
}
