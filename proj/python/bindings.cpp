#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "corebandit/agents.hpp"
#include "corebandit/baselines.hpp"
#include "corebandit/bench.hpp"
#include "corebandit/config.hpp"
#include "corebandit/envs.hpp"
#include "corebandit/errors.hpp"
#include "corebandit/ranking.hpp"
#include "corebandit/reward_pool.hpp"
#include "corebandit/theory_checks.hpp"

namespace py = pybind11;
namespace cb = corebandit;

namespace {

cb::NoiseModel noise_from(const std::string& family, double sigma, double v) {
  switch (cb::parse_reward_family(family)) {
    case cb::RewardFamily::kBernoulli:
      return cb::NoiseModel::bernoulli();
    case cb::RewardFamily::kBeta:
      return cb::NoiseModel::beta(v);
    case cb::RewardFamily::kGaussian:
      return cb::NoiseModel::gaussian(sigma);
  }
  throw cb::ParameterError("unknown reward family");
}

py::dict report_dict(const cb::CheckReport& r) {
  py::dict d;
  d["check"] = r.check;
  d["params"] = r.params;
  d["trials"] = r.trials;
  d["failures"] = r.failures;
  d["bound"] = r.bound;
  d["empirical"] = r.empirical;
  d["passed"] = r.pass;
  return d;
}

py::dict result_dict(const cb::ExperimentResult& result) {
  py::list rows;
  for (const auto& a : result.aggregate) {
    py::dict row;
    row["agent"] = a.agent;
    row["round"] = a.round;
    row["mean_regret"] = a.mean_regret;
    row["std_regret"] = a.std_regret;
    row["n_runs"] = a.n_runs;
    rows.append(row);
  }
  py::dict final_regret;
  for (const auto& tr : result.traces) {
    if (!final_regret.contains(tr.agent)) final_regret[py::str(tr.agent)] = py::list();
    final_regret[py::str(tr.agent)].cast<py::list>().append(tr.final_regret());
  }
  py::dict d;
  d["aggregate"] = rows;
  d["final_regret"] = final_regret;
  return d;
}

}  // namespace

PYBIND11_MODULE(_corebandit, m) {
  m.doc() = "Randomized-exploration bandit simulator";

  py::register_exception<cb::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<cb::ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);
  py::register_exception<cb::EmptyPool>(m, "EmptyPool", PyExc_RuntimeError);

  // environments
  m.def(
      "generate_mab",
      [](std::size_t k, const std::string& family, std::uint64_t seed, double sigma, double v) {
        cb::Rng rng(seed);
        return cb::generate_mab(k, noise_from(family, sigma, v), rng).means;
      },
      py::arg("num_arms"), py::arg("family") = "bernoulli", py::arg("seed") = 0, py::arg("sigma") = 0.5,
      py::arg("v") = 4.0, "Arm means drawn from U[0.25, 0.75].");
  m.def(
      "generate_linear",
      [](std::size_t k, std::size_t d, const std::string& family, std::uint64_t seed, double sigma) {
        cb::Rng rng(seed);
        auto inst = cb::generate_linear(k, d, noise_from(family, sigma, 4.0), rng);
        return py::make_tuple(inst.features, inst.theta_star, inst.means());
      },
      py::arg("num_arms"), py::arg("dim"), py::arg("family") = "gaussian", py::arg("seed") = 0,
      py::arg("sigma") = 0.5, "Returns (features, theta_star, means).");
  m.def(
      "generate_cascade",
      [](std::size_t items, std::size_t list_length, std::uint64_t seed) {
        cb::Rng rng(seed);
        return cb::generate_cascade(items, list_length, rng).attractions;
      },
      py::arg("num_items"), py::arg("list_length"), py::arg("seed") = 0);
  m.def(
      "cascade_expected_clicks",
      [](std::vector<double> attractions, std::vector<std::size_t> list) {
        cb::CascadeInstance inst{std::move(attractions), list.size()};
        return cb::cascade_expected_clicks(inst, list);
      },
      py::arg("attractions"), py::arg("ranked_list"));

  // reward pool
  m.def(
      "build_pool", [](const std::vector<double>& rewards, double alpha) {
        const auto pool = cb::build_pool(rewards, alpha);
        return std::vector<double>(pool.values().begin(), pool.values().end());
      },
      py::arg("rewards"), py::arg("alpha"));
  m.def(
      "pool_variance",
      [](const std::vector<double>& rewards, double alpha) { return cb::pool_variance(cb::build_pool(rewards, alpha)); },
      py::arg("rewards"), py::arg("alpha"));
  m.def("init_length", &cb::init_length, py::arg("horizon"), py::arg("z"), py::arg("dims"));

  // ranking
  m.def("bernoulli_kl", &cb::bernoulli_kl, py::arg("p"), py::arg("q"));
  m.def("klucb_index", &cb::klucb_index, py::arg("clicks"), py::arg("observations"), py::arg("round"));

  // agents
  py::class_<cb::BanditPolicy>(m, "BanditPolicy")
      .def_property_readonly("name", &cb::BanditPolicy::name)
      .def("select", &cb::BanditPolicy::select, py::arg("round"), "0-based arm for 1-based round t.")
      .def("observe", &cb::BanditPolicy::observe, py::arg("reward"))
      .def_property_readonly("rounds_played", &cb::BanditPolicy::rounds_played);
  py::class_<cb::CoreAgent, cb::BanditPolicy>(m, "CoreAgent")
      .def(py::init([](std::size_t k, double alpha, double z, std::size_t horizon, std::uint64_t seed) {
             cb::CoreParams p;
             p.alpha = alpha;
             p.z = z;
             p.horizon = horizon;
             return std::make_unique<cb::CoreAgent>(k, p, seed);
           }),
           py::arg("num_arms"), py::arg("alpha") = 0.6, py::arg("z") = 0.6, py::arg("horizon") = 10000,
           py::arg("seed") = 0);
  py::class_<cb::LinCoreAgent, cb::BanditPolicy>(m, "LinCoreAgent")
      .def(py::init([](const Eigen::MatrixXd& features, double alpha, double z, double lambda, std::size_t horizon,
                       std::uint64_t seed) {
             cb::CoreParams p;
             p.alpha = alpha;
             p.z = z;
             p.lambda = lambda;
             p.horizon = horizon;
             return std::make_unique<cb::LinCoreAgent>(features, p, seed);
           }),
           py::arg("features"), py::arg("alpha") = 0.6, py::arg("z") = 0.6, py::arg("lambda_") = 1.0,
           py::arg("horizon") = 10000, py::arg("seed") = 0);

  // experiments
  m.def(
      "run_experiment",
      [](const std::filesystem::path& config_path, std::size_t workers, bool write) {
        const auto config = cb::load_config(config_path);
        cb::ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = write ? cb::run_and_write(config, workers) : cb::run_experiment(config, workers);
        }
        return result_dict(result);
      },
      py::arg("config_path"), py::arg("workers") = 0, py::arg("write") = false,
      "Runs a YAML experiment config; returns aggregate rows and per-agent final regrets.");

  // checks
  m.def(
      "check_lemma1",
      [](std::size_t n, double z, double alpha, double sigma, std::size_t trials, std::uint64_t seed) {
        return report_dict(cb::check_lemma1(n, z, alpha, sigma, trials, seed));
      },
      py::arg("n"), py::arg("z"), py::arg("alpha"), py::arg("sigma"), py::arg("trials"), py::arg("seed") = 0);
  m.def(
      "check_lemma2",
      [](std::size_t n, double alpha, double sigma, std::size_t trials, std::uint64_t seed) {
        return report_dict(cb::check_lemma2(n, alpha, sigma, trials, seed));
      },
      py::arg("n"), py::arg("alpha"), py::arg("sigma"), py::arg("trials"), py::arg("seed") = 0);
  m.def(
      "check_posterior_equivalence",
      [](double mu0, double sigma, const std::vector<double>& rewards, std::size_t trials, std::uint64_t seed) {
        return report_dict(cb::check_posterior_equivalence(mu0, sigma, rewards, trials, seed));
      },
      py::arg("mu0"), py::arg("sigma"), py::arg("rewards"), py::arg("trials") = 100000, py::arg("seed") = 0);
  m.def(
      "check_chi_square_shift",
      [](const Eigen::MatrixXd& a, const Eigen::VectorXd& v, double eps, std::size_t trials, std::uint64_t seed) {
        return report_dict(cb::check_chi_square_shift(a, v, eps, trials, seed));
      },
      py::arg("A"), py::arg("v"), py::arg("eps"), py::arg("trials") = 100000, py::arg("seed") = 0);
}
