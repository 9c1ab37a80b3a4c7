#include "corebandit/envs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "corebandit/errors.hpp"

namespace corebandit {

std::string to_string(RewardFamily family) {
  switch (family) {
    case RewardFamily::kBernoulli:
      return "bernoulli";
    case RewardFamily::kBeta:
      return "beta";
    case RewardFamily::kGaussian:
      return "gaussian";
  }
  return "unknown";
}

RewardFamily parse_reward_family(const std::string& name) {
  if (name == "bernoulli") return RewardFamily::kBernoulli;
  if (name == "beta") return RewardFamily::kBeta;
  if (name == "gaussian") return RewardFamily::kGaussian;
  throw InvalidInstance("unknown reward family '" + name + "'");
}

double NoiseModel::sample(double mean, Rng& rng) const {
  switch (family) {
    case RewardFamily::kBernoulli:
      return rng.bernoulli(mean) ? 1.0 : 0.0;
    case RewardFamily::kBeta: {
      // Degenerate endpoints are point masses.
      if (mean <= 0.0) return 0.0;
      if (mean >= 1.0) return 1.0;
      return rng.beta(beta_concentration * mean, beta_concentration * (1.0 - mean));
    }
    case RewardFamily::kGaussian:
      return rng.normal(mean, gaussian_sd);
  }
  return mean;
}

double NoiseModel::variance(double mean) const {
  switch (family) {
    case RewardFamily::kBernoulli:
      return mean * (1.0 - mean);
    case RewardFamily::kBeta:
      return mean * (1.0 - mean) / (beta_concentration + 1.0);
    case RewardFamily::kGaussian:
      return gaussian_sd * gaussian_sd;
  }
  return 0.0;
}

double NoiseModel::range_bound() const {
  return family == RewardFamily::kGaussian ? 1.0 + 4.0 * gaussian_sd : 1.0;
}

namespace {

void validate_noise(const NoiseModel& noise) {
  if (noise.family == RewardFamily::kBeta && !(noise.beta_concentration > 0.0)) {
    throw InvalidInstance("beta concentration must be positive");
  }
  if (noise.family == RewardFamily::kGaussian && !(noise.gaussian_sd >= 0.0)) {
    throw InvalidInstance("gaussian sd must be non-negative");
  }
}

void validate_mean(double mu, std::size_t arm) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw InvalidInstance("mean of arm " + std::to_string(arm) + " outside [0, 1]");
  }
}

}  // namespace

void MabInstance::validate() const {
  if (means.size() < 2) throw InvalidInstance("a multi-armed instance needs K >= 2 arms");
  validate_noise(noise);
  for (std::size_t i = 0; i < means.size(); ++i) validate_mean(means[i], i);
}

std::vector<double> LinearInstance::means() const {
  std::vector<double> mu(num_arms());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu[i] = features.row(static_cast<Eigen::Index>(i)).dot(theta_star);
  }
  return mu;
}

namespace {

bool last_rows_form_basis(const Eigen::MatrixXd& features) {
  const auto d = features.cols();
  if (features.rows() < d) return false;
  const Eigen::MatrixXd tail = features.bottomRows(d);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(tail);
  lu.setThreshold(1e-10);
  return lu.rank() == d;
}

}  // namespace

void LinearInstance::validate() const {
  if (features.cols() < 1) throw InvalidInstance("feature dimension must be >= 1");
  if (features.rows() < features.cols()) throw InvalidInstance("need K >= d arms");
  if (theta_star.size() != features.cols()) throw InvalidInstance("theta dimension mismatch");
  validate_noise(noise);
  const auto mu = means();
  for (std::size_t i = 0; i < mu.size(); ++i) validate_mean(mu[i], i);
  if (!last_rows_form_basis(features)) {
    throw InvalidInstance("the last d feature vectors are not a basis");
  }
}

void CascadeInstance::validate() const {
  if (list_length < 1 || list_length > attractions.size()) {
    throw InvalidInstance("cascade instance needs 1 <= K <= L");
  }
  for (std::size_t i = 0; i < attractions.size(); ++i) {
    if (!(attractions[i] >= 0.0 && attractions[i] <= 1.0)) {
      throw InvalidInstance("attraction of item " + std::to_string(i) + " outside [0, 1]");
    }
  }
}

MabInstance generate_mab(std::size_t num_arms, const NoiseModel& noise, Rng& rng) {
  if (num_arms < 2) throw InvalidInstance("a multi-armed instance needs K >= 2 arms");
  MabInstance instance;
  instance.noise = noise;
  instance.means.resize(num_arms);
  for (auto& mu : instance.means) mu = rng.uniform(0.25, 0.75);
  instance.validate();
  return instance;
}

LinearInstance generate_linear(std::size_t num_arms, std::size_t dim, const NoiseModel& noise,
                               Rng& rng) {
  if (dim < 1 || num_arms < dim) throw InvalidInstance("generate_linear needs K >= d >= 1");
  const auto k = static_cast<Eigen::Index>(num_arms);
  const auto d = static_cast<Eigen::Index>(dim);

  for (int attempt = 0; attempt < kMaxBasisRetries; ++attempt) {
    LinearInstance instance;
    instance.noise = noise;
    instance.features.resize(k, d);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j + 1 < d; ++j) instance.features(i, j) = rng.uniform(-1.0, 1.0);
      instance.features(i, d - 1) = 1.0;
    }
    Eigen::VectorXd raw(d);
    for (Eigen::Index j = 0; j + 1 < d; ++j) raw(j) = rng.uniform(-1.0, 1.0);
    raw(d - 1) = 0.0;

    if (!last_rows_form_basis(instance.features)) continue;

    const Eigen::VectorXd scores = instance.features * raw;
    const double lo = scores.minCoeff();
    const double hi = scores.maxCoeff();
    instance.theta_star = Eigen::VectorXd::Zero(d);
    if (hi - lo > 0.0) {
      const double scale = 0.5 / (hi - lo);
      instance.theta_star = raw * scale;
      instance.theta_star(d - 1) = 0.25 - lo * scale;
    } else {
      instance.theta_star(d - 1) = 0.5;
    }
    instance.validate();
    return instance;
  }
  throw GenerationError("could not draw a feature basis in " + std::to_string(kMaxBasisRetries) +
                        " attempts");
}

CascadeInstance generate_cascade(std::size_t num_items, std::size_t list_length, Rng& rng) {
  CascadeInstance instance;
  instance.list_length = list_length;
  instance.attractions.resize(num_items);
  for (auto& w : instance.attractions) w = rng.beta(1.0, 4.0);
  instance.validate();
  return instance;
}

double sample_reward(const MabInstance& instance, std::size_t arm, Rng& rng) {
  if (arm >= instance.means.size()) throw std::out_of_range("arm index out of range");
  return instance.noise.sample(instance.means[arm], rng);
}

double sample_reward(const LinearInstance& instance, std::size_t arm, Rng& rng) {
  if (arm >= instance.num_arms()) throw std::out_of_range("arm index out of range");
  const double mu = instance.features.row(static_cast<Eigen::Index>(arm)).dot(instance.theta_star);
  return instance.noise.sample(mu, rng);
}

std::size_t argmax_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<double> gaps_from_means(std::span<const double> means) {
  const double best = means[argmax_lowest(means)];
  std::vector<double> out(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) out[i] = best - means[i];
  return out;
}

std::vector<double> gaps(const MabInstance& instance) { return gaps_from_means(instance.means); }

std::vector<double> gaps(const LinearInstance& instance) {
  const auto mu = instance.means();
  return gaps_from_means(mu);
}

void validate_ranked_list(const CascadeInstance& instance, std::span<const std::size_t> list) {
  if (list.size() != instance.list_length) {
    throw InvalidInstance("ranked list must have exactly K items");
  }
  std::vector<bool> seen(instance.num_items(), false);
  for (const auto item : list) {
    if (item >= instance.num_items()) throw InvalidInstance("ranked list item out of range");
    if (seen[item]) throw InvalidInstance("ranked list contains a duplicate item");
    seen[item] = true;
  }
}

double cascade_expected_clicks(const CascadeInstance& instance, std::span<const std::size_t> list) {
  validate_ranked_list(instance, list);
  double none = 1.0;
  for (const auto item : list) none *= 1.0 - instance.attractions[item];
  return 1.0 - none;
}

ClickFeedback cascade_step(const CascadeInstance& instance, std::span<const std::size_t> list,
                           Rng& rng) {
  for (std::size_t k = 0; k < list.size(); ++k) {
    if (rng.bernoulli(instance.attractions[list[k]])) return {k};
  }
  return {};
}

CascadeInstance parse_cascade_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInstance("cascade model: missing header");

  long long num_items = -1;
  long long list_length = -1;
  {
    std::istringstream header(line);
    std::string token;
    while (header >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw InvalidInstance("cascade model: bad header token '" + token + "'");
      const auto key = token.substr(0, eq);
      long long value = 0;
      try {
        value = std::stoll(token.substr(eq + 1));
      } catch (const std::exception&) {
        throw InvalidInstance("cascade model: bad header value '" + token + "'");
      }
      if (key == "L") {
        num_items = value;
      } else if (key == "K") {
        list_length = value;
      } else {
        throw InvalidInstance("cascade model: unknown header key '" + key + "'");
      }
    }
  }
  if (num_items < 1 || list_length < 1) throw InvalidInstance("cascade model: header needs L=<int> K=<int>");

  CascadeInstance instance;
  instance.list_length = static_cast<std::size_t>(list_length);
  instance.attractions.assign(static_cast<std::size_t>(num_items), 0.0);
  std::vector<bool> seen(instance.attractions.size(), false);
  std::size_t records = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InvalidInstance("cascade model line " + std::to_string(line_no) + ": expected item_id<TAB>attraction");
    }
    long long id = 0;
    double w = 0.0;
    try {
      std::size_t used = 0;
      id = std::stoll(line.substr(0, tab), &used);
      if (used != tab) throw std::invalid_argument("trailing");
      const auto rest = line.substr(tab + 1);
      w = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidInstance("cascade model line " + std::to_string(line_no) + ": unparsable record");
    }
    if (id < 0 || id >= num_items) {
      throw InvalidInstance("cascade model line " + std::to_string(line_no) + ": item id out of range");
    }
    if (seen[static_cast<std::size_t>(id)]) {
      throw InvalidInstance("cascade model line " + std::to_string(line_no) + ": duplicate item id");
    }
    seen[static_cast<std::size_t>(id)] = true;
    instance.attractions[static_cast<std::size_t>(id)] = w;
    ++records;
  }
  if (records != instance.attractions.size()) {
    throw InvalidInstance("cascade model: expected " + std::to_string(num_items) + " records, got " +
                          std::to_string(records));
  }
  instance.validate();
  return instance;
}

std::string format_cascade_model(const CascadeInstance& instance) {
  instance.validate();
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "L=" << instance.num_items() << " K=" << instance.list_length << '\n';
  for (std::size_t i = 0; i < instance.num_items(); ++i) {
    out << i << '\t' << instance.attractions[i] << '\n';
  }
  return out.str();
}

CascadeInstance load_cascade_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cascade model " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_cascade_model(buffer.str());
}

void save_cascade_model(const CascadeInstance& instance, const std::filesystem::path& path) {
  const auto text = format_cascade_model(instance);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write cascade model " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace corebandit
