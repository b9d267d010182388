#include "fliplab/smoothing.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "fliplab/rng.hpp"

namespace fliplab {

namespace {

constexpr int kRejectionCap = 1000;

void check_model(const PerturbationModel& m) {
  if (!std::isfinite(m.phi)) throw InvalidArgument("phi must be finite");
  if (m.family == NoiseFamily::UniformWindow && m.phi < 0.5) {
    throw InvalidArgument("uniform_window needs phi >= 1/2, got " + std::to_string(m.phi));
  }
  if (m.family == NoiseFamily::TruncatedGaussian && !(m.phi > 0.5)) {
    throw InvalidArgument("trunc_gauss needs phi > 1/2, got " + std::to_string(m.phi));
  }
  for (const auto& [e, mu] : m.means) {
    if (static_cast<std::size_t>(e.hi) >= m.n) throw DimensionMismatch("mean given for edge outside instance");
    if (!std::isfinite(mu)) throw InvalidArgument("edge mean must be finite");
  }
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

double truncated_peak(double mean, double sigma) {
  const boost::math::normal_distribution<double> z;
  const double mass = boost::math::cdf(z, (1.0 - mean) / sigma) - boost::math::cdf(z, (-1.0 - mean) / sigma);
  return boost::math::pdf(z, 0.0) / (sigma * mass);
}

}  // namespace

std::string to_string(NoiseFamily f) {
  return f == NoiseFamily::UniformWindow ? "uniform_window" : "trunc_gauss";
}

NoiseFamily parse_noise_family(const std::string& s) {
  if (s == "uniform_window") return NoiseFamily::UniformWindow;
  if (s == "trunc_gauss") return NoiseFamily::TruncatedGaussian;
  throw InvalidArgument("unknown noise family '" + s + "'");
}

double PerturbationModel::mean(EdgeKey e) const {
  auto it = means.find(e);
  return it == means.end() ? 0.0 : it->second;
}

double clamp_center(double mean, double phi) {
  if (phi < 0.5) throw InvalidArgument("phi must be at least 1/2");
  const double r = 1.0 - 1.0 / (2.0 * phi);
  return std::clamp(mean, -r, r);
}

double truncated_gaussian_sigma(double mean, double phi) {
  if (!(phi > 0.5)) throw InvalidArgument("phi must exceed 1/2");
  mean = clamp_unit(mean);
  // the peak density falls monotonically from infinity to 1/2 as sigma grows
  double lo = std::log(1e-9), hi = std::log(1e9);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (truncated_peak(mean, std::exp(mid)) > phi) lo = mid;
    else hi = mid;
  }
  return std::exp(hi);
}

double edge_density(const PerturbationModel& model, EdgeKey e, double x) {
  check_model(model);
  if (x < -1.0 || x > 1.0) return 0.0;
  if (model.family == NoiseFamily::UniformWindow) {
    const double c = clamp_center(model.mean(e), model.phi);
    const double h = 1.0 / (2.0 * model.phi);
    return (x >= c - h && x <= c + h) ? model.phi : 0.0;
  }
  const double mu = clamp_unit(model.mean(e));
  const double sigma = truncated_gaussian_sigma(mu, model.phi);
  const boost::math::normal_distribution<double> z;
  const double mass = boost::math::cdf(z, (1.0 - mu) / sigma) - boost::math::cdf(z, (-1.0 - mu) / sigma);
  return boost::math::pdf(z, (x - mu) / sigma) / (sigma * mass);
}

namespace {

double draw(const PerturbationModel& model, EdgeKey e, double sigma_cache) {
  StreamRng rng(model.seed, edge_index(model.n, e));
  if (model.family == NoiseFamily::UniformWindow) {
    const double c = clamp_center(model.mean(e), model.phi);
    const double h = 1.0 / (2.0 * model.phi);
    return std::clamp(c - h + 2.0 * h * rng.uniform(), -1.0, 1.0);
  }
  const double mu = clamp_unit(model.mean(e));
  const double sigma = sigma_cache > 0 ? sigma_cache : truncated_gaussian_sigma(mu, model.phi);
  for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
    const double x = mu + sigma * rng.normal();
    if (x >= -1.0 && x <= 1.0) return x;
  }
  const boost::math::normal_distribution<double> z;
  const double a = boost::math::cdf(z, (-1.0 - mu) / sigma);
  const double b = boost::math::cdf(z, (1.0 - mu) / sigma);
  const double p = std::clamp(a + (b - a) * rng.uniform(), a, b);
  return std::clamp(mu + sigma * boost::math::quantile(z, std::clamp(p, 1e-300, 1.0 - 1e-16)), -1.0, 1.0);
}

}  // namespace

double sample_edge(const PerturbationModel& model, EdgeKey e) {
  check_model(model);
  if (static_cast<std::size_t>(e.hi) >= model.n) throw DimensionMismatch("edge outside instance");
  return draw(model, e, 0.0);
}

EdgeWeights sample_weights(const PerturbationModel& model) {
  check_model(model);
  std::vector<double> flat(edge_count(model.n));
  // sigma depends on the mean only; cache the default-mean value
  double sigma0 = 0.0;
  if (model.family == NoiseFamily::TruncatedGaussian) sigma0 = truncated_gaussian_sigma(0.0, model.phi);
  for (std::size_t k = 0; k < flat.size(); ++k) {
    const EdgeKey e = edge_at(model.n, k);
    const bool default_mean = !model.means.count(e) || model.mean(e) == 0.0;
    flat[k] = draw(model, e, default_mean ? sigma0 : 0.0);
  }
  return EdgeWeights(model.n, std::move(flat));
}

}  // namespace fliplab
