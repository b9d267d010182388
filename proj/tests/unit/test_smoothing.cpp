#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fliplab/smoothing.hpp"

using namespace fliplab;

namespace {

PerturbationModel model(std::size_t n, NoiseFamily f, double phi, std::uint64_t seed) {
  PerturbationModel m;
  m.n = n;
  m.family = f;
  m.phi = phi;
  m.seed = seed;
  return m;
}

// Largest bin density of `draws` over [-1, 1] against `bound`, allowing three
// binomial standard errors per bin.
void expect_density_bounded(const std::vector<double>& draws, double bound, int bins) {
  std::vector<std::size_t> h(bins, 0);
  for (double x : draws) {
    ASSERT_GE(x, -1.0);
    ASSERT_LE(x, 1.0);
    int b = static_cast<int>((x + 1.0) / 2.0 * bins);
    ++h[std::min(b, bins - 1)];
  }
  const double width = 2.0 / bins;
  const double N = static_cast<double>(draws.size());
  for (int b = 0; b < bins; ++b) {
    const double p = bound * width;
    const double se = std::sqrt(std::min(p, 1.0) * (1 - std::min(p, 1.0)) / N);
    EXPECT_LE(h[b] / N, p + 3 * se + 1e-12) << "bin " << b;
  }
}

}  // namespace

TEST(ClampCenter, Examples) {
  EXPECT_DOUBLE_EQ(clamp_center(0.99, 1), 0.5);
  EXPECT_DOUBLE_EQ(clamp_center(0.0, 3.7), 0.0);
  EXPECT_DOUBLE_EQ(clamp_center(0.0, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(clamp_center(-5, 2), -0.75);
  EXPECT_THROW(clamp_center(0, 0.4), InvalidArgument);
}

TEST(UniformWindow, HalfPhiCoversWholeRange) {
  auto m = model(2, NoiseFamily::UniformWindow, 0.5, 1);
  m.means[EdgeKey::of(0, 1)] = 0.8;
  EXPECT_DOUBLE_EQ(edge_density(m, EdgeKey::of(0, 1), -0.999), 0.5);
  EXPECT_DOUBLE_EQ(edge_density(m, EdgeKey::of(0, 1), 0.999), 0.5);
  double lo = 1, hi = -1;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    m.seed = s;
    const double x = sample_edge(m, EdgeKey::of(0, 1));
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  EXPECT_LT(lo, -0.95);
  EXPECT_GT(hi, 0.95);
}

TEST(Sampling, Deterministic) {
  for (auto f : {NoiseFamily::UniformWindow, NoiseFamily::TruncatedGaussian}) {
    auto m = model(12, f, 4, 77);
    m.means[EdgeKey::of(2, 5)] = 0.9;
    auto a = sample_weights(m), b = sample_weights(m);
    EXPECT_TRUE(std::equal(a.flat().begin(), a.flat().end(), b.flat().begin()));
    for (std::size_t k = 0; k < edge_count(12); ++k) {
      EXPECT_EQ(sample_edge(m, edge_at(12, k)), a.flat()[k]);
    }
    m.seed = 78;
    auto c = sample_weights(m);
    EXPECT_FALSE(std::equal(a.flat().begin(), a.flat().end(), c.flat().begin()));
  }
}

TEST(Sampling, UniformWindowDensityBoundedByPhi) {
  auto m = model(2, NoiseFamily::UniformWindow, 10, 0);
  std::vector<double> draws;
  draws.reserve(1'000'000);
  for (std::uint64_t s = 0; s < 1'000'000; ++s) {
    m.seed = s;
    draws.push_back(sample_edge(m, EdgeKey::of(0, 1)));
  }
  expect_density_bounded(draws, 10, 400);
  for (double x : draws) ASSERT_LE(std::abs(x), 0.05 + 1e-12);
}

TEST(Sampling, TruncatedGaussianDensityBoundedByPhi) {
  for (double mean : {0.0, 0.97}) {
    auto m = model(2, NoiseFamily::TruncatedGaussian, 5, 0);
    m.means[EdgeKey::of(0, 1)] = mean;
    std::vector<double> draws;
    for (std::uint64_t s = 0; s < 300'000; ++s) {
      m.seed = s;
      draws.push_back(sample_edge(m, EdgeKey::of(0, 1)));
    }
    expect_density_bounded(draws, 5, 200);
  }
}

TEST(TruncatedGaussian, PeakDensityEqualsPhi) {
  for (double phi : {0.6, 1.0, 10.0, 100.0}) {
    for (double mean : {0.0, 0.5, -0.9, 1.0}) {
      auto m = model(2, NoiseFamily::TruncatedGaussian, phi, 0);
      m.means[EdgeKey::of(0, 1)] = mean;
      EXPECT_NEAR(edge_density(m, EdgeKey::of(0, 1), mean), phi, 1e-6 * phi) << phi << " " << mean;
      double peak = 0;
      for (int k = 0; k <= 2000; ++k) peak = std::max(peak, edge_density(m, EdgeKey::of(0, 1), -1 + k * 0.001));
      EXPECT_LE(peak, phi * (1 + 1e-9));
    }
  }
  EXPECT_THROW(truncated_gaussian_sigma(0, 0.5), InvalidArgument);
}

TEST(Model, RejectsBadInput) {
  auto m = model(3, NoiseFamily::UniformWindow, 0.3, 0);
  EXPECT_THROW(sample_weights(m), InvalidArgument);
  m.phi = 2;
  m.means[EdgeKey::of(1, 5)] = 0;
  EXPECT_THROW(sample_weights(m), DimensionMismatch);
  EXPECT_THROW(parse_noise_family("laplace"), InvalidArgument);
  EXPECT_EQ(parse_noise_family(to_string(NoiseFamily::TruncatedGaussian)), NoiseFamily::TruncatedGaussian);
}
