#pragma once

// Random edge weights with density bounded by phi, supported on [-1, 1].

#include <cstdint>
#include <map>
#include <string>

#include "fliplab/core.hpp"

namespace fliplab {

enum class NoiseFamily { UniformWindow, TruncatedGaussian };

std::string to_string(NoiseFamily f);
NoiseFamily parse_noise_family(const std::string& s);

struct PerturbationModel {
  std::size_t n = 0;
  NoiseFamily family = NoiseFamily::UniformWindow;
  /// Centers of the per-edge distributions; missing edges default to 0.
  std::map<EdgeKey, double> means;
  double phi = 1.0;
  std::uint64_t seed = 0;

  double mean(EdgeKey e) const;
};

/// Clip `mean` into [-1 + 1/(2 phi), 1 - 1/(2 phi)] so that a uniform window
/// of width 1/phi around it stays inside [-1, 1].
double clamp_center(double mean, double phi);

/// Standard deviation of the Gaussian whose restriction to [-1, 1] has peak
/// density exactly phi when centered at `mean` (clamped into [-1, 1]).
/// Requires phi > 1/2.
double truncated_gaussian_sigma(double mean, double phi);

/// Density of one edge's distribution at x.
double edge_density(const PerturbationModel& model, EdgeKey e, double x);

/// One draw per edge. Edge k uses stream k of model.seed, so the result does
/// not depend on sampling order.
EdgeWeights sample_weights(const PerturbationModel& model);

/// Draw for a single edge, identical to the corresponding entry of
/// sample_weights.
double sample_edge(const PerturbationModel& model, EdgeKey e);

}  // namespace fliplab
