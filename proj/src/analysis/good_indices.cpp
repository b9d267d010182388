#include <algorithm>
#include <cmath>

#include "fliplab/analysis.hpp"

namespace fliplab {

AnalysisParams AnalysisParams::for_n(std::size_t n) {
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  AnalysisParams p;
  p.t_low = static_cast<std::size_t>(std::ceil(std::pow(lg, 3)));
  p.t_high = static_cast<std::size_t>(std::ceil(std::pow(lg, 7)));
  p.d_min = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(100 * lg)));
  p.one_move_frac = 1.0 / std::pow(lg, 5);
  p.min_occurrences = static_cast<std::size_t>(std::ceil(std::pow(lg, 8)));
  p.ledger_cap_divisor = std::pow(lg, 10);
  return p;
}

AnalysisParams AnalysisParams::desk() { return AnalysisParams{}; }

void AnalysisParams::validate() const {
  if (!(delta > 0 && delta < 1)) throw InvalidArgument("delta must lie in (0, 1)");
  if (t_low > t_high) throw InvalidArgument("t_low must not exceed t_high");
  if (t_low == 0) throw InvalidArgument("t_low must be positive");
  if (d_min < 2) throw InvalidArgument("d_min must be at least 2");
  if (!(bucket_base > 1)) throw InvalidArgument("bucket_base must exceed 1");
  if (!(one_move_frac >= 0 && one_move_frac <= 1)) throw InvalidArgument("one_move_frac must lie in [0, 1]");
  if (ledger_cap_divisor < 0) throw InvalidArgument("ledger cap divisor must be non-negative");
}

std::optional<std::size_t> AnalysisParams::ledger_cap(std::size_t window_len) const {
  if (cycle_ledger_cap) return cycle_ledger_cap;
  if (ledger_cap_divisor > 0) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(window_len) / ledger_cap_divisor));
  }
  return std::nullopt;
}

std::size_t inner_radius(std::size_t ell, const AnalysisParams& p) {
  if (ell < 1) throw InvalidArgument("scale index starts at 1");
  return static_cast<std::size_t>(std::ceil(std::pow(p.bucket_base, static_cast<double>(ell - 1))));
}

std::size_t outer_radius(std::size_t ell, const AnalysisParams& p) {
  return static_cast<std::size_t>(std::ceil((1.0 + 2.0 * p.delta) * static_cast<double>(inner_radius(ell, p))));
}

std::size_t window_length_for(std::size_t ell, const AnalysisParams& p) {
  return inner_radius(ell, p) + outer_radius(ell, p) + 1;
}

namespace {

struct Scale {
  std::size_t ell;
  std::size_t inner;
  std::size_t outer;
};

// Smallest l for each distinct inner radius, while the outer bracket fits in [1, N].
std::vector<Scale> scales_for(std::size_t N, const AnalysisParams& p) {
  std::vector<Scale> out;
  for (std::size_t ell = 1;; ++ell) {
    const std::size_t in = inner_radius(ell, p);
    const std::size_t out_r = outer_radius(ell, p);
    if (2 * out_r + 1 > N) break;
    if (out.empty() || out.back().inner != in) out.push_back({ell, in, out_r});
  }
  return out;
}

std::size_t count_in(const std::vector<std::size_t>& pos, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(std::upper_bound(pos.begin(), pos.end(), hi) - std::lower_bound(pos.begin(), pos.end(), lo));
}

}  // namespace

std::vector<GoodIndex> good_indices(const OccurrenceIndex& I, std::size_t N, const AnalysisParams& p) {
  p.validate();
  const auto& pos = I.positions;
  if (pos.empty()) throw InvalidArgument("occurrence set is empty");
  for (std::size_t k = 0; k < pos.size(); ++k) {
    if (pos[k] < 1 || pos[k] > N || (k > 0 && pos[k] <= pos[k - 1])) {
      throw InvalidArgument("occurrence positions must be strictly increasing within [1, N]");
    }
  }
  const auto scales = scales_for(N, p);
  std::vector<GoodIndex> out;
  for (std::size_t i : pos) {
    for (const Scale& sc : scales) {
      if (i <= sc.outer || i + sc.outer > N) break;
      if (count_in(pos, i - sc.inner, i + sc.inner) >= p.t_low && count_in(pos, i - sc.outer, i + sc.outer) <= p.t_high) {
        out.push_back({i, sc.ell});
        break;
      }
    }
  }
  return out;
}

}  // namespace fliplab
