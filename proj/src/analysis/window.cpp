#include <algorithm>

#include "fliplab/analysis.hpp"

namespace fliplab {

std::map<NodeId, OccurrenceIndex> occurrence_indices(const MoveSequence& s) {
  std::map<NodeId, OccurrenceIndex> out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    for (NodeId x : {s[k].a, s[k].b}) {
      if (x < 0) continue;
      auto& idx = out[x];
      idx.node = x;
      idx.positions.push_back(k + 1);
    }
  }
  return out;
}

std::size_t upper_threshold(const MoveSequence& s, const AnalysisParams& p) {
  const bool pure = std::none_of(s.begin(), s.end(), [](const Move& m) { return m.is_one(); });
  return pure ? p.t_high : 2 * p.t_high;
}

namespace {

struct Counts {
  std::vector<std::size_t> all, two;

  explicit Counts(NodeId top) : all(static_cast<std::size_t>(top + 1), 0), two(static_cast<std::size_t>(top + 1), 0) {}

  void add(const Move& m, int sign) {
    for (NodeId x : {m.a, m.b}) {
      if (x < 0) continue;
      all[static_cast<std::size_t>(x)] += static_cast<std::size_t>(sign);
      if (m.is_two()) two[static_cast<std::size_t>(x)] += static_cast<std::size_t>(sign);
    }
  }

  bool qualifies(const Move& m, std::size_t lo, std::size_t hi) const {
    auto side = [&](NodeId u, NodeId v) {
      const auto uu = static_cast<std::size_t>(u), vv = static_cast<std::size_t>(v);
      return lo <= two[uu] && all[uu] <= hi && two[vv] >= lo;
    };
    return m.is_two() && (side(m.a, m.b) || side(m.b, m.a));
  }
};

NodeId top_node(const MoveSequence& s) {
  NodeId top = -1;
  for (const Move& m : s) top = std::max(top, m.max_node());
  return top;
}

}  // namespace

std::vector<std::size_t> qualifying_steps(const MoveSequence& w, std::size_t t_low, std::size_t t_high_prime) {
  Counts c(top_node(w));
  for (const Move& m : w) c.add(m, 1);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (c.qualifies(w[k], t_low, t_high_prime)) out.push_back(k + 1);
  }
  return out;
}

WindowSelection select_window(const MoveSequence& s, const AnalysisParams& p) {
  p.validate();
  WindowSelection out;
  std::vector<std::size_t> twos;  // steps of s holding 2-moves
  MoveSequence sp;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k].is_two()) {
      twos.push_back(k + 1);
      sp.push_back(s[k]);
    }
  }
  const std::size_t n2 = sp.size();
  if (n2 == 0) {
    out.not_found = Diagnostic{"select_window", "sequence has no 2-moves"};
    return out;
  }

  // smallest good scale of each 2-move for each endpoint
  std::vector<std::size_t> ell_a(n2, 0), ell_b(n2, 0);
  std::size_t skipped_rare = 0;
  for (const auto& [node, idx] : occurrence_indices(sp)) {
    if (idx.positions.size() < p.min_occurrences) {
      skipped_rare += idx.positions.size();
      continue;
    }
    for (const GoodIndex& g : good_indices(idx, n2, p)) {
      const Move& m = sp[g.i - 1];
      (m.a == node ? ell_a : ell_b)[g.i - 1] = g.ell;
    }
  }
  for (std::size_t k = 0; k < n2; ++k) {
    if (ell_a[k] && ell_b[k]) ++out.ell_histogram[std::max(ell_a[k], ell_b[k])];
  }
  if (out.ell_histogram.empty()) {
    out.not_found = Diagnostic{"select_window", "no 2-move is good for both endpoints at any scale (" +
                                                    std::to_string(n2) + " 2-moves, " + std::to_string(skipped_rare) +
                                                    " occurrences of rare nodes)"};
    return out;
  }
  std::size_t best_ell = 0, best_count = 0;
  for (const auto& [ell, cnt] : out.ell_histogram) {
    if (cnt > best_count) {
      best_ell = ell;
      best_count = cnt;
    }
  }
  out.ell = best_ell;
  out.length = std::min(window_length_for(best_ell, p), n2);

  const std::size_t hi = upper_threshold(s, p);
  Counts c(top_node(s));
  std::size_t best_q = 0, best_start = 0;
  // slide over windows of `length` 2-moves, each mapped to the span of s
  // from its first to its last 2-move
  std::size_t lo_step = 0, hi_step = 0;  // current span in s, 1-based inclusive; empty when 0
  for (std::size_t a = 0; a + out.length <= n2; ++a) {
    const std::size_t first = twos[a], last = twos[a + out.length - 1];
    if (hi_step == 0) {
      for (std::size_t k = first; k <= last; ++k) c.add(s[k - 1], 1);
    } else {
      for (std::size_t k = hi_step + 1; k <= last; ++k) c.add(s[k - 1], 1);
      for (std::size_t k = lo_step; k < first; ++k) c.add(s[k - 1], -1);
    }
    lo_step = first;
    hi_step = last;
    std::size_t q = 0;
    for (std::size_t k = first; k <= last; ++k) {
      if (c.qualifies(s[k - 1], p.t_low, hi)) ++q;
    }
    if (q > best_q) {
      best_q = q;
      best_start = a;
    }
  }
  if (best_q == 0) {
    out.not_found = Diagnostic{"select_window", "no window of " + std::to_string(out.length) +
                                                    " 2-moves has a qualifying move (scale " + std::to_string(best_ell) +
                                                    ")"};
    return out;
  }
  const std::size_t first = twos[best_start], last = twos[best_start + out.length - 1];
  out.window = Window{first, last - first + 1};
  for (std::size_t k : qualifying_steps(slice(s, out.window), p.t_low, hi)) out.qualifying.push_back(first + k - 1);
  out.found = true;
  return out;
}

}  // namespace fliplab
