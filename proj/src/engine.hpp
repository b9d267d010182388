#pragma once

// Pivot-rule driven local search over a gain model. A gain model keeps the
// 1-move gains of the current configuration and exposes:
//   n(), config(), gain1(u), pair_term(u, v), flip(u), refresh().
// The 2-move gain is (gain1(u) + gain1(v)) + pair_term(u, v), evaluated in
// that order by every model so that equivalent models yield identical traces.

#include <cstdint>
#include <optional>
#include <vector>

#include "fliplab/rng.hpp"
#include "fliplab/search.hpp"

namespace fliplab::detail {

inline constexpr std::uint64_t kRefreshPeriod = std::uint64_t{1} << 16;
inline constexpr std::uint64_t kPivotStream = 0x70697665ULL;

struct Candidate {
  Move move;
  double delta;
  std::size_t index;  // position in the fixed enumeration
};

template <class Model>
class Engine {
 public:
  Engine(Model& model, EngineKind kind, const PivotRule& rule)
      : m_(model), kind_(kind), rule_(rule), rng_(rule.seed, kPivotStream) {}

  std::optional<Candidate> next() {
    const bool ones = kind_ == EngineKind::OneFlip || kind_ == EngineKind::TwoFlip;
    const bool twos = kind_ != EngineKind::OneFlip;
    if (rule_.one_then_two && ones && twos) {
      if (auto c = choose(true, false)) return c;
      return choose(false, true);
    }
    return choose(ones, twos);
  }

  void take(const Candidate& c) {
    m_.flip(c.move.a);
    if (c.move.is_two()) m_.flip(c.move.b);
    last_ = c.index;
    if (++since_refresh_ == kRefreshPeriod) {
      m_.refresh();
      since_refresh_ = 0;
    }
  }

  Trace run(std::int64_t step_cap) {
    if (step_cap < 0) throw InvalidArgument("step cap must be non-negative");
    Trace t;
    t.n = m_.n();
    t.gamma0 = m_.config();
    t.engine = kind_;
    t.rule = rule_.name();
    t.seed = rule_.seed;
    for (std::int64_t k = 0; k < step_cap; ++k) {
      auto c = next();
      if (!c) {
        t.status = RunStatus::LocalOpt;
        return t;
      }
      t.steps.push_back({c->move, c->delta});
      take(*c);
    }
    t.status = next() ? RunStatus::CapReached : RunStatus::LocalOpt;
    return t;
  }

 private:
  std::size_t n() const { return m_.n(); }
  std::size_t total() const { return n() + n() * (n() - 1) / 2; }

  Move move_at(std::size_t idx) const {
    if (idx < n()) return Move::one(static_cast<NodeId>(idx));
    return Move::two(pair_lo_[idx - n()], pair_hi_[idx - n()]);
  }

  // Gain of the move if it is allowed and strictly improving.
  std::optional<double> score(std::size_t idx, bool ones, bool twos) const {
    const std::size_t nn = n();
    if (idx < nn) {
      if (!ones) return std::nullopt;
      const double g = m_.gain1(static_cast<NodeId>(idx));
      if (g > 0) return g;
      return std::nullopt;
    }
    if (!twos) return std::nullopt;
    const NodeId u = pair_lo_[idx - nn];
    const NodeId v = pair_hi_[idx - nn];
    if (kind_ == EngineKind::Swap && m_.config()[u] == m_.config()[v]) return std::nullopt;
    const double gu = m_.gain1(u);
    const double gv = m_.gain1(v);
    const double d = (gu + gv) + m_.pair_term(u, v);
    if (!(d > 0)) return std::nullopt;
    if (kind_ == EngineKind::TwoFlip && (gu > d || gv > d)) return std::nullopt;
    return d;
  }

  void build_pairs() {
    if (!pair_lo_.empty() || n() < 2) return;
    for (std::size_t u = 0; u < n(); ++u) {
      for (std::size_t v = u + 1; v < n(); ++v) {
        pair_lo_.push_back(static_cast<NodeId>(u));
        pair_hi_.push_back(static_cast<NodeId>(v));
      }
    }
  }

  std::optional<Candidate> choose(bool ones, bool twos) {
    if (twos) build_pairs();
    const std::size_t lo = ones ? 0 : n();
    const std::size_t hi = twos ? total() : n();
    if (lo >= hi) return std::nullopt;
    switch (rule_.selection) {
      case Selection::Best: {
        std::optional<Candidate> best;
        for (std::size_t i = lo; i < hi; ++i) {
          auto d = score(i, ones, twos);
          if (d && (!best || *d > best->delta)) best = Candidate{Move{}, *d, i};
        }
        if (best) best->move = move_at(best->index);
        return best;
      }
      case Selection::First: {
        const std::size_t span = hi - lo;
        std::size_t start = lo;
        if (rule_.order == ScanOrder::Cyclic && last_ && *last_ + 1 > lo && *last_ + 1 < hi) start = *last_ + 1;
        for (std::size_t k = 0; k < span; ++k) {
          const std::size_t i = lo + (start - lo + k) % span;
          if (auto d = score(i, ones, twos)) return Candidate{move_at(i), *d, i};
        }
        return std::nullopt;
      }
      case Selection::Random: {
        pool_.clear();
        for (std::size_t i = lo; i < hi; ++i) {
          if (auto d = score(i, ones, twos)) pool_.push_back({Move{}, *d, i});
        }
        if (pool_.empty()) return std::nullopt;
        Candidate c = pool_[rng_.below(pool_.size())];
        c.move = move_at(c.index);
        return c;
      }
    }
    return std::nullopt;
  }

  Model& m_;
  EngineKind kind_;
  PivotRule rule_;
  StreamRng rng_;
  std::optional<std::size_t> last_;
  std::uint64_t since_refresh_ = 0;
  std::vector<NodeId> pair_lo_, pair_hi_;
  std::vector<Candidate> pool_;
};

inline void check_engine_start(EngineKind kind, const Configuration& gamma0) {
  if (kind != EngineKind::Swap) return;
  if (gamma0.size() % 2 != 0) throw InvalidArgument("swap needs an even number of nodes");
  if (gamma0.balance() != 0) throw InvalidArgument("swap needs a balanced initial configuration");
}

}  // namespace fliplab::detail
