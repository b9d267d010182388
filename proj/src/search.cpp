#include "fliplab/search.hpp"

#include <algorithm>
#include <cmath>

#include "engine.hpp"

namespace fliplab {

std::string to_string(EngineKind e) {
  switch (e) {
    case EngineKind::OneFlip: return "one-flip";
    case EngineKind::TwoFlip: return "two-flip";
    case EngineKind::PureTwoFlip: return "pure-two-flip";
    case EngineKind::Swap: return "swap";
  }
  return "?";
}

EngineKind parse_engine(const std::string& s) {
  for (EngineKind e : kAllEngines) {
    if (s == to_string(e)) return e;
  }
  throw InvalidArgument("unknown engine '" + s + "' (one-flip, two-flip, pure-two-flip, swap)");
}

PivotRule PivotRule::parse(const std::string& s, std::uint64_t seed) {
  PivotRule r;
  r.seed = seed;
  std::string base = s;
  const std::string prefix = "one-then-two:";
  if (base.rfind(prefix, 0) == 0) {
    r.one_then_two = true;
    base = base.substr(prefix.size());
  }
  if (base == "best") r.selection = Selection::Best;
  else if (base == "first") r.selection = Selection::First;
  else if (base == "first-cyclic") {
    r.selection = Selection::First;
    r.order = ScanOrder::Cyclic;
  } else if (base == "random") r.selection = Selection::Random;
  else throw InvalidArgument("unknown pivot rule '" + s + "'");
  return r;
}

std::string PivotRule::name() const {
  std::string base;
  switch (selection) {
    case Selection::Best: base = "best"; break;
    case Selection::First: base = order == ScanOrder::Cyclic ? "first-cyclic" : "first"; break;
    case Selection::Random: base = "random"; break;
  }
  return one_then_two ? "one-then-two:" + base : base;
}

std::vector<std::string> all_rule_names() {
  std::vector<std::string> out;
  for (const char* base : {"best", "first", "first-cyclic", "random"}) {
    out.emplace_back(base);
    out.push_back(std::string("one-then-two:") + base);
  }
  return out;
}

std::string to_string(RunStatus s) { return s == RunStatus::LocalOpt ? "local-opt" : "cap-reached"; }

RunStatus parse_status(const std::string& s) {
  if (s == "local-opt") return RunStatus::LocalOpt;
  if (s == "cap-reached") return RunStatus::CapReached;
  throw InvalidArgument("unknown run status '" + s + "'");
}

MoveSequence Trace::moves() const {
  MoveSequence out;
  out.reserve(steps.size());
  for (const auto& st : steps) out.push_back(st.move);
  return out;
}

std::vector<double> Trace::deltas() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& st : steps) out.push_back(st.delta);
  return out;
}

namespace {

class MaxCutGains {
 public:
  MaxCutGains(const EdgeWeights& w, const Configuration& gamma) : w_(w), gamma_(gamma), g_(w.n()) {
    if (gamma.size() != w.n()) throw DimensionMismatch("configuration length differs from instance size");
    refresh();
  }

  std::size_t n() const { return w_.n(); }
  const Configuration& config() const { return gamma_; }
  double gain1(NodeId u) const { return g_[static_cast<std::size_t>(u)]; }
  double pair_term(NodeId u, NodeId v) const { return static_cast<double>(-2 * gamma_[u] * gamma_[v]) * w_.at(u, v); }

  void flip(NodeId u) {
    const int su = gamma_[u];
    for (NodeId x = 0; static_cast<std::size_t>(x) < n(); ++x) {
      if (x == u) continue;
      g_[static_cast<std::size_t>(x)] += static_cast<double>(-2 * gamma_[x] * su) * w_.at(x, u);
    }
    g_[static_cast<std::size_t>(u)] = -g_[static_cast<std::size_t>(u)];
    gamma_.flip(u);
  }

  void refresh() {
    for (NodeId u = 0; static_cast<std::size_t>(u) < n(); ++u) {
      double g = 0.0;
      for (NodeId x = 0; static_cast<std::size_t>(x) < n(); ++x) {
        if (x != u) g += static_cast<double>(gamma_[x] * gamma_[u]) * w_.at(u, x);
      }
      g_[static_cast<std::size_t>(u)] = g;
    }
  }

 private:
  const EdgeWeights& w_;
  Configuration gamma_;
  std::vector<double> g_;
};

}  // namespace

Trace run(const EdgeWeights& weights, const Configuration& gamma0, EngineKind engine, const PivotRule& rule,
          std::int64_t step_cap) {
  detail::check_engine_start(engine, gamma0);
  if (step_cap < 0) throw InvalidArgument("step cap must be non-negative");
  MaxCutGains model(weights, gamma0);
  detail::Engine<MaxCutGains> eng(model, engine, rule);
  return eng.run(step_cap);
}

Trace run_bisection(const EdgeWeights& weights, const Configuration& gamma0, const PivotRule& rule,
                    std::int64_t step_cap) {
  return run(weights.negated(), gamma0, EngineKind::Swap, rule, step_cap);
}

bool is_local_optimum(const EdgeWeights& weights, const Configuration& gamma, EngineKind engine) {
  const auto n = static_cast<NodeId>(weights.n());
  if (gamma.size() != weights.n()) throw DimensionMismatch("configuration length differs from instance size");
  if (engine == EngineKind::OneFlip || engine == EngineKind::TwoFlip) {
    for (NodeId u = 0; u < n; ++u) {
      if (move_delta(weights, gamma, Move::one(u)) > 0) return false;
    }
  }
  if (engine == EngineKind::OneFlip) return true;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (engine == EngineKind::Swap && gamma[u] == gamma[v]) continue;
      if (move_delta(weights, gamma, Move::two(u, v)) > 0) return false;
    }
  }
  return true;
}

std::vector<Window> epsilon_scan(const std::vector<double>& deltas, double eps) {
  std::vector<Window> out;
  std::size_t i = 0;
  while (i < deltas.size()) {
    if (!(deltas[i] > 0 && deltas[i] <= eps)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < deltas.size() && deltas[j] > 0 && deltas[j] <= eps) ++j;
    out.push_back({i + 1, j - i});
    i = j;
  }
  return out;
}

std::vector<Window> epsilon_scan(const Trace& trace, double eps) { return epsilon_scan(trace.deltas(), eps); }

double length_budget(std::size_t n, double eps, double window_len) {
  if (!(eps > 0)) throw InvalidArgument("eps must be positive");
  const double nn = static_cast<double>(n);
  return window_len * 2.0 * nn * nn / eps;
}

Configuration random_configuration(std::size_t n, std::uint64_t seed, bool balanced) {
  StreamRng rng(seed, 1);
  std::vector<int> signs(n, -1);
  if (!balanced) {
    for (auto& x : signs) x = rng.uniform() < 0.5 ? -1 : 1;
    return Configuration(std::move(signs));
  }
  if (n % 2 != 0) throw InvalidArgument("a balanced configuration needs an even number of nodes");
  std::fill(signs.begin(), signs.begin() + static_cast<std::ptrdiff_t>(n / 2), 1);
  std::shuffle(signs.begin(), signs.end(), rng);
  return Configuration(std::move(signs));
}

}  // namespace fliplab
