#include "fliplab/csp.hpp"

#include <algorithm>
#include <cmath>

#include "engine.hpp"

namespace fliplab {

void BFOPInstance::validate() const {
  if (d < 1) throw InvalidArgument("function value bound d must be at least 1");
  auto check_var = [&](NodeId x) {
    if (x < 0 || static_cast<std::size_t>(x) >= n) {
      throw InvalidArgument("variable " + std::to_string(x) + " outside 0.." + std::to_string(n) + "-1");
    }
  };
  auto check_weight = [](double w) {
    if (!(w >= -1.0 && w <= 1.0)) throw InvalidArgument("function weight outside [-1, 1]");
  };
  for (std::size_t k = 0; k < functions.size(); ++k) {
    const auto& f = functions[k];
    check_var(f.x);
    check_var(f.y);
    if (f.x == f.y) throw InvalidArgument("function " + std::to_string(k) + " has equal arguments");
    for (auto v : f.table) {
      if (v < 0 || v > d) throw InvalidArgument("function " + std::to_string(k) + " has a value outside [0, d]");
    }
    check_weight(f.weight);
  }
  for (const auto& f : unary) {
    check_var(f.x);
    for (auto v : f.table) {
      if (v < -d || v > d) throw InvalidArgument("unary function value outside [-d, d]");
    }
    check_weight(f.weight);
  }
}

Separation is_separable(const BinaryFunction& f) {
  Separation s;
  const auto& t = f.table;
  s.separable = t[0] + t[3] == t[1] + t[2];
  if (!s.separable) return s;
  UnaryFunction f1{f.x, {f.value(-1, -1), f.value(1, -1)}, f.weight};
  UnaryFunction f2{f.y, {0, f.value(-1, 1) - f.value(-1, -1)}, f.weight};
  s.parts = std::make_pair(f1, f2);
  return s;
}

bool BFOPInstance::complete() const {
  std::vector<char> seen(edge_count(n), 0);
  for (const auto& f : functions) {
    if (!is_separable(f).separable) seen[edge_index(n, EdgeKey::of(f.x, f.y))] = 1;
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

BFOPInstance decompose(const BFOPInstance& inst) {
  BFOPInstance out;
  out.n = inst.n;
  out.d = inst.d;
  out.unary = inst.unary;
  for (const auto& f : inst.functions) {
    const Separation s = is_separable(f);
    if (!s.separable) {
      out.functions.push_back(f);
      continue;
    }
    for (const UnaryFunction& u : {s.parts->first, s.parts->second}) {
      if (u.table[0] != 0 || u.table[1] != 0) out.unary.push_back(u);
    }
  }
  return out;
}

double bfop_objective(const BFOPInstance& inst, const Configuration& a) {
  if (a.size() != inst.n) throw DimensionMismatch("assignment length differs from variable count");
  double total = 0.0;
  for (const auto& f : inst.functions) total += f.weight * static_cast<double>(f.value(a[f.x], a[f.y]));
  for (const auto& f : inst.unary) total += f.weight * static_cast<double>(f.value(a[f.x]));
  return total;
}

double bfop_move_delta(const BFOPInstance& inst, const Configuration& a, const Move& m) {
  if (a.size() != inst.n) throw DimensionMismatch("assignment length differs from variable count");
  check_moves_in_range({m}, inst.n);
  auto after = [&](NodeId x) { return m.contains(x) ? -a[x] : a[x]; };
  double delta = 0.0;
  for (const auto& f : inst.functions) {
    if (!m.contains(f.x) && !m.contains(f.y)) continue;
    delta += f.weight * static_cast<double>(f.value(after(f.x), after(f.y)) - f.value(a[f.x], a[f.y]));
  }
  for (const auto& f : inst.unary) {
    if (m.contains(f.x)) delta += f.weight * static_cast<double>(f.value(-a[f.x]) - f.value(a[f.x]));
  }
  return delta;
}

namespace {

// Same arithmetic as the Max-Cut gain model: for the not-equal encoding every
// product and sum below matches it operation for operation.
class BfopGains {
 public:
  BfopGains(const BFOPInstance& inst, const Configuration& gamma)
      : inst_(inst), gamma_(gamma), g_(inst.n), inc_(inst.n), unary_(inst.n) {
    if (gamma.size() != inst.n) throw DimensionMismatch("assignment length differs from variable count");
    for (std::size_t k = 0; k < inst.functions.size(); ++k) {
      inc_[static_cast<std::size_t>(inst.functions[k].x)].push_back(k);
      inc_[static_cast<std::size_t>(inst.functions[k].y)].push_back(k);
    }
    for (std::size_t k = 0; k < inst.unary.size(); ++k) unary_[static_cast<std::size_t>(inst.unary[k].x)].push_back(k);
    // functions grouped by argument pair
    pair_start_.assign(edge_count(inst.n) + 1, 0);
    for (const auto& f : inst.functions) ++pair_start_[edge_index(inst.n, EdgeKey::of(f.x, f.y)) + 1];
    for (std::size_t e = 1; e < pair_start_.size(); ++e) pair_start_[e] += pair_start_[e - 1];
    pair_fn_.resize(inst.functions.size());
    std::vector<std::size_t> fill(pair_start_.begin(), pair_start_.end() - 1);
    for (std::size_t k = 0; k < inst.functions.size(); ++k) {
      pair_fn_[fill[edge_index(inst.n, EdgeKey::of(inst.functions[k].x, inst.functions[k].y))]++] = k;
    }
    refresh();
  }

  std::size_t n() const { return inst_.n; }
  const Configuration& config() const { return gamma_; }
  double gain1(NodeId u) const { return g_[static_cast<std::size_t>(u)]; }

  double pair_term(NodeId u, NodeId v) const {
    const std::size_t e = edge_index(inst_.n, EdgeKey::of(u, v));
    double t = 0.0;
    for (std::size_t q = pair_start_[e]; q < pair_start_[e + 1]; ++q) {
      const auto& f = inst_.functions[pair_fn_[q]];
      const int sx = gamma_[f.x], sy = gamma_[f.y];
      const std::int64_t c = f.value(-sx, -sy) - f.value(-sx, sy) - f.value(sx, -sy) + f.value(sx, sy);
      const double term = static_cast<double>(c) * f.weight;
      t = q == pair_start_[e] ? term : t + term;
    }
    return t;
  }

  void flip(NodeId u) {
    for (std::size_t k : inc_[static_cast<std::size_t>(u)]) {
      const auto& f = inst_.functions[k];
      const NodeId x = f.x == u ? f.y : f.x;
      const std::int64_t before = change(f, x);
      gamma_.flip(u);
      const std::int64_t after = change(f, x);
      gamma_.flip(u);
      g_[static_cast<std::size_t>(x)] += static_cast<double>(after - before) * f.weight;
    }
    g_[static_cast<std::size_t>(u)] = -g_[static_cast<std::size_t>(u)];
    gamma_.flip(u);
  }

  void refresh() {
    for (std::size_t u = 0; u < n(); ++u) {
      double g = 0.0;
      for (std::size_t k : inc_[u]) {
        g += static_cast<double>(change(inst_.functions[k], static_cast<NodeId>(u))) * inst_.functions[k].weight;
      }
      for (std::size_t k : unary_[u]) {
        const auto& f = inst_.unary[k];
        g += static_cast<double>(f.value(-gamma_[f.x]) - f.value(gamma_[f.x])) * f.weight;
      }
      g_[u] = g;
    }
  }

 private:
  // Value change of f when variable x flips.
  std::int64_t change(const BinaryFunction& f, NodeId x) const {
    const int sx = gamma_[f.x], sy = gamma_[f.y];
    return (f.x == x ? f.value(-sx, sy) : f.value(sx, -sy)) - f.value(sx, sy);
  }

  const BFOPInstance& inst_;
  Configuration gamma_;
  std::vector<double> g_;
  std::vector<std::vector<std::size_t>> inc_, unary_;
  std::vector<std::size_t> pair_start_, pair_fn_;
};

}  // namespace

Trace bfop_run(const BFOPInstance& inst, const Configuration& assignment0, const PivotRule& rule,
               std::int64_t step_cap, EngineKind engine) {
  inst.validate();
  detail::check_engine_start(engine, assignment0);
  if (step_cap < 0) throw InvalidArgument("step cap must be non-negative");
  BfopGains model(inst, assignment0);
  detail::Engine<BfopGains> eng(model, engine, rule);
  return eng.run(step_cap);
}

bool bfop_is_local_optimum(const BFOPInstance& inst, const Configuration& a, EngineKind engine) {
  const auto n = static_cast<NodeId>(inst.n);
  if (engine == EngineKind::OneFlip || engine == EngineKind::TwoFlip) {
    for (NodeId u = 0; u < n; ++u) {
      if (bfop_move_delta(inst, a, Move::one(u)) > 0) return false;
    }
  }
  if (engine == EngineKind::OneFlip) return true;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (engine == EngineKind::Swap && a[u] == a[v]) continue;
      if (bfop_move_delta(inst, a, Move::two(u, v)) > 0) return false;
    }
  }
  return true;
}

namespace {

FunctionVector step_vector(const BFOPInstance& inst, const Configuration& before, const Move& m) {
  FunctionVector v;
  auto after = [&](NodeId x) { return m.contains(x) ? -before[x] : before[x]; };
  for (std::size_t k = 0; k < inst.functions.size(); ++k) {
    const auto& f = inst.functions[k];
    if (!m.contains(f.x) && !m.contains(f.y)) continue;
    v.add(k, f.value(after(f.x), after(f.y)) - f.value(before[f.x], before[f.y]));
  }
  return v;
}

}  // namespace

FunctionVector bfop_improvement_vector(const BFOPInstance& inst, const Configuration& gamma0, const MoveSequence& s,
                                       std::size_t i) {
  return bfop_combination(inst, gamma0, s, {i}, {1});
}

FunctionVector bfop_combination(const BFOPInstance& inst, const Configuration& gamma0, const MoveSequence& s,
                                const std::vector<std::size_t>& steps, const std::vector<int>& coefficients) {
  if (gamma0.size() != inst.n) throw DimensionMismatch("assignment length differs from variable count");
  if (steps.size() != coefficients.size()) throw DimensionMismatch("one coefficient per step is needed");
  check_moves_in_range(s, inst.n);
  std::map<std::size_t, std::int64_t> want;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (steps[k] < 1 || steps[k] > s.size()) throw InvalidArgument("step " + std::to_string(steps[k]) + " out of range");
    want[steps[k]] += coefficients[k];
  }
  FunctionVector out;
  Configuration g = gamma0;
  for (std::size_t i = 1; i <= want.rbegin()->first; ++i) {
    const Move& m = s[i - 1];
    if (auto it = want.find(i); it != want.end()) out.add(step_vector(inst, g, m), it->second);
    g.flip(m.a);
    if (m.is_two()) g.flip(m.b);
  }
  return out;
}

double dot(const FunctionVector& v, const BFOPInstance& inst) {
  double total = 0.0;
  for (const auto& [k, x] : v.entries()) total += static_cast<double>(x) * inst.functions.at(k).weight;
  return total;
}

BFOPInstance maxcut_as_bfop(const EdgeWeights& w) {
  BFOPInstance inst;
  inst.n = w.n();
  inst.d = 1;
  for (std::size_t k = 0; k < edge_count(w.n()); ++k) {
    const EdgeKey e = edge_at(w.n(), k);
    inst.functions.push_back({e.lo, e.hi, {0, 1, 1, 0}, w.at(e)});
  }
  return inst;
}

EdgeVector function_to_edge_vector(std::size_t n, const FunctionVector& v) {
  EdgeVector out;
  for (const auto& [k, x] : v.entries()) {
    if (k >= edge_count(n)) throw DimensionMismatch("function index exceeds the pair count");
    out.add(edge_at(n, k), x);
  }
  return out;
}

}  // namespace fliplab
