#include "fliplab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <tuple>

#include "rank_accumulator.hpp"

namespace fliplab {

Replay::Replay(const MoveSequence& s, std::vector<int> initial) : s_(&s), init_(std::move(initial)) {
  occ_.resize(init_.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    for (NodeId x : {s[k].a, s[k].b}) {
      if (x < 0) continue;
      if (static_cast<std::size_t>(x) >= init_.size()) {
        throw DimensionMismatch("node " + std::to_string(x) + " has no initial sign");
      }
      occ_[static_cast<std::size_t>(x)].push_back(k + 1);
    }
  }
}

Replay::Replay(const MoveSequence& s, const Configuration& gamma0) : Replay(s, gamma0.to_vector()) {}

namespace {

std::vector<int> table_of(const PartialConfiguration& tau0) {
  const auto act = tau0.active();
  std::vector<int> t(act.empty() ? 0 : static_cast<std::size_t>(act.back()) + 1, -1);
  for (NodeId u : act) t[static_cast<std::size_t>(u)] = tau0[u];
  return t;
}

}  // namespace

Replay::Replay(const MoveSequence& s, const PartialConfiguration& tau0) : Replay(s, table_of(tau0)) {
  for (const Move& m : s) {
    if (!tau0.contains(m.a) || (m.is_two() && !tau0.contains(m.b))) {
      throw DimensionMismatch("tau0 does not cover every active node");
    }
  }
}

int Replay::sign_after(NodeId u, std::size_t i) const {
  const auto& o = occ_[static_cast<std::size_t>(u)];
  const auto c = std::upper_bound(o.begin(), o.end(), i) - o.begin();
  const int s = init_[static_cast<std::size_t>(u)];
  return (c % 2 == 0) ? s : -s;
}

const std::vector<std::size_t>& Replay::occurrences(NodeId u) const { return occ_[static_cast<std::size_t>(u)]; }

std::size_t Replay::count_between(NodeId u, std::size_t lo, std::size_t hi) const {
  if (hi < lo) return 0;
  const auto& o = occ_[static_cast<std::size_t>(u)];
  return static_cast<std::size_t>(std::upper_bound(o.begin(), o.end(), hi) - std::lower_bound(o.begin(), o.end(), lo));
}

namespace {

// out += scale * imprv(i), restricted to edges with both ends in `universe`
// (which must contain the nodes of S_i).
void add_move(EdgeVector& out, const Replay& r, std::size_t i, const std::vector<NodeId>& universe,
              std::int64_t scale) {
  const MoveSequence& s = r.moves();
  if (i < 1 || i > s.size()) throw InvalidArgument("step " + std::to_string(i) + " out of range");
  const Move& m = s[i - 1];
  for (NodeId u : {m.a, m.b}) {
    if (u < 0) continue;
    const int su = r.sign_after(u, i - 1);
    for (NodeId w : universe) {
      if (m.contains(w)) continue;
      out.add(EdgeKey::of(u, w), scale * su * r.sign_after(w, i - 1));
    }
  }
}

std::vector<NodeId> iota_nodes(std::size_t n) {
  std::vector<NodeId> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = static_cast<NodeId>(k);
  return v;
}

void check_full(const MoveSequence& s, const Configuration& gamma0) { check_moves_in_range(s, gamma0.size()); }

}  // namespace

EdgeVector move_vector(const MoveSequence& s, const Configuration& gamma0, std::size_t i) {
  check_full(s, gamma0);
  Replay r(s, gamma0);
  EdgeVector out;
  add_move(out, r, i, iota_nodes(gamma0.size()), 1);
  return out;
}

EdgeVector move_vector(const MoveSequence& s, const PartialConfiguration& tau0, std::size_t i) {
  Replay r(s, tau0);
  EdgeVector out;
  add_move(out, r, i, active_nodes(s), 1);
  return out;
}

EdgeVector project_active(const EdgeVector& v, const MoveSequence& s) {
  const auto act = active_nodes(s);
  auto in = [&](NodeId x) { return std::binary_search(act.begin(), act.end(), x); };
  EdgeVector out;
  for (const auto& [e, x] : v.entries()) {
    if (in(e.lo) && in(e.hi)) out.add(e, x);
  }
  return out;
}

double dot(const EdgeVector& v, const EdgeWeights& w) {
  double s = 0.0;
  for (const auto& [e, x] : v.entries()) s += static_cast<double>(x) * w.at(e);
  return s;
}

std::vector<Arc> enumerate_arcs(const MoveSequence& s) {
  std::vector<Arc> out;
  std::map<NodeId, std::size_t> last;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!s[k].is_one()) continue;
    auto [it, fresh] = last.try_emplace(s[k].a, k + 1);
    if (!fresh) {
      out.push_back({it->second, k + 1, s[k].a});
      it->second = k + 1;
    }
  }
  std::sort(out.begin(), out.end(), [](const Arc& x, const Arc& y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });
  return out;
}

namespace {

void check_arc(const MoveSequence& s, const Arc& a) {
  if (!(a.i >= 1 && a.i < a.j && a.j <= s.size())) throw InvalidArgument("arc steps out of range");
  const Move one = Move::one(a.node);
  if (s[a.i - 1] != one || s[a.j - 1] != one) throw InvalidArgument("arc endpoints must be 1-moves of its node");
  for (std::size_t k = a.i + 1; k < a.j; ++k) {
    if (s[k - 1] == one) throw InvalidArgument("arc skips an intermediate 1-move of its node");
  }
}

EdgeVector arc_combination(const MoveSequence& s, const Replay& r, const Arc& a, const std::vector<NodeId>& universe) {
  check_arc(s, a);
  EdgeVector out;
  add_move(out, r, a.i, universe, r.sign_after(a.node, a.i));
  add_move(out, r, a.j, universe, -r.sign_after(a.node, a.j));
  return out;
}

}  // namespace

EdgeVector arc_vector(const MoveSequence& s, const PartialConfiguration& tau0, const Arc& arc) {
  Replay r(s, tau0);
  return arc_combination(s, r, arc, active_nodes(s));
}

EdgeVector arc_vector(const MoveSequence& s, const Configuration& gamma0, const Arc& arc) {
  check_full(s, gamma0);
  Replay r(s, gamma0);
  return arc_combination(s, r, arc, iota_nodes(gamma0.size()));
}

void check_cycle(const MoveSequence& s, const Cycle& c) {
  const std::size_t t = c.steps.size();
  if (t < 2 || c.nodes.size() != t) throw InvalidArgument("cycle needs t >= 2 steps and t nodes");
  std::set<std::size_t> seen;
  for (std::size_t j = 0; j < t; ++j) {
    const std::size_t step = c.steps[j];
    if (step < 1 || step > s.size()) throw InvalidArgument("cycle step out of range");
    if (!seen.insert(step).second) throw InvalidArgument("cycle steps must be distinct");
    const Move& m = s[step - 1];
    if (!m.is_two()) throw InvalidArgument("cycle steps must be 2-moves");
    const NodeId x = c.nodes[j];
    const NodeId y = c.nodes[(j + 1) % t];
    if (x == y || m != Move::two(x, y)) {
      throw InvalidArgument("step " + std::to_string(step) + " does not join cycle nodes " + std::to_string(x) +
                            " and " + std::to_string(y));
    }
  }
}

namespace {

Dependence dependence_with(const Replay& r, const Cycle& c) {
  const std::size_t t = c.steps.size();
  std::vector<int> b(t);
  b[0] = 1;
  for (std::size_t j = 0; j + 1 < t; ++j) {
    const NodeId u = c.nodes[j + 1];
    b[j + 1] = -b[j] * r.sign_after(u, c.steps[j]) * r.sign_after(u, c.steps[j + 1]);
  }
  const NodeId u1 = c.nodes[0];
  if (b[t - 1] * r.sign_after(u1, c.steps[t - 1]) + b[0] * r.sign_after(u1, c.steps[0]) != 0) return {};
  return {true, std::move(b)};
}

EdgeVector cycle_combination(const Replay& r, const Cycle& c, const std::vector<int>& b,
                             const std::vector<NodeId>& universe) {
  if (b.size() != c.steps.size()) throw DimensionMismatch("cancellation vector length differs from cycle length");
  EdgeVector out;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j] != 1 && b[j] != -1) throw InvalidArgument("cancellation vector entries must be +1 or -1");
    add_move(out, r, c.steps[j], universe, b[j]);
  }
  return out;
}

}  // namespace

Dependence is_dependent(const MoveSequence& s, const Cycle& c, const PartialConfiguration& tau0) {
  check_cycle(s, c);
  return dependence_with(Replay(s, tau0), c);
}

Dependence is_dependent(const MoveSequence& s, const Cycle& c) { return is_dependent(s, c, default_tau0(s)); }

EdgeVector cycle_vector(const MoveSequence& s, const PartialConfiguration& tau0, const Cycle& c,
                        const std::vector<int>& b) {
  check_cycle(s, c);
  return cycle_combination(Replay(s, tau0), c, b, active_nodes(s));
}

EdgeVector cycle_vector(const MoveSequence& s, const Configuration& gamma0, const Cycle& c, const std::vector<int>& b) {
  check_cycle(s, c);
  check_full(s, gamma0);
  return cycle_combination(Replay(s, gamma0), c, b, iota_nodes(gamma0.size()));
}

PartialConfiguration default_tau0(const MoveSequence& s) { return PartialConfiguration::uniform(active_nodes(s), -1); }

std::string edge_label(EdgeKey e) { return "(" + std::to_string(e.lo) + "," + std::to_string(e.hi) + ")"; }

IntegerMatrix matrix_on_rows(const std::vector<EdgeVector>& vectors, const std::vector<EdgeKey>& row_keys) {
  IntegerMatrix m(row_keys.size(), vectors.size());
  for (const EdgeKey& e : row_keys) m.row_labels.push_back(edge_label(e));
  for (std::size_t c = 0; c < vectors.size(); ++c) {
    m.col_labels.push_back("v" + std::to_string(c + 1));
    for (std::size_t r = 0; r < row_keys.size(); ++r) m.at(r, c) = vectors[c].at(row_keys[r]);
  }
  return m;
}

IntegerMatrix matrix_from_vectors(const std::vector<EdgeVector>& vectors) {
  std::set<EdgeKey> keys;
  for (const auto& v : vectors) {
    for (const auto& [e, x] : v.entries()) keys.insert(e);
  }
  return matrix_on_rows(vectors, {keys.begin(), keys.end()});
}

std::size_t exact_rank(const IntegerMatrix& m) {
  if (m.data.size() != m.rows * m.cols) throw DimensionMismatch("matrix storage does not match its shape");
  const std::size_t R = m.rows, C = m.cols;
  std::vector<mpz_class> a(m.data.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = static_cast<long>(m.data[k]);
  auto A = [&](std::size_t r, std::size_t c) -> mpz_class& { return a[r * C + c]; };
  mpz_class prev = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < C && rank < R; ++c) {
    std::size_t p = rank;
    while (p < R && sgn(A(p, c)) == 0) ++p;
    if (p == R) continue;
    if (p != rank) {
      for (std::size_t j = 0; j < C; ++j) std::swap(A(p, j), A(rank, j));
    }
    const mpz_class piv = A(rank, c);
    for (std::size_t i = rank + 1; i < R; ++i) {
      const mpz_class f = A(i, c);
      for (std::size_t j = c + 1; j < C; ++j) {
        mpz_class x = piv * A(i, j) - f * A(rank, j);
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
        A(i, j) = std::move(x);
      }
      A(i, c) = 0;
    }
    prev = piv;
    ++rank;
  }
  return rank;
}

bool is_lower_triangular_nonzero_diagonal(const IntegerMatrix& m) {
  if (m.rows != m.cols || m.data.size() != m.rows * m.cols) return false;
  for (std::size_t r = 0; r < m.rows; ++r) {
    if (m.at(r, r) == 0) return false;
    for (std::size_t c = r + 1; c < m.cols; ++c) {
      if (m.at(r, c) != 0) return false;
    }
  }
  return true;
}

std::size_t rank_arcs(const MoveSequence& s, const PartialConfiguration& tau0) {
  Replay r(s, tau0);
  const auto universe = active_nodes(s);
  detail::RankAccumulator acc(universe);
  for (const Arc& a : enumerate_arcs(s)) acc.add(arc_combination(s, r, a, universe));
  return acc.rank();
}

std::size_t rank_arcs(const MoveSequence& s) { return rank_arcs(s, default_tau0(s)); }

CycleEnumeration enumerate_cycles(const MoveSequence& s, const CycleBudget& budget) {
  CycleEnumeration out;
  const auto nodes = active_nodes(s);
  std::size_t max_len = budget.max_length;
  if (max_len == 0) {
    const double v = std::max<double>(2.0, static_cast<double>(nodes.size()));
    max_len = 2 * static_cast<std::size_t>(std::ceil(std::log2(v))) + 2;
  }
  auto full = [&] {
    if (out.cycles.size() >= budget.max_cycles) {
      out.exhausted = true;
      return true;
    }
    return false;
  };

  std::map<EdgeKey, std::vector<std::size_t>> parallel;
  NodeId top = -1;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k].is_two()) parallel[EdgeKey::of(s[k].a, s[k].b)].push_back(k + 1);
    top = std::max(top, s[k].max_node());
  }
  for (const auto& [e, steps] : parallel) {
    for (std::size_t x = 0; x < steps.size(); ++x) {
      for (std::size_t y = x + 1; y < steps.size(); ++y) {
        if (full()) return out;
        out.cycles.push_back({{steps[x], steps[y]}, {e.lo, e.hi}});
      }
    }
  }
  if (max_len < 3) return out;

  // adjacency sorted by (neighbor, step)
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> adj(static_cast<std::size_t>(top + 1));
  for (const auto& [e, steps] : parallel) {
    for (std::size_t st : steps) {
      adj[static_cast<std::size_t>(e.lo)].push_back({e.hi, st});
      adj[static_cast<std::size_t>(e.hi)].push_back({e.lo, st});
    }
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<char> on_path(adj.size(), 0);
  std::vector<NodeId> path;
  std::vector<std::size_t> steps;
  bool stop = false;
  std::function<void(NodeId, NodeId)> dfs = [&](NodeId start, NodeId v) {
    for (const auto& [w, st] : adj[static_cast<std::size_t>(v)]) {
      if (stop) return;
      if (w == start) {
        if (path.size() >= 3 && steps.front() < st) {
          if (full()) {
            stop = true;
            return;
          }
          Cycle c{steps, path};
          c.steps.push_back(st);
          out.cycles.push_back(std::move(c));
        }
        continue;
      }
      if (w < start || on_path[static_cast<std::size_t>(w)] || path.size() >= max_len) continue;
      on_path[static_cast<std::size_t>(w)] = 1;
      path.push_back(w);
      steps.push_back(st);
      dfs(start, w);
      steps.pop_back();
      path.pop_back();
      on_path[static_cast<std::size_t>(w)] = 0;
    }
  };
  for (NodeId start : nodes) {
    if (stop) break;
    on_path[static_cast<std::size_t>(start)] = 1;
    path = {start};
    steps.clear();
    dfs(start, start);
    on_path[static_cast<std::size_t>(start)] = 0;
  }
  return out;
}

CycleRank rank_cycles(const MoveSequence& s, const PartialConfiguration& tau0, const CycleBudget& budget) {
  Replay r(s, tau0);
  const auto universe = active_nodes(s);
  const auto en = enumerate_cycles(s, budget);
  detail::RankAccumulator acc(universe);
  CycleRank out;
  out.lower_bound = en.exhausted;
  std::set<EdgeVector::Map> seen;
  for (const Cycle& c : en.cycles) {
    auto d = dependence_with(r, c);
    if (!d.dependent) continue;
    ++out.dependent_cycles;
    auto v = cycle_combination(r, c, d.b, universe);
    if (v.is_zero() || !seen.insert(v.entries()).second) continue;
    acc.add(v);
  }
  out.rank = acc.rank();
  return out;
}

CycleRank rank_cycles(const MoveSequence& s, const CycleBudget& budget) { return rank_cycles(s, default_tau0(s), budget); }

double probability_bound(double len, double phi, double eps, std::size_t rank, bool clamp) {
  if (len < 0 || phi < 0 || eps < 0) throw InvalidArgument("probability bound needs non-negative inputs");
  const double v = std::pow(2.0 * len * phi * eps, static_cast<double>(rank));
  return clamp ? std::clamp(v, 0.0, 1.0) : v;
}

}  // namespace fliplab
