#include "fliplab/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fliplab {

EdgeKey EdgeKey::of(NodeId u, NodeId v) {
  if (u == v) throw InvalidArgument("edge endpoints must differ: " + std::to_string(u));
  if (u < 0 || v < 0) throw InvalidArgument("negative node id");
  return u < v ? EdgeKey{u, v} : EdgeKey{v, u};
}

std::size_t edge_index(std::size_t n, EdgeKey e) {
  const auto lo = static_cast<std::size_t>(e.lo);
  const auto hi = static_cast<std::size_t>(e.hi);
  return lo * n - lo * (lo + 1) / 2 + (hi - lo - 1);
}

EdgeKey edge_at(std::size_t n, std::size_t index) {
  std::size_t lo = 0;
  std::size_t row = n - 1;
  while (index >= row) {
    index -= row;
    ++lo;
    --row;
  }
  return {static_cast<NodeId>(lo), static_cast<NodeId>(lo + 1 + index)};
}

EdgeWeights::EdgeWeights(std::size_t n) : n_(n), w_(edge_count(n), 0.0) {}

EdgeWeights::EdgeWeights(std::size_t n, std::vector<double> flat) : n_(n), w_(std::move(flat)) {
  if (w_.size() != edge_count(n)) {
    throw DimensionMismatch("expected " + std::to_string(edge_count(n)) + " weights, got " +
                            std::to_string(w_.size()));
  }
  for (double x : w_) {
    if (!(x >= -1.0 && x <= 1.0)) throw InvalidArgument("edge weight outside [-1, 1]");
  }
}

void EdgeWeights::set(EdgeKey e, double value) {
  if (static_cast<std::size_t>(e.hi) >= n_) throw DimensionMismatch("edge outside instance");
  if (!(value >= -1.0 && value <= 1.0)) throw InvalidArgument("edge weight outside [-1, 1]");
  w_[edge_index(n_, e)] = value;
}

EdgeWeights EdgeWeights::negated() const {
  EdgeWeights out = *this;
  for (double& x : out.w_) x = -x;
  return out;
}

Configuration::Configuration(std::vector<int> signs) {
  s_.reserve(signs.size());
  for (int x : signs) {
    if (x != 1 && x != -1) throw InvalidArgument("configuration entries must be +1 or -1");
    s_.push_back(static_cast<std::int8_t>(x));
  }
}

Configuration Configuration::uniform(std::size_t n, int sign) {
  return Configuration(std::vector<int>(n, sign));
}

void Configuration::flip(NodeId u) {
  if (u < 0 || static_cast<std::size_t>(u) >= s_.size()) {
    throw DimensionMismatch("node " + std::to_string(u) + " out of range");
  }
  s_[static_cast<std::size_t>(u)] = static_cast<std::int8_t>(-s_[static_cast<std::size_t>(u)]);
}

int Configuration::balance() const {
  int b = 0;
  for (auto x : s_) b += x;
  return b;
}

PartialConfiguration::PartialConfiguration(std::vector<NodeId> active, std::vector<int> signs) {
  if (active.size() != signs.size()) throw DimensionMismatch("active set and signs differ in size");
  std::vector<std::size_t> order(active.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return active[x] < active[y]; });
  for (auto k : order) {
    if (!active_.empty() && active_.back() == active[k]) throw InvalidArgument("duplicate active node");
    if (signs[k] != 1 && signs[k] != -1) throw InvalidArgument("signs must be +1 or -1");
    active_.push_back(active[k]);
    signs_.push_back(static_cast<std::int8_t>(signs[k]));
  }
}

PartialConfiguration PartialConfiguration::uniform(std::vector<NodeId> active, int sign) {
  std::vector<int> signs(active.size(), sign);
  return PartialConfiguration(std::move(active), std::move(signs));
}

PartialConfiguration PartialConfiguration::restrict(const Configuration& gamma,
                                                    std::span<const NodeId> active) {
  std::vector<NodeId> nodes(active.begin(), active.end());
  std::vector<int> signs;
  signs.reserve(nodes.size());
  for (NodeId u : nodes) {
    if (u < 0 || static_cast<std::size_t>(u) >= gamma.size()) throw DimensionMismatch("node out of range");
    signs.push_back(gamma[u]);
  }
  return PartialConfiguration(std::move(nodes), std::move(signs));
}

bool PartialConfiguration::contains(NodeId u) const {
  return std::binary_search(active_.begin(), active_.end(), u);
}

int PartialConfiguration::operator[](NodeId u) const {
  auto it = std::lower_bound(active_.begin(), active_.end(), u);
  if (it == active_.end() || *it != u) throw InvalidArgument("node " + std::to_string(u) + " is not active");
  return signs_[static_cast<std::size_t>(it - active_.begin())];
}

Configuration PartialConfiguration::extend(std::size_t n, std::span<const int> fill) const {
  if (fill.size() != n) throw DimensionMismatch("fill must have length n");
  std::vector<int> out(fill.begin(), fill.end());
  for (std::size_t k = 0; k < active_.size(); ++k) {
    if (static_cast<std::size_t>(active_[k]) >= n) throw DimensionMismatch("active node out of range");
    out[static_cast<std::size_t>(active_[k])] = signs_[k];
  }
  return Configuration(std::move(out));
}

Move Move::one(NodeId u) {
  if (u < 0) throw InvalidArgument("negative node id");
  return {u, -1};
}

Move Move::two(NodeId u, NodeId v) {
  if (u < 0 || v < 0) throw InvalidArgument("negative node id");
  if (u == v) throw InvalidArgument("2-move needs two distinct nodes");
  return u < v ? Move{u, v} : Move{v, u};
}

std::string to_string(const Move& m) {
  if (m.is_one()) return "{" + std::to_string(m.a) + "}";
  return "{" + std::to_string(m.a) + "," + std::to_string(m.b) + "}";
}

MoveSequence slice(const MoveSequence& s, Window w) {
  if (w.start < 1 || w.start + w.length - 1 > s.size()) {
    throw InvalidArgument("window [" + std::to_string(w.start) + ", +" + std::to_string(w.length) +
                          ") exceeds sequence of length " + std::to_string(s.size()));
  }
  return {s.begin() + static_cast<std::ptrdiff_t>(w.start - 1),
          s.begin() + static_cast<std::ptrdiff_t>(w.start - 1 + w.length)};
}

double objective(const EdgeWeights& weights, const Configuration& gamma) {
  const std::size_t n = weights.n();
  if (gamma.size() != n) throw DimensionMismatch("configuration length differs from instance size");
  const auto flat = weights.flat();
  double total = 0.0;
  std::size_t k = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v, ++k) {
      if (gamma[static_cast<NodeId>(u)] != gamma[static_cast<NodeId>(v)]) total += flat[k];
    }
  }
  return total;
}

static void check_node(NodeId u, std::size_t n) {
  if (u < 0 || static_cast<std::size_t>(u) >= n) {
    throw DimensionMismatch("node " + std::to_string(u) + " out of range for n=" + std::to_string(n));
  }
}

double move_delta(const EdgeWeights& weights, const Configuration& gamma, const Move& m) {
  const std::size_t n = weights.n();
  if (gamma.size() != n) throw DimensionMismatch("configuration length differs from instance size");
  check_node(m.a, n);
  if (m.is_two()) check_node(m.b, n);
  double delta = 0.0;
  for (NodeId w = 0; static_cast<std::size_t>(w) < n; ++w) {
    if (m.contains(w)) continue;
    delta += gamma[w] * gamma[m.a] * weights.at(w, m.a);
    if (m.is_two()) delta += gamma[w] * gamma[m.b] * weights.at(w, m.b);
  }
  return delta;
}

Configuration apply_move(Configuration gamma, const Move& m) {
  check_node(m.a, gamma.size());
  if (m.is_two()) check_node(m.b, gamma.size());
  gamma.flip(m.a);
  if (m.is_two()) gamma.flip(m.b);
  return gamma;
}

std::vector<Configuration> induced_configurations(const Configuration& gamma0, const MoveSequence& s) {
  std::vector<Configuration> out;
  out.reserve(s.size() + 1);
  out.push_back(gamma0);
  for (const Move& m : s) out.push_back(apply_move(out.back(), m));
  return out;
}

ValidityReport is_valid_sequence(const MoveSequence& s) {
  NodeId top = -1;
  for (const Move& m : s) top = std::max(top, m.max_node());
  std::vector<char> parity(static_cast<std::size_t>(top + 1), 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::fill(parity.begin(), parity.end(), 0);
    const Move& si = s[i];
    // odd counts over S_i..S_j of nodes outside S_i; S_i itself contributes nothing
    std::size_t odd = 0;
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      for (NodeId x : {s[j].a, s[j].b}) {
        if (x < 0 || si.contains(x)) continue;
        char& p = parity[static_cast<std::size_t>(x)];
        p ^= 1;
        if (p) ++odd;
        else --odd;
      }
      if (odd == 0) return {false, std::make_pair(i + 1, j + 1)};
    }
  }
  return {true, std::nullopt};
}

std::vector<NodeId> active_nodes(const MoveSequence& s) {
  std::vector<NodeId> out;
  for (const Move& m : s) {
    out.push_back(m.a);
    if (m.is_two()) out.push_back(m.b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<EdgeKey> active_edges(const MoveSequence& s) {
  const auto nodes = active_nodes(s);
  std::vector<EdgeKey> out;
  out.reserve(nodes.size() * (nodes.size() - (nodes.empty() ? 0 : 1)) / 2);
  for (std::size_t x = 0; x < nodes.size(); ++x) {
    for (std::size_t y = x + 1; y < nodes.size(); ++y) out.push_back({nodes[x], nodes[y]});
  }
  return out;
}

void check_moves_in_range(const MoveSequence& s, std::size_t n) {
  for (const Move& m : s) {
    check_node(m.a, n);
    if (m.is_two()) check_node(m.b, n);
  }
}

}  // namespace fliplab
