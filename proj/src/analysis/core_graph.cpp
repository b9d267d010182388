#include <algorithm>
#include <set>

#include "fliplab/analysis.hpp"

namespace fliplab {

AuxiliaryGraph build_auxiliary_graph(const MoveSequence& w) {
  AuxiliaryGraph h;
  h.nodes = active_nodes(w);
  for (NodeId u : h.nodes) h.degree[u] = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!w[k].is_two()) continue;
    h.edges.push_back({EdgeKey::of(w[k].a, w[k].b), k + 1});
    ++h.degree[w[k].a];
    ++h.degree[w[k].b];
  }
  return h;
}

BipartiteCore bipartite_core(const AuxiliaryGraph& h, const MoveSequence& w, const AnalysisParams& p) {
  p.validate();
  BipartiteCore core;
  core.t_high_prime = upper_threshold(w, p);
  std::map<NodeId, std::size_t> total;
  for (const Move& m : w) {
    ++total[m.a];
    if (m.is_two()) ++total[m.b];
  }
  std::set<NodeId> in_v;
  for (NodeId u : h.nodes) {
    auto it = h.degree.find(u);
    if (it == h.degree.end() || it->second < p.t_low) continue;
    in_v.insert(u);
    (total[u] <= core.t_high_prime ? core.v_low : core.v_high).push_back(u);
  }
  if (in_v.empty()) {
    core.not_found = Diagnostic{"bipartite_core", "no node has at least t_low 2-moves in the window"};
    return core;
  }

  // side: 1 for V1, 2 for V2, 0 while unplaced
  std::map<NodeId, int> side;
  for (NodeId u : core.v_high) side[u] = 2;
  std::map<NodeId, std::vector<NodeId>> nbrs;  // multigraph adjacency restricted to V
  for (const AuxEdge& e : h.edges) {
    if (in_v.count(e.e.lo) && in_v.count(e.e.hi)) {
      nbrs[e.e.lo].push_back(e.e.hi);
      nbrs[e.e.hi].push_back(e.e.lo);
    }
  }
  const std::set<NodeId> low(core.v_low.begin(), core.v_low.end());
  for (const AuxEdge& e : h.edges) {
    if (in_v.count(e.e.lo) && in_v.count(e.e.hi) && (low.count(e.e.lo) || low.count(e.e.hi))) ++core.low_incident;
  }
  for (NodeId u : core.v_low) {
    std::size_t to1 = 0, to2 = 0;
    for (NodeId x : nbrs[u]) {
      auto it = side.find(x);
      if (it == side.end()) continue;
      (it->second == 1 ? to1 : to2) += 1;
    }
    side[u] = to2 >= to1 ? 1 : 2;
  }
  for (const auto& [u, sd] : side) (sd == 1 ? core.v1 : core.v2).push_back(u);
  for (const AuxEdge& e : h.edges) {
    auto a = side.find(e.e.lo), b = side.find(e.e.hi);
    if (a != side.end() && b != side.end() && a->second != b->second) core.eprime.push_back(e);
  }
  if (core.v1.empty() || core.eprime.empty()) {
    core.not_found = Diagnostic{"bipartite_core", "the split leaves no crossing edge with a low-degree side"};
  }
  return core;
}

std::string to_string(SignClass c) { return c == SignClass::SameSign ? "same-sign" : "different-signs"; }

SignClassification classify_signs(const MoveSequence& w, const BipartiteCore& core) {
  SignClassification out;
  if (w.empty()) return out;
  Replay r(w, default_tau0(w));
  for (const AuxEdge& e : core.eprime) {
    const bool same = r.sign_after(e.e.lo, e.step) == r.sign_after(e.e.hi, e.step);
    (same ? out.same : out.different).push_back(e);
  }
  out.majority = out.same.size() >= out.different.size() ? SignClass::SameSign : SignClass::DifferentSigns;
  return out;
}

}  // namespace fliplab
