#include <algorithm>
#include <set>

#include "fliplab/analysis.hpp"

namespace fliplab {

std::vector<std::vector<std::size_t>> SplitGraph::incidence() const {
  std::vector<std::vector<std::size_t>> inc(nodes.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    inc[edges[k].a].push_back(k);
    inc[edges[k].b].push_back(k);
  }
  return inc;
}

std::size_t SplitGraph::degree(std::size_t node) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [&](const SplitEdge& e) { return e.a == node || e.b == node; }));
}

SplitGraph split_graph(const MoveSequence& w, const BipartiteCore& core, const std::vector<AuxEdge>& h_star,
                       const std::vector<LedgerEntry>& ledger) {
  const std::set<NodeId> v1(core.v1.begin(), core.v1.end());
  const std::set<NodeId> v2(core.v2.begin(), core.v2.end());
  std::set<NodeId> wit1, wit2;
  for (const LedgerEntry& e : ledger) {
    if (!v1.count(e.x)) throw InvalidArgument("ledger entry must start at a V1 node");
    for (NodeId x : {e.x, e.y}) {
      if (v1.count(x)) wit1.insert(x);
      if (v2.count(x)) wit2.insert(x);
    }
  }
  // partners of each split node and the steps touching them
  std::map<NodeId, std::vector<std::size_t>> partner_moves;
  for (NodeId v : wit2) {
    std::set<NodeId> partners;
    for (const LedgerEntry& e : ledger) {
      if (e.y == v && wit1.count(e.x)) partners.insert(e.x);
      if (e.x == v && wit1.count(e.y)) partners.insert(e.y);
    }
    auto& steps = partner_moves[v];
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (partners.count(w[k].a) || (w[k].is_two() && partners.count(w[k].b))) steps.push_back(k + 1);
    }
  }

  SplitGraph g;
  for (NodeId u : core.v1) {
    if (!wit1.count(u)) g.nodes.push_back({u, 0, true});
  }
  for (NodeId v : core.v2) {
    const std::size_t copies = wit2.count(v) ? partner_moves[v].size() + 1 : 1;
    for (std::size_t c = 0; c < copies; ++c) g.nodes.push_back({v, c, false});
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  auto index_of = [&](const SplitNode& x) {
    return static_cast<std::size_t>(std::lower_bound(g.nodes.begin(), g.nodes.end(), x) - g.nodes.begin());
  };
  for (const AuxEdge& e : h_star) {
    NodeId u = e.e.lo, v = e.e.hi;
    if (!v1.count(u)) std::swap(u, v);
    if (!v1.count(u) || !v2.count(v)) throw InvalidArgument("H* edge does not cross V1-V2");
    if (wit1.count(u)) continue;
    std::size_t copy = 0;
    if (wit2.count(v)) {
      const auto& steps = partner_moves[v];
      copy = static_cast<std::size_t>(std::lower_bound(steps.begin(), steps.end(), e.step) - steps.begin());
    }
    g.edges.push_back({index_of({u, 0, true}), index_of({v, copy, false}), e.step});
  }
  return g;
}

SplitGraph prune_min_degree(const SplitGraph& g, std::size_t d_min) {
  auto inc = g.incidence();
  std::vector<std::size_t> deg(g.nodes.size());
  for (std::size_t k = 0; k < deg.size(); ++k) deg[k] = inc[k].size();
  std::vector<char> alive(g.nodes.size(), 1), edge_alive(g.edges.size(), 1);
  std::set<std::size_t> low;
  for (std::size_t k = 0; k < deg.size(); ++k) {
    if (deg[k] < d_min) low.insert(k);
  }
  SplitGraph out;
  out.deleted = g.deleted;
  while (!low.empty()) {
    const std::size_t x = *low.begin();
    low.erase(low.begin());
    alive[x] = 0;
    out.deleted.push_back(g.nodes[x]);
    for (std::size_t e : inc[x]) {
      if (!edge_alive[e]) continue;
      edge_alive[e] = 0;
      const std::size_t y = g.edges[e].a == x ? g.edges[e].b : g.edges[e].a;
      if (alive[y] && --deg[y] < d_min) low.insert(y);
    }
  }
  std::vector<std::size_t> remap(g.nodes.size(), 0);
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    if (!alive[k]) continue;
    remap[k] = out.nodes.size();
    out.nodes.push_back(g.nodes[k]);
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (edge_alive[e]) out.edges.push_back({remap[g.edges[e].a], remap[g.edges[e].b], g.edges[e].step});
  }
  return out;
}

}  // namespace fliplab
