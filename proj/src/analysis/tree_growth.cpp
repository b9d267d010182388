#include <algorithm>
#include <deque>
#include <set>

#include "fliplab/analysis.hpp"

namespace fliplab {

namespace {

struct TreeNode {
  std::size_t split = 0;  // index into the split graph
  std::size_t parent = 0;
  std::size_t edge = 0;   // split edge to the parent
  bool root = false;
  std::optional<NodeId> wstar;
};

class Tree {
 public:
  Tree(const SplitGraph& g, const MoveSequence& w, const std::vector<std::vector<std::size_t>>& inc)
      : g_(g), w_(w), inc_(inc) {}

  // Grows from `root`; returns the closing (tree node, new edge) pair on the
  // first repeated label.
  std::optional<CertificateItem> grow(std::size_t root) {
    nodes_.clear();
    where_.clear();
    nodes_.push_back({root, 0, 0, true, std::nullopt});
    where_[root] = 0;
    std::deque<std::size_t> leaves{0};
    while (!leaves.empty()) {
      const std::size_t leaf = leaves.front();
      leaves.pop_front();
      const bool first = g_.nodes[nodes_[leaf].split].first_side;
      const auto kids = first ? pick_pair(leaf) : pick_one(leaf);
      for (std::size_t e : kids) {
        const std::size_t other = other_end(e, nodes_[leaf].split);
        if (auto hit = where_.find(other); hit != where_.end()) return close(hit->second, leaf, e);
        where_[other] = nodes_.size();
        nodes_.push_back({other, leaf, e, false, std::nullopt});
        leaves.push_back(nodes_.size() - 1);
      }
    }
    return std::nullopt;
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  std::size_t other_end(std::size_t e, std::size_t x) const { return g_.edges[e].a == x ? g_.edges[e].b : g_.edges[e].a; }
  NodeId original(std::size_t split) const { return g_.nodes[split].original; }

  std::vector<std::size_t> ancestors(std::size_t t) const {
    std::vector<std::size_t> out;
    while (!nodes_[t].root) {
      t = nodes_[t].parent;
      out.push_back(t);
    }
    return out;
  }

  // Originals that children of tree node t must avoid.
  std::set<NodeId> forbidden(std::size_t t, bool include_self_wstar) const {
    std::set<NodeId> out;
    for (std::size_t a : ancestors(t)) {
      out.insert(original(nodes_[a].split));
      if (nodes_[a].wstar) out.insert(*nodes_[a].wstar);
    }
    if (include_self_wstar && nodes_[t].wstar) out.insert(*nodes_[t].wstar);
    out.insert(original(nodes_[t].split));
    // a different copy of an original already in the tree cannot close a cycle
    return out;
  }

  bool clashes_with_copy(std::size_t split) const {
    const NodeId o = original(split);
    auto lo = std::lower_bound(g_.nodes.begin(), g_.nodes.end(), SplitNode{o, 0, false});
    for (auto it = lo; it != g_.nodes.end() && it->original == o; ++it) {
      const auto idx = static_cast<std::size_t>(it - g_.nodes.begin());
      if (idx != split && where_.count(idx)) return true;
    }
    return false;
  }

  std::vector<std::size_t> candidates(std::size_t t, const std::set<NodeId>& avoid) const {
    std::vector<std::size_t> out;
    for (std::size_t e : inc_[nodes_[t].split]) {
      const std::size_t x = other_end(e, nodes_[t].split);
      if (avoid.count(original(x)) || clashes_with_copy(x)) continue;
      out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
      const std::size_t xa = other_end(a, nodes_[t].split), xb = other_end(b, nodes_[t].split);
      return std::tie(xa, g_.edges[a].step) < std::tie(xb, g_.edges[b].step);
    });
    return out;
  }

  std::vector<std::size_t> pick_pair(std::size_t t) {
    const NodeId u = original(nodes_[t].split);
    const auto cand = candidates(t, forbidden(t, false));
    for (std::size_t x = 0; x < cand.size(); ++x) {
      for (std::size_t y = x + 1; y < cand.size(); ++y) {
        const NodeId v = original(other_end(cand[x], nodes_[t].split));
        const NodeId v2 = original(other_end(cand[y], nodes_[t].split));
        const std::size_t s1 = g_.edges[cand[x]].step, s2 = g_.edges[cand[y]].step;
        if (v == v2 || s1 + 1 == s2 || s2 + 1 == s1 || s1 == s2) continue;
        try {
          nodes_[t].wstar = odd_witness(w_, std::min(s1, s2), std::max(s1, s2), {u, v, v2});
        } catch (const InvalidSequence&) {
          continue;
        }
        return {cand[x], cand[y]};
      }
    }
    return {};
  }

  std::vector<std::size_t> pick_one(std::size_t t) {
    const auto cand = candidates(t, forbidden(t, true));
    if (cand.empty()) return {};
    return {cand.front()};
  }

  // Tree node `hit` and the new edge from tree node `leaf` carry the same label.
  CertificateItem close(std::size_t hit, std::size_t leaf, std::size_t new_edge) const {
    auto path = [&](std::size_t t) {
      std::vector<std::size_t> p{t};
      for (std::size_t a : ancestors(t)) p.push_back(a);
      std::reverse(p.begin(), p.end());  // root first
      return p;
    };
    const auto pa = path(hit), pb = path(leaf);
    std::size_t k = 0;
    while (k < pa.size() && k < pb.size() && pa[k] == pb[k]) ++k;
    const std::size_t lca = pa[k - 1];
    if (!g_.nodes[nodes_[lca].split].first_side || !nodes_[lca].wstar) {
      throw InternalInvariantViolation("tree branching node is not a grown V1 node");
    }
    Cycle c;
    // down the first branch to the repeated node
    for (std::size_t q = k - 1; q < pa.size(); ++q) {
      c.nodes.push_back(original(nodes_[pa[q]].split));
      if (q + 1 < pa.size()) c.steps.push_back(g_.edges[nodes_[pa[q + 1]].edge].step);
    }
    c.steps.push_back(g_.edges[new_edge].step);
    // up the second branch back to the branching node
    for (std::size_t q = pb.size(); q-- > k;) {
      c.nodes.push_back(original(nodes_[pb[q]].split));
      c.steps.push_back(g_.edges[nodes_[pb[q]].edge].step);
    }
    const auto tau0 = default_tau0(w_);
    const Dependence d = is_dependent(w_, c, tau0);
    if (!d.dependent) throw InternalInvariantViolation("tree-grown cycle is not dependent");
    CertificateItem it;
    it.kind = CertificateKind::TreeGrownCycle;
    it.steps = c.steps;
    it.nodes = c.nodes;
    it.coefficients = d.b;
    it.vector = cycle_vector(w_, tau0, c, d.b);
    it.witness = EdgeKey::of(c.nodes.front(), *nodes_[lca].wstar);
    return it;
  }

  const SplitGraph& g_;
  const MoveSequence& w_;
  const std::vector<std::vector<std::size_t>>& inc_;
  std::vector<TreeNode> nodes_;
  std::map<std::size_t, std::size_t> where_;  // split node -> tree node
};

}  // namespace

GrowResult grow_cycle(const SplitGraph& g, const MoveSequence& w, const std::vector<LedgerEntry>& ledger) {
  GrowResult out;
  const auto inc = g.incidence();
  Tree tree(g, w, inc);
  for (std::size_t r = 0; r < g.nodes.size(); ++r) {
    if (!g.nodes[r].first_side) continue;
    ++out.roots_tried;
    auto item = tree.grow(r);
    out.tree_size = std::max(out.tree_size, tree.size());
    if (!item) continue;
    const auto x = item->vector.at(item->witness);
    if (x != 2 && x != -2) throw InternalInvariantViolation("tree-grown cycle witness entry is not +-2");
    for (const LedgerEntry& e : ledger) {
      if (item->vector.at(EdgeKey::of(e.x, e.y)) != 0) {
        throw InternalInvariantViolation("tree-grown cycle is nonzero on ledger edge " + edge_label(EdgeKey::of(e.x, e.y)));
      }
    }
    out.item = std::move(item);
    return out;
  }
  out.not_found = Diagnostic{"grow_cycle", "no root of the pruned split graph (" + std::to_string(g.nodes.size()) +
                                               " nodes, " + std::to_string(g.edges.size()) +
                                               " edges) grows a tree with a repeated label"};
  return out;
}

}  // namespace fliplab
