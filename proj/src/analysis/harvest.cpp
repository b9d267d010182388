#include "fliplab/analysis.hpp"

namespace fliplab {

TriangularCertificate harvest_from(const MoveSequence& w, const BipartiteCore& core,
                                   const std::vector<AuxEdge>& h_star, const AnalysisParams& p,
                                   std::vector<HarvestStage>* stages) {
  const auto cap = p.ledger_cap(w.size());
  std::vector<LedgerEntry> ledger;
  std::vector<CertificateItem> items;
  std::optional<Diagnostic> stopped;
  while (true) {
    if (cap && ledger.size() >= *cap) {
      stopped = Diagnostic{"harvest", "ledger cap " + std::to_string(*cap) + " reached"};
      break;
    }
    const SplitGraph split = split_graph(w, core, h_star, ledger);
    const SplitGraph pruned = prune_min_degree(split, p.d_min);
    if (stages) {
      stages->push_back({ledger.size(), split.nodes.size(), split.edges.size(), pruned.nodes.size(), pruned.edges.size()});
    }
    if (pruned.edges.empty()) {
      stopped = Diagnostic{"prune_min_degree", "no node of degree >= " + std::to_string(p.d_min) + " survives (" +
                                                   std::to_string(split.nodes.size()) + " split nodes, " +
                                                   std::to_string(split.edges.size()) + " edges)"};
      break;
    }
    GrowResult grown = grow_cycle(pruned, w, ledger);
    if (!grown.item) {
      stopped = grown.not_found;
      break;
    }
    const NodeId u = grown.item->nodes.front();
    ledger.push_back({u, grown.item->witness.other(u)});
    items.push_back(std::move(*grown.item));
  }
  TriangularCertificate c = assemble_certificate(Window{1, w.size()}, std::move(items));
  if (!is_lower_triangular_nonzero_diagonal(c.matrix)) {
    throw InternalInvariantViolation("tree-grown witness matrix is not lower triangular");
  }
  c.stopped = std::move(stopped);
  return c;
}

CycleHarvest harvest_cycles(const MoveSequence& w, const AnalysisParams& p) {
  p.validate();
  CycleHarvest h;
  h.aux = build_auxiliary_graph(w);
  h.core = bipartite_core(h.aux, w, p);
  const Window whole{1, w.size()};
  if (h.core.not_found) {
    h.two_cycles.certificate = assemble_certificate(whole, {});
    h.certificate = assemble_certificate(whole, {});
    h.certificate.stopped = h.core.not_found;
    return h;
  }
  h.signs = classify_signs(w, h.core);
  h.two_cycles = parallel_2cycles(w, h.core, h.signs.chosen());
  h.certificate = harvest_from(w, h.core, h.two_cycles.h_star, p, &h.stages);
  return h;
}

}  // namespace fliplab
