#include <algorithm>
#include <set>

#include "fliplab/analysis.hpp"

namespace fliplab {

namespace {

CertificateItem two_cycle_item(const MoveSequence& w, const PartialConfiguration& tau0, NodeId u, NodeId v,
                               std::size_t i, std::size_t j, NodeId z) {
  CertificateItem it;
  it.kind = CertificateKind::ParallelTwoCycle;
  it.steps = {i, j};
  it.nodes = {u, v};
  const Cycle c{it.steps, it.nodes};
  const Dependence d = is_dependent(w, c, tau0);
  if (!d.dependent) throw InternalInvariantViolation("2-cycle of one sign class is not dependent");
  it.coefficients = d.b;
  it.vector = cycle_vector(w, tau0, c, d.b);
  it.witness = EdgeKey::of(u, z);
  const auto x = it.vector.at(it.witness);
  if (x != 2 && x != -2) throw InternalInvariantViolation("2-cycle witness entry is not +-2");
  return it;
}

}  // namespace

ParallelTwoCycles parallel_2cycles(const MoveSequence& w, const BipartiteCore& core,
                                   const std::vector<AuxEdge>& edoubleprime) {
  ParallelTwoCycles out;
  const std::set<NodeId> v1(core.v1.begin(), core.v1.end());
  const std::set<NodeId> v2(core.v2.begin(), core.v2.end());
  // parallel classes keyed by (V1 endpoint, V2 endpoint)
  std::map<std::pair<NodeId, NodeId>, std::vector<std::size_t>> cls;
  for (const AuxEdge& e : edoubleprime) {
    NodeId a = e.e.lo, b = e.e.hi;
    if (!v1.count(a)) std::swap(a, b);
    if (!v1.count(a) || !v2.count(b)) throw InvalidArgument("edge of E'' does not cross V1-V2");
    cls[{a, b}].push_back(e.step);
  }
  for (auto& [k, steps] : cls) std::sort(steps.begin(), steps.end());
  std::set<NodeId> d;
  for (const auto& [k, steps] : cls) {
    if (steps.size() >= 2) d.insert(k.first);
  }
  out.d.assign(d.begin(), d.end());
  for (const AuxEdge& e : edoubleprime) {
    if (!d.count(e.e.lo) && !d.count(e.e.hi)) out.h_star.push_back(e);
  }
  if (d.empty()) {
    out.certificate = assemble_certificate(Window{1, w.size()}, {});
    return out;
  }

  const auto tau0 = default_tau0(w);
  Replay r(w, tau0);
  auto odd_between = [&](NodeId z, std::size_t i, std::size_t j) { return r.count_between(z, i + 1, j - 1) % 2 == 1; };
  std::vector<CertificateItem> items;

  // step 1: a V1 node other than u flips an odd number of times inside the 2-cycle
  for (bool progress = true; progress;) {
    progress = false;
    for (NodeId u : d) {
      for (auto it = cls.lower_bound({u, -1}); it != cls.end() && it->first.first == u && !progress; ++it) {
        const auto& steps = it->second;
        for (std::size_t x = 0; x < steps.size() && !progress; ++x) {
          for (std::size_t y = x + 1; y < steps.size() && !progress; ++y) {
            for (NodeId z : core.v1) {
              if (z == u || !odd_between(z, steps[x], steps[y])) continue;
              items.push_back(two_cycle_item(w, tau0, u, it->first.second, steps[x], steps[y], z));
              d.erase(z);
              d.erase(u);
              progress = true;
              break;
            }
          }
        }
      }
      if (progress) break;
    }
  }
  // step 2: remaining nodes use any odd mover outside the pair
  while (!d.empty()) {
    const NodeId u = *d.begin();
    auto it = cls.lower_bound({u, -1});
    while (it->second.size() < 2) ++it;
    const NodeId v = it->first.second;
    const std::size_t i = it->second[0], j = it->second[1];
    items.push_back(two_cycle_item(w, tau0, u, v, i, j, odd_witness(w, i, j, {u, v})));
    d.erase(u);
  }
  out.certificate = assemble_certificate(Window{1, w.size()}, std::move(items));
  if (!is_lower_triangular_nonzero_diagonal(out.certificate.matrix)) {
    throw InternalInvariantViolation("2-cycle witness matrix is not lower triangular");
  }
  return out;
}

}  // namespace fliplab
