#include <algorithm>
#include <bit>
#include <set>

#include "fliplab/analysis.hpp"

namespace fliplab {

ArcCase case1_arcs(const MoveSequence& s, const AnalysisParams& p) {
  p.validate();
  ArcCase out;
  const std::size_t N = s.size();
  const auto arcs = enumerate_arcs(s);
  if (arcs.empty()) {
    out.window = Window{1, N};
    out.certificate = assemble_certificate(out.window, {});
    out.not_found = Diagnostic{"case1_arcs", "no node makes two 1-moves"};
    out.certificate.stopped = out.not_found;
    return out;
  }
  auto bucket_of = [](const Arc& a) { return static_cast<std::size_t>(std::bit_width(a.j - a.i) - 1); };
  for (const Arc& a : arcs) ++out.buckets[bucket_of(a)];
  std::size_t best = 0;
  for (const auto& [b, cnt] : out.buckets) {
    if (cnt > best) {
      best = cnt;
      out.bucket = b;
    }
  }
  const std::size_t len = std::min<std::size_t>(std::size_t{1} << (out.bucket + 2), N);
  // arc (i, j) lies in [a, a + len - 1] for a in [max(1, j - len + 1), i]
  std::vector<long long> diff(N + 2, 0);
  for (const Arc& a : arcs) {
    if (bucket_of(a) != out.bucket || a.j - a.i + 1 > len) continue;
    const std::size_t lo = a.j >= len ? a.j - len + 1 : 1;
    ++diff[lo];
    --diff[a.i + 1];
  }
  std::size_t start = 1;
  long long run = 0, top = -1;
  for (std::size_t a = 1; a + len - 1 <= N; ++a) {
    run += diff[a];
    if (run > top) {
      top = run;
      start = a;
    }
  }
  out.window = Window{start, len};
  const MoveSequence w = slice(s, out.window);

  std::map<NodeId, std::vector<std::size_t>> ones;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k].is_one()) ones[w[k].a].push_back(k + 1);
  }
  for (const auto& [u, steps] : ones) {
    if (steps.size() >= 2) out.v2.push_back(u);
  }
  std::set<NodeId> pool(out.v2.begin(), out.v2.end());
  std::vector<CertificateItem> items;
  const auto tau0 = default_tau0(w);
  Replay r(w, tau0);
  for (NodeId u : out.v2) {
    if (!pool.count(u)) continue;
    const std::size_t si = ones[u][0], ei = ones[u][1];
    const NodeId v = odd_witness(w, si, ei, {u});
    pool.erase(u);
    pool.erase(v);
    CertificateItem it;
    it.kind = CertificateKind::ArcPair;
    it.steps = {si, ei};
    it.nodes = {u};
    it.coefficients = {r.sign_after(u, si), -r.sign_after(u, ei)};
    it.vector = arc_vector(w, tau0, Arc{si, ei, u});
    it.witness = EdgeKey::of(u, v);
    const auto x = it.vector.at(it.witness);
    if (x != 2 && x != -2) throw InternalInvariantViolation("arc witness entry is not +-2");
    items.push_back(std::move(it));
  }
  out.certificate = assemble_certificate(out.window, std::move(items));
  if (!is_lower_triangular_nonzero_diagonal(out.certificate.matrix)) {
    throw InternalInvariantViolation("arc witness matrix is not lower triangular");
  }
  if (out.v2.empty()) {
    out.not_found = Diagnostic{"case1_arcs", "window " + std::to_string(start) + "+" + std::to_string(len) +
                                                 " has no node with two 1-moves"};
    out.certificate.stopped = out.not_found;
  }
  return out;
}

}  // namespace fliplab
