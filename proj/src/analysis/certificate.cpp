#include <algorithm>
#include <set>

#include "fliplab/analysis.hpp"

namespace fliplab {

std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::ParallelTwoCycle: return "parallel-2-cycle";
    case CertificateKind::TreeGrownCycle: return "tree-grown-cycle";
    case CertificateKind::ArcPair: return "arc";
  }
  return "?";
}

CertificateKind parse_certificate_kind(const std::string& s) {
  for (auto k : {CertificateKind::ParallelTwoCycle, CertificateKind::TreeGrownCycle, CertificateKind::ArcPair}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown certificate kind '" + s + "'");
}

NodeId odd_witness(const MoveSequence& w, std::size_t i, std::size_t i2, const std::vector<NodeId>& exclude) {
  if (i < 1 || i2 > w.size() || i >= i2) throw InvalidArgument("odd_witness needs 1 <= i < i2 <= len");
  std::map<NodeId, int> parity;
  for (std::size_t k = i + 1; k < i2; ++k) {
    for (NodeId x : {w[k - 1].a, w[k - 1].b}) {
      if (x >= 0) parity[x] ^= 1;
    }
  }
  for (const auto& [x, odd] : parity) {
    if (odd && std::find(exclude.begin(), exclude.end(), x) == exclude.end()) return x;
  }
  throw InvalidSequence("no node outside the excluded set moves an odd number of times strictly between steps " +
                        std::to_string(i) + " and " + std::to_string(i2));
}

TriangularCertificate assemble_certificate(Window window, std::vector<CertificateItem> items) {
  TriangularCertificate c;
  c.window = window;
  std::vector<EdgeVector> vecs;
  std::vector<EdgeKey> rows;
  for (const auto& it : items) {
    vecs.push_back(it.vector);
    rows.push_back(it.witness);
  }
  c.matrix = matrix_on_rows(vecs, rows);
  for (std::size_t k = 0; k < items.size(); ++k) c.matrix.col_labels[k] = to_string(items[k].kind) + "#" + std::to_string(k + 1);
  c.rank = exact_rank(c.matrix);
  c.items = std::move(items);
  return c;
}

VerifyResult check_stored_matrix(const TriangularCertificate& c) {
  const auto& m = c.matrix;
  if (m.rows != c.items.size() || m.cols != c.items.size() || m.data.size() != m.rows * m.cols) {
    return {false, "shape", "matrix is not square with one row and column per certificate"};
  }
  if (!is_lower_triangular_nonzero_diagonal(m)) {
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (m.at(r, r) == 0) return {false, "triangularity", "zero diagonal entry at " + std::to_string(r + 1)};
      for (std::size_t col = r + 1; col < m.cols; ++col) {
        if (m.at(r, col) != 0) {
          return {false, "triangularity",
                  "nonzero entry above the diagonal at row " + std::to_string(r + 1) + ", column " + std::to_string(col + 1)};
        }
      }
    }
  }
  const std::size_t rank = exact_rank(m);
  if (rank != c.items.size() || c.rank != c.items.size()) {
    return {false, "rank", "exact rank " + std::to_string(rank) + ", stored " + std::to_string(c.rank) + ", items " +
                               std::to_string(c.items.size())};
  }
  return {};
}

namespace {

// Recomputes an item's vector, or explains why its structure is wrong.
std::optional<std::string> recompute(const MoveSequence& w, const PartialConfiguration& tau0, const CertificateItem& it,
                                     EdgeVector& out) {
  try {
    if (it.kind == CertificateKind::ArcPair) {
      if (it.steps.size() != 2 || it.nodes.size() != 1 || it.coefficients.size() != 2) return "arc needs 2 steps, 1 node";
      const Arc arc{it.steps[0], it.steps[1], it.nodes[0]};
      Replay r(w, tau0);
      if (it.coefficients[0] != r.sign_after(arc.node, arc.i) || it.coefficients[1] != -r.sign_after(arc.node, arc.j)) {
        return "arc coefficients differ from (tau_i(u), -tau_j(u))";
      }
      out = arc_vector(w, tau0, arc);
      return std::nullopt;
    }
    const Cycle c{it.steps, it.nodes};
    if (it.kind == CertificateKind::ParallelTwoCycle && c.steps.size() != 2) return "parallel 2-cycle needs 2 steps";
    const Dependence d = is_dependent(w, c, tau0);
    if (!d.dependent) return "cycle is not dependent";
    if (d.b != it.coefficients) return "coefficients differ from the cancellation vector";
    out = cycle_vector(w, tau0, c, d.b);
    return std::nullopt;
  } catch (const Error& e) {
    return std::string(e.what());
  }
}

}  // namespace

VerifyResult verify_certificate(const MoveSequence& w, const TriangularCertificate& c) {
  if (auto r = check_stored_matrix(c); !r.ok) return r;
  if (c.items.empty()) return {};
  const auto tau0 = default_tau0(w);
  const auto act = active_nodes(w);
  auto active = [&](NodeId x) { return std::binary_search(act.begin(), act.end(), x); };
  std::vector<EdgeVector> vecs;
  std::vector<EdgeKey> rows;
  std::set<EdgeKey> seen;
  for (std::size_t k = 0; k < c.items.size(); ++k) {
    const auto& it = c.items[k];
    const std::string where = "certificate " + std::to_string(k + 1);
    EdgeVector v;
    if (auto why = recompute(w, tau0, it, v)) return {false, "structure", where + ": " + *why};
    if (v != it.vector) return {false, "vector-recomputation", where + ": stored vector differs from the replay"};
    if (!active(it.witness.lo) || !active(it.witness.hi)) return {false, "structure", where + ": witness edge is not active"};
    if (!seen.insert(it.witness).second) return {false, "structure", where + ": repeated witness edge"};
    vecs.push_back(std::move(v));
    rows.push_back(it.witness);
  }
  const IntegerMatrix m = matrix_on_rows(vecs, rows);
  if (m.data != c.matrix.data) return {false, "matrix-recomputation", "stored matrix differs from the recomputed one"};
  if (!is_lower_triangular_nonzero_diagonal(m)) return {false, "triangularity", "recomputed matrix is not lower triangular"};
  if (exact_rank(m) != c.items.size()) return {false, "rank", "recomputed matrix is rank deficient"};
  return {};
}

}  // namespace fliplab
