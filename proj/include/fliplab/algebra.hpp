#pragma once

// Exact integer improvement-vector algebra: move, arc and cycle vectors,
// the dependence criterion, and exact matrix rank.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fliplab/core.hpp"

namespace fliplab {

/// Sparse integer vector. Zero entries are never stored, so two vectors are
/// equal iff they agree everywhere.
template <class Key>
class SparseVector {
 public:
  using Map = std::map<Key, std::int64_t>;

  std::int64_t at(const Key& k) const {
    auto it = m_.find(k);
    return it == m_.end() ? 0 : it->second;
  }
  void add(const Key& k, std::int64_t x) {
    if (x == 0) return;
    auto [it, fresh] = m_.try_emplace(k, x);
    if (!fresh && (it->second += x) == 0) m_.erase(it);
  }
  void add(const SparseVector& o, std::int64_t scale = 1) {
    for (const auto& [k, x] : o.m_) add(k, scale * x);
  }
  SparseVector scaled(std::int64_t s) const {
    SparseVector out;
    out.add(*this, s);
    return out;
  }
  bool is_zero() const { return m_.empty(); }
  std::size_t nnz() const { return m_.size(); }
  const Map& entries() const { return m_; }
  std::int64_t max_abs() const {
    std::int64_t r = 0;
    for (const auto& [k, x] : m_) r = std::max(r, x < 0 ? -x : x);
    return r;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  Map m_;
};

using EdgeVector = SparseVector<EdgeKey>;
using FunctionVector = SparseVector<std::size_t>;

/// tau_i(u) for every step i of a sequence, from a starting sign table.
/// Nodes never moved keep their initial sign.
class Replay {
 public:
  /// `initial` must cover every node that occurs in `s`.
  Replay(const MoveSequence& s, std::vector<int> initial);
  Replay(const MoveSequence& s, const Configuration& gamma0);
  Replay(const MoveSequence& s, const PartialConfiguration& tau0);

  /// Sign of u after the first i steps (i = 0 is the initial sign).
  int sign_after(NodeId u, std::size_t i) const;
  /// Sorted 1-based steps containing u.
  const std::vector<std::size_t>& occurrences(NodeId u) const;
  /// Occurrences of u in steps lo..hi inclusive.
  std::size_t count_between(NodeId u, std::size_t lo, std::size_t hi) const;
  const MoveSequence& moves() const { return *s_; }
  std::size_t universe() const { return init_.size(); }

 private:
  const MoveSequence* s_;
  std::vector<int> init_;
  std::vector<std::vector<std::size_t>> occ_;
};

/// imprv(i) over all edges of K_n: entry gamma_{i-1}(w) gamma_{i-1}(u) at
/// (u, w) for u in S_i and w outside S_i.
EdgeVector move_vector(const MoveSequence& s, const Configuration& gamma0, std::size_t i);
/// imprv(i) restricted to E(S), computed from tau0 alone.
EdgeVector move_vector(const MoveSequence& s, const PartialConfiguration& tau0, std::size_t i);

/// Restriction to E(S).
EdgeVector project_active(const EdgeVector& v, const MoveSequence& s);

double dot(const EdgeVector& v, const EdgeWeights& w);

struct Arc {
  std::size_t i = 0;
  std::size_t j = 0;
  NodeId node = 0;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Consecutive 1-move occurrences of each node, ordered by (i, j).
std::vector<Arc> enumerate_arcs(const MoveSequence& s);

/// tau_i(u) imprv(i) - tau_j(u) imprv(j).
EdgeVector arc_vector(const MoveSequence& s, const PartialConfiguration& tau0, const Arc& arc);
/// The same combination over all of E_n, for a full initial configuration.
EdgeVector arc_vector(const MoveSequence& s, const Configuration& gamma0, const Arc& arc);

/// Steps c_1..c_t with S_{c_j} = {u_j, u_{j+1}} (indices mod t).
struct Cycle {
  std::vector<std::size_t> steps;
  std::vector<NodeId> nodes;
  friend bool operator==(const Cycle&, const Cycle&) = default;
};

/// Throws InvalidArgument unless `c` is a well-formed cycle of `s`.
void check_cycle(const MoveSequence& s, const Cycle& c);

struct Dependence {
  bool dependent = false;
  /// Cancellation vector with b_1 = +1 when dependent, empty otherwise.
  std::vector<int> b;
};

Dependence is_dependent(const MoveSequence& s, const Cycle& c, const PartialConfiguration& tau0);
/// Uses tau0 = all -1.
Dependence is_dependent(const MoveSequence& s, const Cycle& c);

EdgeVector cycle_vector(const MoveSequence& s, const PartialConfiguration& tau0, const Cycle& c,
                        const std::vector<int>& b);
EdgeVector cycle_vector(const MoveSequence& s, const Configuration& gamma0, const Cycle& c,
                        const std::vector<int>& b);

/// tau0 = all -1 on V(S).
PartialConfiguration default_tau0(const MoveSequence& s);

struct IntegerMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> data;  // row-major

  IntegerMatrix() = default;
  IntegerMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  std::int64_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::int64_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Columns are the vectors; rows are the union of their supports, sorted.
IntegerMatrix matrix_from_vectors(const std::vector<EdgeVector>& vectors);
/// Columns are the vectors; rows are `row_keys` in the given order.
IntegerMatrix matrix_on_rows(const std::vector<EdgeVector>& vectors, const std::vector<EdgeKey>& row_keys);

/// Rank over the rationals by fraction-free elimination on big integers.
std::size_t exact_rank(const IntegerMatrix& m);

/// Square, zero above the diagonal, nonzero on it.
bool is_lower_triangular_nonzero_diagonal(const IntegerMatrix& m);

std::size_t rank_arcs(const MoveSequence& s, const PartialConfiguration& tau0);
std::size_t rank_arcs(const MoveSequence& s);

struct CycleBudget {
  /// Longest cycle searched beyond 2-cycles; 0 picks 2 ceil(log2 |V(S)|) + 2.
  std::size_t max_length = 0;
  std::size_t max_cycles = 5000;
};

struct CycleEnumeration {
  std::vector<Cycle> cycles;
  bool exhausted = false;  // budget hit before the search finished
};

/// All 2-cycles (pairs of equal 2-moves) and vertex-simple cycles of the
/// auxiliary multigraph up to the length budget. Each cycle appears once,
/// starting at its smallest node.
CycleEnumeration enumerate_cycles(const MoveSequence& s, const CycleBudget& budget = {});

struct CycleRank {
  std::size_t rank = 0;
  std::size_t dependent_cycles = 0;
  /// True when enumeration stopped early; rank is then a lower bound.
  bool lower_bound = false;
};

CycleRank rank_cycles(const MoveSequence& s, const PartialConfiguration& tau0, const CycleBudget& budget = {});
CycleRank rank_cycles(const MoveSequence& s, const CycleBudget& budget = {});

/// (2 len phi eps)^rank, clamped to [0, 1] unless clamp is false.
double probability_bound(double len, double phi, double eps, std::size_t rank, bool clamp = true);

std::string edge_label(EdgeKey e);

}  // namespace fliplab
