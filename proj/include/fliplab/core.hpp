#pragma once

// Domain types for local Max-Cut on the complete graph K_n: edge weights,
// +-1 configurations, 1-/2-moves, move sequences and the cut objective.
//
// Index conventions used throughout fliplab:
//   * nodes are 0-based integers in [0, n);
//   * steps of a move sequence are 1-based, S_1 .. S_len;
//   * configuration i is the state after applying the first i steps, so
//     configuration 0 is the initial one and step i maps i-1 to i.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fliplab {

using NodeId = int;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A window or sequence violates the validity property where a procedure
/// relies on it.
class InvalidSequence : public Error {
 public:
  using Error::Error;
};

class InternalInvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Canonical unordered pair {lo, hi} with lo < hi.
struct EdgeKey {
  NodeId lo = 0;
  NodeId hi = 1;

  static EdgeKey of(NodeId u, NodeId v);

  bool contains(NodeId x) const { return lo == x || hi == x; }
  NodeId other(NodeId x) const { return x == lo ? hi : lo; }

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

/// Position of {lo, hi} in the row-major upper-triangular layout of K_n.
std::size_t edge_index(std::size_t n, EdgeKey e);
EdgeKey edge_at(std::size_t n, std::size_t index);
constexpr std::size_t edge_count(std::size_t n) { return n * (n - 1) / 2; }

/// Dense weights of K_n, one per edge, each in [-1, 1].
class EdgeWeights {
 public:
  EdgeWeights() = default;
  explicit EdgeWeights(std::size_t n);  // all zero
  EdgeWeights(std::size_t n, std::vector<double> flat);

  std::size_t n() const { return n_; }
  double at(NodeId u, NodeId v) const { return w_[edge_index(n_, EdgeKey::of(u, v))]; }
  double at(EdgeKey e) const { return w_[edge_index(n_, e)]; }
  void set(EdgeKey e, double value);
  std::span<const double> flat() const { return w_; }

  /// Weights of the same graph with every sign reversed. Minimizing the cut
  /// under `w` is maximizing it under `w.negated()`.
  EdgeWeights negated() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> w_;
};

/// A full +-1 assignment to the nodes of K_n.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<int> signs);
  static Configuration uniform(std::size_t n, int sign);

  std::size_t size() const { return s_.size(); }
  int operator[](NodeId u) const { return s_[static_cast<std::size_t>(u)]; }
  void flip(NodeId u);
  std::span<const std::int8_t> signs() const { return s_; }
  std::vector<int> to_vector() const { return {s_.begin(), s_.end()}; }
  /// Number of +1 entries minus number of -1 entries.
  int balance() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<std::int8_t> s_;
};

/// A +-1 assignment restricted to a set of active nodes.
class PartialConfiguration {
 public:
  PartialConfiguration() = default;
  PartialConfiguration(std::vector<NodeId> active, std::vector<int> signs);
  static PartialConfiguration uniform(std::vector<NodeId> active, int sign);
  static PartialConfiguration restrict(const Configuration& gamma, std::span<const NodeId> active);

  /// Sorted active node set V(S).
  std::span<const NodeId> active() const { return active_; }
  bool contains(NodeId u) const;
  int operator[](NodeId u) const;
  /// Full configuration agreeing with this one on the active set and equal to
  /// `fill` elsewhere.
  Configuration extend(std::size_t n, std::span<const int> fill) const;

 private:
  std::vector<NodeId> active_;
  std::vector<std::int8_t> signs_;
};

/// A 1-move {a} (b < 0) or a 2-move {a, b} with a < b.
struct Move {
  NodeId a = 0;
  NodeId b = -1;

  static Move one(NodeId u);
  static Move two(NodeId u, NodeId v);

  bool is_one() const { return b < 0; }
  bool is_two() const { return b >= 0; }
  int size() const { return is_one() ? 1 : 2; }
  bool contains(NodeId x) const { return a == x || b == x; }
  /// The partner of x inside a 2-move.
  NodeId other(NodeId x) const { return x == a ? b : a; }
  NodeId max_node() const { return is_one() ? a : b; }

  friend bool operator==(const Move&, const Move&) = default;
};

using MoveSequence = std::vector<Move>;

std::string to_string(const Move& m);

/// A substring of a parent sequence: steps start .. start+length-1 (1-based).
struct Window {
  std::size_t start = 1;
  std::size_t length = 0;

  std::size_t last() const { return start + length - 1; }
  friend bool operator==(const Window&, const Window&) = default;
};

/// The steps of `w` copied out as a standalone move sequence.
MoveSequence slice(const MoveSequence& s, Window w);

/// Sum of weights of cut edges.
double objective(const EdgeWeights& weights, const Configuration& gamma);

/// objective(after) - objective(before) for applying `m` to `gamma`, summed
/// over edges incident to the moved nodes. For a 2-move the weight of the pair
/// itself is never read.
double move_delta(const EdgeWeights& weights, const Configuration& gamma, const Move& m);

Configuration apply_move(Configuration gamma, const Move& m);

std::vector<Configuration> induced_configurations(const Configuration& gamma0, const MoveSequence& s);

struct ValidityReport {
  bool valid = true;
  /// Lexicographically first violating (i, j), 1-based, i < j.
  std::optional<std::pair<std::size_t, std::size_t>> violation;
};

/// A sequence is valid when for every i < j some node outside S_i appears an
/// odd number of times in S_i .. S_j.
ValidityReport is_valid_sequence(const MoveSequence& s);

/// Sorted V(S).
std::vector<NodeId> active_nodes(const MoveSequence& s);
/// All pairs inside V(S), sorted.
std::vector<EdgeKey> active_edges(const MoveSequence& s);

/// Throws DimensionMismatch unless every move lies inside [0, n).
void check_moves_in_range(const MoveSequence& s, std::size_t n);

}  // namespace fliplab
