#pragma once

// Constructive rank certificates for improving move sequences: good indices,
// window selection, auxiliary and split graphs, 2-cycle and tree-grown cycle
// harvesting, arc certificates, and their independent verification.
//
// Steps inside a window are 1-based and relative to the window. All vectors
// are taken with tau0 = all -1 on the window's active nodes.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fliplab/algebra.hpp"
#include "fliplab/core.hpp"

namespace fliplab {

struct AnalysisParams {
  double delta = 0.01;
  std::size_t t_low = 2;
  std::size_t t_high = 8;
  std::size_t d_min = 4;
  double one_move_frac = 0.25;
  /// Base of the scale (bucket_base)^(l-1) used by good indices.
  double bucket_base = 1.01;
  /// Nodes occurring fewer times than this are skipped by window selection.
  std::size_t min_occurrences = 2;
  /// Largest ledger index s used by the cycle harvest. When unset the cap is
  /// floor(L / ledger_cap_divisor) for a window of length L, or unbounded when
  /// the divisor is 0.
  std::optional<std::size_t> cycle_ledger_cap;
  double ledger_cap_divisor = 0.0;

  /// Thresholds as powers of log2 n: t_low = ceil(log^3), t_high = ceil(log^7),
  /// d_min = ceil(100 log), one_move_frac = 1/log^5, min_occurrences =
  /// ceil(log^8), ledger cap floor(L/log^10).
  static AnalysisParams for_n(std::size_t n);
  /// Small thresholds for desk-scale windows: t_low=2, t_high=8, d_min=4,
  /// unbounded ledger.
  static AnalysisParams desk();

  void validate() const;
  /// Ledger cap for a window of `window_len` steps; nullopt means unbounded.
  std::optional<std::size_t> ledger_cap(std::size_t window_len) const;
};

/// Why a stage produced nothing.
struct Diagnostic {
  std::string stage;
  std::string message;
};

// ---------------------------------------------------------------------------
// Good indices and window selection

struct OccurrenceIndex {
  NodeId node = 0;
  std::vector<std::size_t> positions;  // strictly increasing, 1-based
};

struct GoodIndex {
  std::size_t i = 0;
  std::size_t ell = 0;  // smallest l for which i is l-good
  friend bool operator==(const GoodIndex&, const GoodIndex&) = default;
};

/// ceil(base^(ell-1)).
std::size_t inner_radius(std::size_t ell, const AnalysisParams& p);
/// ceil((1 + 2 delta) inner_radius).
std::size_t outer_radius(std::size_t ell, const AnalysisParams& p);
/// inner + outer + 1.
std::size_t window_length_for(std::size_t ell, const AnalysisParams& p);

/// Every i in I that is l-good for some l, paired with the smallest such l.
/// i is l-good when [i-R, i+R] lies in [1, N], |I cap [i-L', i+L']| >= t_low
/// and |I cap [i-R, i+R]| <= t_high, with L' = inner_radius(l) and
/// R = outer_radius(l).
std::vector<GoodIndex> good_indices(const OccurrenceIndex& I, std::size_t N, const AnalysisParams& p);

/// Occurrence sets of every node, positions 1-based in s.
std::map<NodeId, OccurrenceIndex> occurrence_indices(const MoveSequence& s);

/// Bound on #_W(u) for V1 nodes: t_high for sequences without 1-moves,
/// 2 t_high otherwise.
std::size_t upper_threshold(const MoveSequence& s, const AnalysisParams& p);

/// Steps {u, v} of w (1-based) with t_low <= #2_W(u) <= #_W(u) <= t_high'
/// and #2_W(v) >= t_low, for either orientation.
std::vector<std::size_t> qualifying_steps(const MoveSequence& w, std::size_t t_low, std::size_t t_high_prime);

struct WindowSelection {
  bool found = false;
  /// Window of the input sequence (1-based start).
  Window window;
  std::size_t ell = 0;
  /// Window length measured in 2-moves.
  std::size_t length = 0;
  /// Qualifying steps, 1-based in the input sequence.
  std::vector<std::size_t> qualifying;
  /// Number of 2-moves that are l-good for each l.
  std::map<std::size_t, std::size_t> ell_histogram;
  std::optional<Diagnostic> not_found;
};

/// Drops 1-moves, classifies each 2-move by the scale at which it is good for
/// both endpoints, takes the most common scale, and returns the window of
/// that scale's length (in 2-moves) with the most qualifying moves, mapped
/// back to the input sequence. Ties go to the smallest scale and the
/// earliest window.
WindowSelection select_window(const MoveSequence& s, const AnalysisParams& p);

// ---------------------------------------------------------------------------
// Auxiliary graph and bipartite core

struct AuxEdge {
  EdgeKey e;
  std::size_t step = 0;
  friend bool operator==(const AuxEdge&, const AuxEdge&) = default;
};

struct AuxiliaryGraph {
  std::vector<NodeId> nodes;  // V(W)
  std::vector<AuxEdge> edges;  // one per 2-move, in step order
  std::map<NodeId, std::size_t> degree;
};

AuxiliaryGraph build_auxiliary_graph(const MoveSequence& w);

struct BipartiteCore {
  std::vector<NodeId> v1;
  std::vector<NodeId> v2;
  std::vector<AuxEdge> eprime;
  std::vector<NodeId> v_low;
  std::vector<NodeId> v_high;
  /// Edges with at least one endpoint in v_low and both in V.
  std::size_t low_incident = 0;
  std::size_t t_high_prime = 0;
  std::optional<Diagnostic> not_found;
};

/// V = nodes with #2_W >= t_low; V_low (#_W <= t_high') is split greedily in
/// ascending id, each node joining the side that cuts more edges to nodes
/// already placed (ties to V1); V_high goes to V2. E' = crossing edges.
BipartiteCore bipartite_core(const AuxiliaryGraph& h, const MoveSequence& w, const AnalysisParams& p);

enum class SignClass { SameSign, DifferentSigns };
std::string to_string(SignClass c);

struct SignClassification {
  SignClass majority = SignClass::SameSign;
  std::vector<AuxEdge> same;
  std::vector<AuxEdge> different;
  const std::vector<AuxEdge>& chosen() const { return majority == SignClass::SameSign ? same : different; }
};

/// A move {u, v} at step i is of the same sign when tau_i(u) = tau_i(v).
/// Ties go to SameSign.
SignClassification classify_signs(const MoveSequence& w, const BipartiteCore& core);

// ---------------------------------------------------------------------------
// Certificates

enum class CertificateKind { ParallelTwoCycle, TreeGrownCycle, ArcPair };
std::string to_string(CertificateKind k);
CertificateKind parse_certificate_kind(const std::string& s);

/// A combination sum_k coefficients[k] * imprv(steps[k]) of a window, with
/// a witness edge where it is nonzero. For cycles, nodes is the cycle's node
/// path and coefficients its cancellation vector; for arcs, nodes = {u} and
/// coefficients = (tau_i(u), -tau_j(u)).
struct CertificateItem {
  CertificateKind kind = CertificateKind::TreeGrownCycle;
  std::vector<std::size_t> steps;
  std::vector<NodeId> nodes;
  std::vector<int> coefficients;
  EdgeKey witness;
  EdgeVector vector;
};

/// Items in ledger order; matrix rows are the witnesses, columns the
/// vectors. Lower triangular with nonzero diagonal by construction.
struct TriangularCertificate {
  Window window;
  std::vector<CertificateItem> items;
  IntegerMatrix matrix;
  std::size_t rank = 0;
  std::optional<Diagnostic> stopped;

  std::size_t size() const { return items.size(); }
};

/// Builds the witness matrix and its exact rank.
TriangularCertificate assemble_certificate(Window window, std::vector<CertificateItem> items);

struct VerifyResult {
  bool ok = true;
  /// Name of the first invariant that failed.
  std::string invariant;
  std::string detail;
};

/// Recomputes every vector from the window's moves, checks each item's
/// structure (arc or dependent cycle with its cancellation vector), rebuilds
/// the witness matrix, and checks it is lower triangular with nonzero
/// diagonal and full rank. Does not trust stored vectors, matrix or rank.
VerifyResult verify_certificate(const MoveSequence& w, const TriangularCertificate& c);

/// Checks only the stored matrix: square, lower triangular, nonzero
/// diagonal, and exact rank equal to the item count.
VerifyResult check_stored_matrix(const TriangularCertificate& c);

// ---------------------------------------------------------------------------
// 2-cycles, split graph, tree growth, harvest

/// Smallest node outside `exclude` occurring an odd number of times in
/// W_{i+1} .. W_{i2-1}. Throws InvalidSequence if there is none.
NodeId odd_witness(const MoveSequence& w, std::size_t i, std::size_t i2, const std::vector<NodeId>& exclude);

struct ParallelTwoCycles {
  /// V1 nodes with parallel edges in E''.
  std::vector<NodeId> d;
  TriangularCertificate certificate;
  /// E'' without D's nodes and their edges.
  std::vector<AuxEdge> h_star;
};

ParallelTwoCycles parallel_2cycles(const MoveSequence& w, const BipartiteCore& core,
                                   const std::vector<AuxEdge>& edoubleprime);

/// (x, y) with x in V1.
struct LedgerEntry {
  NodeId x = 0;
  NodeId y = 0;
};

struct SplitNode {
  NodeId original = 0;
  std::size_t copy = 0;
  bool first_side = true;  // V1' when true, copy of a V2 node otherwise
  friend auto operator<=>(const SplitNode&, const SplitNode&) = default;
};

struct SplitEdge {
  std::size_t a = 0;  // index of the V1' endpoint
  std::size_t b = 0;  // index of the V2' endpoint
  std::size_t step = 0;
};

struct SplitGraph {
  std::vector<SplitNode> nodes;  // sorted
  std::vector<SplitEdge> edges;
  /// Nodes removed by prune_min_degree, in removal order.
  std::vector<SplitNode> deleted;

  std::vector<std::vector<std::size_t>> incidence() const;
  std::size_t degree(std::size_t node) const;
};

/// V1' = V1 minus ledger nodes; each ledger-touched V2 node v is split into
/// copies v^(mu), mu = number of moves before the edge's step that contain a
/// ledger partner of v.
SplitGraph split_graph(const MoveSequence& w, const BipartiteCore& core, const std::vector<AuxEdge>& h_star,
                       const std::vector<LedgerEntry>& ledger);

/// Repeatedly removes the smallest node of degree below d_min.
SplitGraph prune_min_degree(const SplitGraph& g, std::size_t d_min);

struct GrowResult {
  std::optional<CertificateItem> item;
  std::optional<Diagnostic> not_found;
  std::size_t roots_tried = 0;
  std::size_t tree_size = 0;
};

/// Grows a binary search tree from each V1' root in ascending order until a
/// label repeats, and returns the cycle closed at the branching node u with
/// witness (u, w*). The vector is checked to be +-2 at the witness and zero
/// on every ledger edge.
GrowResult grow_cycle(const SplitGraph& g, const MoveSequence& w, const std::vector<LedgerEntry>& ledger);

struct HarvestStage {
  std::size_t ledger_size = 0;
  std::size_t split_nodes = 0;
  std::size_t split_edges = 0;
  std::size_t pruned_nodes = 0;
  std::size_t pruned_edges = 0;
};

struct CycleHarvest {
  AuxiliaryGraph aux;
  BipartiteCore core;
  SignClassification signs;
  ParallelTwoCycles two_cycles;
  TriangularCertificate certificate;  // tree-grown cycles
  std::vector<HarvestStage> stages;
};

/// Builds the auxiliary graph, core, sign classes and 2-cycles of w, then
/// runs the ledger loop on H*: split, prune, grow, append, until a stage
/// fails or the ledger cap is reached.
CycleHarvest harvest_cycles(const MoveSequence& w, const AnalysisParams& p);

/// The ledger loop alone, on a given core and H*.
TriangularCertificate harvest_from(const MoveSequence& w, const BipartiteCore& core,
                                   const std::vector<AuxEdge>& h_star, const AnalysisParams& p,
                                   std::vector<HarvestStage>* stages = nullptr);

// ---------------------------------------------------------------------------
// Arc case and dispatcher

struct ArcCase {
  /// Arcs of length in [2^b, 2^(b+1)) for each b.
  std::map<std::size_t, std::size_t> buckets;
  std::size_t bucket = 0;
  Window window;
  /// Nodes with at least two 1-moves in the window.
  std::vector<NodeId> v2;
  TriangularCertificate certificate;
  std::optional<Diagnostic> not_found;
};

ArcCase case1_arcs(const MoveSequence& s, const AnalysisParams& p);

enum class AnalysisCase { Arcs, Cycles };
std::string to_string(AnalysisCase c);

struct AnalysisReport {
  AnalysisCase kind = AnalysisCase::Cycles;
  AnalysisParams params;
  std::size_t sequence_length = 0;
  double one_move_fraction = 0.0;
  std::optional<ArcCase> arcs;
  std::optional<WindowSelection> selection;
  std::optional<CycleHarvest> cycles;
  /// The larger of the available certificates.
  TriangularCertificate certificate;
  /// Moves of certificate.window, for replay.
  MoveSequence window_moves;
  std::size_t rank = 0;
  double ratio = 0.0;
  std::vector<Diagnostic> diagnostics;
};

AnalysisReport analyze(const MoveSequence& s, const AnalysisParams& p);

}  // namespace fliplab
