#pragma once

// Local-search engines (1-flip, 2-flip, pure 2-flip, swap) and pivot rules.

#include <cstdint>
#include <string>
#include <vector>

#include "fliplab/core.hpp"

namespace fliplab {

enum class EngineKind { OneFlip, TwoFlip, PureTwoFlip, Swap };

std::string to_string(EngineKind e);
EngineKind parse_engine(const std::string& s);
inline constexpr EngineKind kAllEngines[] = {EngineKind::OneFlip, EngineKind::TwoFlip, EngineKind::PureTwoFlip,
                                             EngineKind::Swap};

enum class Selection { Best, First, Random };
enum class ScanOrder { Fixed, Cyclic };

/// How the next improving move is chosen.
///
/// Moves are enumerated as 1-moves by node id followed by 2-moves in
/// lexicographic order. Best takes the largest delta (earliest on ties),
/// First the earliest improving move (Cyclic resumes after the previously
/// taken move), Random a uniform improving move. With one_then_two, 2-moves
/// are only considered when no 1-move improves.
struct PivotRule {
  Selection selection = Selection::Best;
  ScanOrder order = ScanOrder::Fixed;
  bool one_then_two = false;
  std::uint64_t seed = 0;

  /// "best", "first", "first-cyclic", "random", optionally prefixed by
  /// "one-then-two:".
  static PivotRule parse(const std::string& s, std::uint64_t seed = 0);
  std::string name() const;
};

/// Every rule name accepted by PivotRule::parse.
std::vector<std::string> all_rule_names();

enum class RunStatus { LocalOpt, CapReached };

std::string to_string(RunStatus s);
RunStatus parse_status(const std::string& s);

struct Step {
  Move move;
  double delta = 0.0;
};

struct Trace {
  std::size_t n = 0;
  Configuration gamma0;
  EngineKind engine = EngineKind::TwoFlip;
  std::string rule = "best";
  std::uint64_t seed = 0;
  std::vector<Step> steps;
  RunStatus status = RunStatus::LocalOpt;

  MoveSequence moves() const;
  std::vector<double> deltas() const;
};

inline constexpr std::uint64_t kDefaultStepCap = 100'000'000;

/// Run `engine` from gamma0, maximizing the cut under `weights`, until no
/// legal improving move is left or step_cap moves were made.
Trace run(const EdgeWeights& weights, const Configuration& gamma0, EngineKind engine, const PivotRule& rule,
          std::int64_t step_cap = static_cast<std::int64_t>(kDefaultStepCap));

/// Graph bisection: Swap on the negated weights, so every step strictly
/// decreases the cut under `weights`. Recorded deltas are the decreases.
Trace run_bisection(const EdgeWeights& weights, const Configuration& gamma0, const PivotRule& rule,
                    std::int64_t step_cap = static_cast<std::int64_t>(kDefaultStepCap));

/// Exhaustive check of the engine's neighborhood with move_delta.
bool is_local_optimum(const EdgeWeights& weights, const Configuration& gamma, EngineKind engine);

/// Maximal runs of consecutive steps whose deltas all lie in (0, eps].
std::vector<Window> epsilon_scan(const std::vector<double>& deltas, double eps);
std::vector<Window> epsilon_scan(const Trace& trace, double eps);

/// window_len * 2 n^2 / eps: the longest execution possible when every
/// window of window_len steps improves the objective by more than eps, since
/// the objective stays within [-n^2, n^2].
double length_budget(std::size_t n, double eps, double window_len);

/// Uniform random start from stream 1 of `seed`; balanced (n/2 nodes on each
/// side, a uniform random subset) when requested, which needs even n.
Configuration random_configuration(std::size_t n, std::uint64_t seed, bool balanced = false);

}  // namespace fliplab
