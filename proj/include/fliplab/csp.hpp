#pragma once

// Binary function optimization (Max-2CSP with weighted functions) over the
// domain {-1, +1}: instances, separability, 2-flip search and
// function-indexed improvement vectors.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fliplab/algebra.hpp"
#include "fliplab/core.hpp"
#include "fliplab/search.hpp"

namespace fliplab {

/// Table index of an argument pair: 0 = (-1,-1), 1 = (-1,1), 2 = (1,-1), 3 = (1,1).
constexpr std::size_t table_index(int x, int y) { return (x > 0 ? 2u : 0u) + (y > 0 ? 1u : 0u); }

struct BinaryFunction {
  NodeId x = 0;
  NodeId y = 1;
  std::array<std::int64_t, 4> table{};
  double weight = 0.0;

  std::int64_t value(int sx, int sy) const { return table[table_index(sx, sy)]; }
};

struct UnaryFunction {
  NodeId x = 0;
  std::array<std::int64_t, 2> table{};  // f(-1), f(1)
  double weight = 0.0;

  std::int64_t value(int sx) const { return table[sx > 0 ? 1 : 0]; }
};

struct BFOPInstance {
  std::size_t n = 0;
  /// Bound on function values: every table entry lies in [0, d].
  std::int64_t d = 1;
  std::vector<BinaryFunction> functions;
  std::vector<UnaryFunction> unary;

  /// Throws InvalidArgument on out-of-range variables, equal arguments,
  /// table values outside [0, d] or weights outside [-1, 1].
  void validate() const;
  /// Every variable pair is the argument pair of some nonseparable function.
  bool complete() const;
};

struct Separation {
  bool separable = false;
  /// f(x, y) = first(x) + second(y) when separable.
  std::optional<std::pair<UnaryFunction, UnaryFunction>> parts;
};

/// Separable iff f(-1,-1) + f(1,1) = f(-1,1) + f(1,-1). The parts are
/// f1(x) = f(x, -1) and f2(y) = f(-1, y) - f(-1, -1), both carrying f's weight.
/// Unary tables may then hold negative values.
Separation is_separable(const BinaryFunction& f);

/// Replaces every separable binary function by its unary parts.
BFOPInstance decompose(const BFOPInstance& inst);

double bfop_objective(const BFOPInstance& inst, const Configuration& assignment);

/// Objective change of a move.
double bfop_move_delta(const BFOPInstance& inst, const Configuration& assignment, const Move& m);

/// Local search maximizing the objective, with the same engines, pivot rules
/// and legality constraints as `run`.
Trace bfop_run(const BFOPInstance& inst, const Configuration& assignment0, const PivotRule& rule,
               std::int64_t step_cap = static_cast<std::int64_t>(kDefaultStepCap),
               EngineKind engine = EngineKind::TwoFlip);

/// Exhaustive check of the engine's neighborhood.
bool bfop_is_local_optimum(const BFOPInstance& inst, const Configuration& assignment,
                           EngineKind engine = EngineKind::TwoFlip);

/// Entry k is the change of binary function k's (unweighted) value at step i
/// of s, replayed from gamma0. Its dot product with the weights, plus the
/// unary changes, is the step delta.
FunctionVector bfop_improvement_vector(const BFOPInstance& inst, const Configuration& gamma0, const MoveSequence& s,
                                       std::size_t i);

/// sum_k coefficients[k] * bfop_improvement_vector(steps[k]).
FunctionVector bfop_combination(const BFOPInstance& inst, const Configuration& gamma0, const MoveSequence& s,
                                const std::vector<std::size_t>& steps, const std::vector<int>& coefficients);

double dot(const FunctionVector& v, const BFOPInstance& inst);

/// One not-equal function per vertex pair in lexicographic order, weighted by
/// the edge weight, so function k is edge_at(n, k).
BFOPInstance maxcut_as_bfop(const EdgeWeights& w);

/// Relabels function k as edge_at(n, k); meaningful for maxcut_as_bfop instances.
EdgeVector function_to_edge_vector(std::size_t n, const FunctionVector& v);

}  // namespace fliplab
