#pragma once

// Subcommands of the fliplab command-line tool, callable in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fliplab/search.hpp"
#include "fliplab/smoothing.hpp"

namespace fliplab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Seed from FLIPLAB_SEED when set, otherwise `fallback`.
std::uint64_t effective_seed(std::uint64_t fallback);

struct BenchConfig {
  std::vector<std::size_t> sizes;
  std::vector<double> phis;
  std::vector<EngineKind> engines{EngineKind::TwoFlip};
  std::vector<std::string> rules{"best"};
  NoiseFamily family = NoiseFamily::UniformWindow;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  std::int64_t step_cap = static_cast<std::int64_t>(kDefaultStepCap);
  std::size_t jobs = 1;
  bool timing = true;
};

struct BenchRow {
  std::size_t n = 0;
  double phi = 0.0;
  EngineKind engine = EngineKind::TwoFlip;
  std::string rule;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  RunStatus status = RunStatus::LocalOpt;
  double wall_ms = 0.0;
};

/// Seed of one benchmark run; depends only on the configuration seed and the
/// run's coordinates.
std::uint64_t bench_run_seed(std::uint64_t seed, std::size_t n, double phi, EngineKind engine,
                             const std::string& rule, std::size_t rep);

/// One run: sample weights from the model, start from a random configuration
/// (balanced for swap) and run to a local optimum or the cap.
BenchRow bench_one(const BenchConfig& cfg, std::size_t n, double phi, EngineKind engine, const std::string& rule,
                   std::size_t rep);

/// Every (n, phi, engine, rule, rep) combination in that nesting order, fanned
/// out over cfg.jobs threads. Rows come back in the same order regardless of
/// the thread count.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

/// Header line: n,phi,engine,rule,rep,seed,steps,status,wall_ms
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Full command line. Writes human output to `out`, errors to `err`, and
/// returns the exit code.
int main_with(int argc, char** argv, std::ostream& out, std::ostream& err);
int main_with(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fliplab::cli
