#pragma once

// File formats: instances, perturbation models, traces (JSON Lines),
// certificates, BFOP instances and analysis reports. Readers report parse
// errors as ParseError with line and column.

#include <iosfwd>
#include <string>

#include "fliplab/analysis.hpp"
#include "fliplab/csp.hpp"
#include "fliplab/search.hpp"
#include "fliplab/smoothing.hpp"

namespace fliplab {

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// x with 17 significant digits, which reads back to the same double.
std::string format_double(double x);

std::string read_file(const std::string& path);
/// Writes via a temporary file and rename.
void write_file(const std::string& path, const std::string& text);

// {"n": n, "edges": [[u, v, w], ...]} with every pair; weights may be
// numbers or decimal strings.
std::string instance_to_json(const EdgeWeights& w);
EdgeWeights instance_from_json(const std::string& text, const std::string& source = "instance");

// {"n", "family", "phi", "means": [[u, v, m], ...], "seed"}
std::string model_to_json(const PerturbationModel& m);
PerturbationModel model_from_json(const std::string& text, const std::string& source = "model");

// Line 1: {"n", "gamma0", "engine", "rule", "seed", "status"}; then one
// {"move": [u] or [u, v], "delta": x} per step.
std::string trace_to_jsonl(const Trace& t);
Trace trace_from_jsonl(const std::string& text, const std::string& source = "trace");

// {"n", "d", "functions": [{"args": [i, j], "table": [4 ints], "weight"}],
//  "unary": [{"arg": i, "table": [2 ints], "weight"}]}
std::string bfop_to_json(const BFOPInstance& inst);
BFOPInstance bfop_from_json(const std::string& text, const std::string& source = "bfop");

// {"window", "items", "vectors": [{"label", "entries": [[u, v, x], ...]}],
//  "matrix", "rank", "stopped"}
std::string certificate_to_json(const TriangularCertificate& c);
TriangularCertificate certificate_from_json(const std::string& text, const std::string& source = "certificate");

/// What verification needs from an analysis report.
struct ReportFile {
  std::string kind;
  Window window;
  MoveSequence window_moves;
  TriangularCertificate certificate;
  std::size_t rank = 0;
  double ratio = 0.0;
};

std::string report_to_json(const AnalysisReport& r);
ReportFile report_from_json(const std::string& text, const std::string& source = "report");

}  // namespace fliplab
