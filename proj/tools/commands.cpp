#include "commands.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fliplab/analysis.hpp"
#include "fliplab/csp.hpp"
#include "fliplab/io.hpp"
#include "fliplab/rng.hpp"

namespace fliplab::cli {

std::uint64_t effective_seed(std::uint64_t fallback) {
  const char* env = std::getenv("FLIPLAB_SEED");
  if (!env || !*env) return fallback;
  std::uint64_t x = 0;
  std::istringstream in(env);
  if (!(in >> x) || !in.eof()) throw InvalidArgument(std::string("FLIPLAB_SEED is not an unsigned integer: '") + env + "'");
  return x;
}

std::uint64_t bench_run_seed(std::uint64_t seed, std::size_t n, double phi, EngineKind engine,
                             const std::string& rule, std::size_t rep) {
  std::uint64_t h = mix64(n);
  h = mix64(h ^ std::hash<std::string>{}(format_double(phi)));
  h = mix64(h ^ static_cast<std::uint64_t>(engine));
  h = mix64(h ^ std::hash<std::string>{}(rule));
  h = mix64(h ^ rep);
  return stream_seed(seed, h);
}

BenchRow bench_one(const BenchConfig& cfg, std::size_t n, double phi, EngineKind engine, const std::string& rule,
                   std::size_t rep) {
  BenchRow row{n, phi, engine, rule, rep, bench_run_seed(cfg.seed, n, phi, engine, rule, rep)};
  PerturbationModel model{n, cfg.family, {}, phi, row.seed};
  const EdgeWeights w = sample_weights(model);
  const Configuration gamma0 = random_configuration(n, row.seed, engine == EngineKind::Swap);
  const auto t0 = std::chrono::steady_clock::now();
  const Trace t = run(w, gamma0, engine, PivotRule::parse(rule, row.seed), cfg.step_cap);
  const auto t1 = std::chrono::steady_clock::now();
  row.steps = t.steps.size();
  row.status = t.status;
  if (cfg.timing) row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return row;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  struct Job {
    std::size_t n;
    double phi;
    EngineKind engine;
    std::string rule;
    std::size_t rep;
  };
  std::vector<Job> jobs;
  for (std::size_t n : cfg.sizes) {
    for (double phi : cfg.phis) {
      for (EngineKind e : cfg.engines) {
        for (const auto& r : cfg.rules) {
          for (std::size_t rep = 0; rep < cfg.reps; ++rep) jobs.push_back({n, phi, e, r, rep});
        }
      }
    }
  }
  std::vector<BenchRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t k; (k = next++) < jobs.size();) {
      try {
        const Job& j = jobs[k];
        rows[k] = bench_one(cfg, j.n, j.phi, j.engine, j.rule, j.rep);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.jobs, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "n,phi,engine,rule,rep,seed,steps,status,wall_ms\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + format_double(r.phi) + "," + to_string(r.engine) + "," + r.rule + "," +
           std::to_string(r.rep) + "," + std::to_string(r.seed) + "," + std::to_string(r.steps) + "," +
           to_string(r.status) + "," + format_double(r.wall_ms) + "\n";
  }
  return out;
}

namespace {

std::vector<std::string> engine_names() {
  std::vector<std::string> out;
  for (EngineKind e : kAllEngines) out.push_back(to_string(e));
  return out;
}

Configuration start_config(std::size_t n, const std::string& init, std::uint64_t seed, EngineKind engine) {
  if (init == "minus") {
    if (engine == EngineKind::Swap) throw InvalidArgument("swap needs a balanced start; use --init random");
    return Configuration::uniform(n, -1);
  }
  return random_configuration(n, seed, engine == EngineKind::Swap);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

struct AnalysisFlags {
  std::string preset = "desk";
  std::optional<double> delta, one_move_frac, bucket_base;
  std::optional<std::size_t> t_low, t_high, d_min, min_occurrences, ledger_cap;

  void add(CLI::App* c) {
    c->add_option("--preset", preset, "Threshold preset: desk (small constants) or asymptotic (log powers of n)")
        ->check(CLI::IsMember({"desk", "asymptotic"}));
    c->add_option("--delta", delta, "Scale gap delta in (0,1)");
    c->add_option("--t-low", t_low, "Lower occurrence threshold");
    c->add_option("--t-high", t_high, "Upper occurrence threshold");
    c->add_option("--d-min", d_min, "Minimum degree kept by pruning");
    c->add_option("--one-move-frac", one_move_frac, "1-move fraction at which the arc case is used");
    c->add_option("--bucket-base", bucket_base, "Base of the good-index scale");
    c->add_option("--min-occurrences", min_occurrences, "Skip nodes occurring fewer times during window selection");
    c->add_option("--ledger-cap", ledger_cap, "Largest number of tree-grown cycles");
  }

  AnalysisParams build(std::size_t n) const {
    AnalysisParams p = preset == "asymptotic" ? AnalysisParams::for_n(n) : AnalysisParams::desk();
    if (delta) p.delta = *delta;
    if (t_low) p.t_low = *t_low;
    if (t_high) p.t_high = *t_high;
    if (d_min) p.d_min = *d_min;
    if (one_move_frac) p.one_move_frac = *one_move_frac;
    if (bucket_base) p.bucket_base = *bucket_base;
    if (min_occurrences) p.min_occurrences = *min_occurrences;
    if (ledger_cap) p.cycle_ledger_cap = *ledger_cap;
    p.validate();
    return p;
  }
};

Window parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw InvalidArgument("window must be START:LENGTH");
  try {
    return Window{std::stoul(s.substr(0, colon)), std::stoul(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw InvalidArgument("window must be START:LENGTH, got '" + s + "'");
  }
}

int verify_report(const std::string& report_path, const std::string& trace_path, std::ostream& out) {
  const ReportFile rep = report_from_json(read_file(report_path), report_path);
  auto fail = [&](const std::string& invariant, const std::string& detail) {
    out << "FAIL " << invariant << ": " << detail << "\n";
    return kExitFailure;
  };
  if (auto r = check_stored_matrix(rep.certificate); !r.ok) return fail(r.invariant, r.detail);
  if (rep.window != rep.certificate.window) return fail("window", "report and certificate windows differ");
  if (rep.window_moves.size() != rep.window.length) return fail("window", "window moves do not match its length");
  if (!trace_path.empty()) {
    const Trace t = trace_from_jsonl(read_file(trace_path), trace_path);
    if (rep.window.start < 1 || rep.window.last() > t.steps.size()) return fail("window", "window exceeds the trace");
    if (slice(t.moves(), rep.window) != rep.window_moves) return fail("window", "window moves differ from the trace");
  }
  if (auto r = verify_certificate(rep.window_moves, rep.certificate); !r.ok) return fail(r.invariant, r.detail);
  if (rep.rank != rep.certificate.items.size()) return fail("rank", "reported rank differs from the certificate count");
  out << "PASS " << rep.certificate.items.size() << " certificates, rank " << rep.rank << "\n";
  return kExitOk;
}

}  // namespace

int main_with(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Smoothed local search laboratory for Max-Cut, bisection and binary function optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fliplab 1.0.0");
  std::function<int()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "Sample an instance from a perturbation model");
  std::size_t gen_n = 0;
  double gen_phi = 1;
  std::string gen_family = "uniform_window", gen_out;
  std::uint64_t gen_seed = 0;
  gen->add_option("--n", gen_n, "Number of nodes")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 16));
  gen->add_option("--phi", gen_phi, "Density bound")->required();
  gen->add_option("--family", gen_family, "uniform_window or trunc_gauss")
      ->check(CLI::IsMember({"uniform_window", "trunc_gauss"}));
  gen->add_option("--seed", gen_seed, "Seed (FLIPLAB_SEED overrides)");
  gen->add_option("--out", gen_out, "Output directory for instance.json and model.json")->required();
  gen->callback([&] {
    action = [&] {
      PerturbationModel m{gen_n, parse_noise_family(gen_family), {}, gen_phi, effective_seed(gen_seed)};
      const EdgeWeights w = sample_weights(m);
      std::filesystem::create_directories(gen_out);
      write_file(gen_out + "/model.json", model_to_json(m));
      write_file(gen_out + "/instance.json", instance_to_json(w));
      out << "wrote " << gen_out << "/instance.json (n=" << gen_n << ", seed=" << m.seed << ")\n";
      return kExitOk;
    };
  });

  // run
  auto* runc = app.add_subcommand("run", "Run a local search engine on an instance and record the trace");
  std::string run_instance, run_engine = "two-flip", run_rule = "best", run_init = "random", run_out, run_family =
                                                                                                         "uniform_window";
  std::optional<std::size_t> run_n;
  std::optional<double> run_phi;
  std::uint64_t run_seed = 0;
  std::int64_t run_cap = static_cast<std::int64_t>(kDefaultStepCap);
  runc->add_option("--instance", run_instance, "Instance file");
  runc->add_option("--n", run_n, "Sample an instance with this many nodes instead of reading one");
  runc->add_option("--phi", run_phi, "Density bound for a sampled instance");
  runc->add_option("--family", run_family, "Noise family for a sampled instance")
      ->check(CLI::IsMember({"uniform_window", "trunc_gauss"}));
  runc->add_option("--engine", run_engine, "one-flip, two-flip, pure-two-flip or swap")->check(CLI::IsMember(engine_names()));
  runc->add_option("--rule", run_rule, "Pivot rule")->check(CLI::IsMember(all_rule_names()));
  runc->add_option("--seed", run_seed, "Seed for the start, the pivot rule and sampling (FLIPLAB_SEED overrides)");
  runc->add_option("--step-cap", run_cap, "Largest number of steps")->check(CLI::NonNegativeNumber);
  runc->add_option("--init", run_init, "Start: random (balanced for swap) or minus (all -1)")
      ->check(CLI::IsMember({"random", "minus"}));
  runc->add_option("--out", run_out, "Trace file (JSON Lines)")->required();
  runc->callback([&] {
    action = [&] {
      const std::uint64_t seed = effective_seed(run_seed);
      EdgeWeights w;
      if (!run_instance.empty()) {
        w = instance_from_json(read_file(run_instance), run_instance);
      } else if (run_n && run_phi) {
        w = sample_weights(PerturbationModel{*run_n, parse_noise_family(run_family), {}, *run_phi, seed});
      } else {
        throw CLI::ValidationError("run", "give --instance, or --n and --phi");
      }
      const EngineKind e = parse_engine(run_engine);
      const Trace t = run(w, start_config(w.n(), run_init, seed, e), e, PivotRule::parse(run_rule, seed), run_cap);
      write_file(run_out, trace_to_jsonl(t));
      out << "steps " << t.steps.size() << ", " << to_string(t.status) << "\n";
      return kExitOk;
    };
  });

  // scan
  auto* scan = app.add_subcommand("scan", "Find maximal runs of eps-improving steps in a trace");
  std::string scan_trace, scan_out;
  double scan_eps = 0;
  scan->add_option("--trace", scan_trace, "Trace file")->required();
  scan->add_option("--eps", scan_eps, "Improvement bound eps")->required()->check(CLI::PositiveNumber);
  scan->add_option("--out", scan_out, "Report file (default stdout)");
  scan->callback([&] {
    action = [&] {
      const Trace t = trace_from_jsonl(read_file(scan_trace), scan_trace);
      const auto windows = epsilon_scan(t, scan_eps);
      std::size_t longest = 0;
      std::ostringstream ss;
      ss << "{\n  \"eps\": " << format_double(scan_eps) << ",\n  \"steps\": " << t.steps.size() << ",\n  \"windows\": [";
      for (std::size_t k = 0; k < windows.size(); ++k) {
        ss << (k ? ", " : "") << "[" << windows[k].start << ", " << windows[k].length << "]";
        longest = std::max(longest, windows[k].length);
      }
      ss << "],\n  \"longest\": " << longest << "\n}\n";
      emit(scan_out, ss.str(), out);
      return kExitOk;
    };
  });

  // analyze
  auto* an = app.add_subcommand("analyze", "Build a rank certificate for a trace");
  std::string an_trace, an_out, an_window;
  AnalysisFlags an_flags;
  an->add_option("--trace", an_trace, "Trace file")->required();
  an->add_option("--window", an_window, "Analyze only steps START:LENGTH of the trace");
  an->add_option("--out", an_out, "Report file")->required();
  an_flags.add(an);
  an->callback([&] {
    action = [&] {
      const Trace t = trace_from_jsonl(read_file(an_trace), an_trace);
      MoveSequence s = t.moves();
      std::size_t offset = 0;
      if (!an_window.empty()) {
        const Window w = parse_window(an_window);
        if (w.start < 1 || w.length == 0 || w.last() > s.size()) throw InvalidArgument("window exceeds the trace");
        s = slice(s, w);
        offset = w.start - 1;
      }
      AnalysisReport rep = analyze(s, an_flags.build(t.n));
      // report windows in trace coordinates
      rep.certificate.window.start += offset;
      write_file(an_out, report_to_json(rep));
      out << to_string(rep.kind) << " case, rank " << rep.rank << " over " << rep.certificate.window.length
          << " steps\n";
      for (const auto& d : rep.diagnostics) out << "  " << d.stage << ": " << d.message << "\n";
      return kExitOk;
    };
  });

  // verify
  auto* ver = app.add_subcommand("verify", "Independently re-check an analysis report");
  std::string ver_report, ver_trace;
  ver->add_option("--report", ver_report, "Report file")->required();
  ver->add_option("--trace", ver_trace, "Trace the report was made from; checks the embedded window");
  ver->callback([&] { action = [&] { return verify_report(ver_report, ver_trace, out); }; });

  // bench
  auto* bench = app.add_subcommand(
      "bench", "Run seeded experiments and write CSV columns n,phi,engine,rule,rep,seed,steps,status,wall_ms");
  BenchConfig bcfg;
  std::vector<std::string> b_engines{"two-flip"}, b_rules{"best"};
  std::string b_family = "uniform_window", b_out;
  bool b_no_timing = false;
  bench->add_option("--n", bcfg.sizes, "Comma-separated sizes")->required()->delimiter(',');
  bench->add_option("--phi", bcfg.phis, "Comma-separated density bounds")->required()->delimiter(',');
  bench->add_option("--engine", b_engines, "Comma-separated engines")->delimiter(',')->check(CLI::IsMember(engine_names()));
  bench->add_option("--rule", b_rules, "Comma-separated pivot rules")->delimiter(',')->check(CLI::IsMember(all_rule_names()));
  bench->add_option("--family", b_family, "Noise family")->check(CLI::IsMember({"uniform_window", "trunc_gauss"}));
  bench->add_option("--reps", bcfg.reps, "Repetitions per cell")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bcfg.seed, "Seed (FLIPLAB_SEED overrides)");
  bench->add_option("--step-cap", bcfg.step_cap, "Largest number of steps per run")->check(CLI::NonNegativeNumber);
  bench->add_option("--jobs", bcfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_flag("--no-timing", b_no_timing, "Write 0 for wall_ms so output is byte-reproducible");
  bench->add_option("--out", b_out, "CSV file (default stdout)");
  bench->callback([&] {
    action = [&] {
      bcfg.seed = effective_seed(bcfg.seed);
      bcfg.engines.clear();
      for (const auto& e : b_engines) bcfg.engines.push_back(parse_engine(e));
      bcfg.rules = b_rules;
      bcfg.family = parse_noise_family(b_family);
      bcfg.timing = !b_no_timing;
      emit(b_out, bench_csv(run_bench(bcfg)), out);
      return kExitOk;
    };
  });

  // csp
  auto* csp = app.add_subcommand("csp", "Binary function optimization instances");
  csp->require_subcommand(1);
  auto* enc = csp->add_subcommand("encode", "Write a Max-Cut instance as one not-equal function per pair");
  std::string enc_in, enc_out;
  enc->add_option("--instance", enc_in, "Instance file")->required();
  enc->add_option("--out", enc_out, "BFOP file")->required();
  enc->callback([&] {
    action = [&] {
      write_file(enc_out, bfop_to_json(maxcut_as_bfop(instance_from_json(read_file(enc_in), enc_in))));
      return kExitOk;
    };
  });
  auto* dec = csp->add_subcommand("decompose", "Replace separable functions by unary ones");
  std::string dec_in, dec_out;
  dec->add_option("--bfop", dec_in, "BFOP file")->required();
  dec->add_option("--out", dec_out, "BFOP file")->required();
  dec->callback([&] {
    action = [&] {
      const BFOPInstance inst = decompose(bfop_from_json(read_file(dec_in), dec_in));
      write_file(dec_out, bfop_to_json(inst));
      out << inst.functions.size() << " binary, " << inst.unary.size() << " unary functions\n";
      return kExitOk;
    };
  });
  auto* crun = csp->add_subcommand("run", "Local search on a BFOP instance");
  std::string crun_in, crun_out, crun_engine = "two-flip", crun_rule = "best", crun_init = "random";
  std::uint64_t crun_seed = 0;
  std::int64_t crun_cap = static_cast<std::int64_t>(kDefaultStepCap);
  crun->add_option("--bfop", crun_in, "BFOP file")->required();
  crun->add_option("--engine", crun_engine, "Engine")->check(CLI::IsMember(engine_names()));
  crun->add_option("--rule", crun_rule, "Pivot rule")->check(CLI::IsMember(all_rule_names()));
  crun->add_option("--seed", crun_seed, "Seed (FLIPLAB_SEED overrides)");
  crun->add_option("--step-cap", crun_cap, "Largest number of steps")->check(CLI::NonNegativeNumber);
  crun->add_option("--init", crun_init, "random or minus")->check(CLI::IsMember({"random", "minus"}));
  crun->add_option("--out", crun_out, "Trace file")->required();
  crun->callback([&] {
    action = [&] {
      const std::uint64_t seed = effective_seed(crun_seed);
      const BFOPInstance inst = bfop_from_json(read_file(crun_in), crun_in);
      const EngineKind e = parse_engine(crun_engine);
      const Trace t =
          bfop_run(inst, start_config(inst.n, crun_init, seed, e), PivotRule::parse(crun_rule, seed), crun_cap, e);
      write_file(crun_out, trace_to_jsonl(t));
      out << "steps " << t.steps.size() << ", " << to_string(t.status) << "\n";
      return kExitOk;
    };
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int main_with(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return main_with(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace fliplab::cli
