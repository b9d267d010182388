// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cstring>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "commands.hpp"
#include "constructions.hpp"
#include "fliplab/analysis.hpp"
#include "fliplab/csp.hpp"
#include "fliplab/search.hpp"
#include "fliplab/smoothing.hpp"
#include "oracles.hpp"

using namespace fliplab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  std::size_t failures() const { return failures_; }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, summary + "; " + std::to_string(failures_) + " violation(s), first: " + first_};
  }

 private:
  std::size_t failures_ = 0;
  std::string first_;
};

std::string seq_string(const MoveSequence& s) {
  std::string out;
  for (const Move& m : s) out += to_string(m);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EdgeWeights random_instance(std::mt19937_64& rng, std::size_t n, double phi, NoiseFamily family = NoiseFamily::UniformWindow) {
  PerturbationModel m;
  m.n = n;
  m.family = family;
  m.phi = phi;
  m.seed = rng();
  std::uniform_real_distribution<double> mean(-1, 1);
  for (std::size_t k = 0; k < edge_count(n); ++k) m.means[edge_at(n, k)] = mean(rng);
  return sample_weights(m);
}

std::vector<int> random_signs(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> s(n);
  for (auto& x : s) x = (rng() & 1) ? 1 : -1;
  return s;
}

std::vector<NodeId> all_nodes(std::size_t n) {
  std::vector<NodeId> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = static_cast<NodeId>(k);
  return v;
}

NodeId max_node(const MoveSequence& s) {
  NodeId m = 0;
  for (const Move& x : s) m = std::max(m, x.max_node());
  return m;
}

// Half random valid sequences, half windows cut from 2-flip traces.
std::vector<MoveSequence> sample_windows(std::mt19937_64& rng, std::size_t count) {
  std::vector<MoveSequence> out;
  const double one_probs[] = {0.0, 0.2, 0.5};
  while (out.size() < count) {
    if (out.size() % 2 == 0) {
      const std::size_t n = 6 + rng() % 4, len = 10 + rng() % 21;
      auto s = oracle::random_valid(rng, n, len, one_probs[rng() % 3]);
      if (s.size() >= 4) out.push_back(s);
    } else {
      const std::size_t n = 10 + rng() % 5;
      auto w = random_instance(rng, n, 10);
      const EngineKind e = (rng() & 1) ? EngineKind::TwoFlip : EngineKind::PureTwoFlip;
      auto tr = run(w, Configuration(random_signs(rng, n)), e, PivotRule::parse("first-cyclic"));
      auto s = tr.moves();
      if (s.size() < 4) continue;
      const std::size_t len = std::min<std::size_t>(s.size(), 8 + rng() % 23);
      const std::size_t start = 1 + rng() % (s.size() - len + 1);
      out.push_back(slice(s, Window{start, len}));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome validity() {
  const auto t0 = std::chrono::steady_clock::now();
  Checker ck;
  std::mt19937_64 rng(101);
  std::size_t runs = 0, steps = 0, oracle_checked = 0;
  const auto rules = all_rule_names();
  for (int rep = 0; rep < 11; ++rep) {
    for (double phi : {1.0, 10.0, 100.0}) {
      for (EngineKind e : kAllEngines) {
        for (const auto& rule : rules) {
          std::size_t n = 6 + (runs * 7) % 25;
          if (e == EngineKind::Swap && n % 2) ++n;
          auto w = random_instance(rng, n, phi);
          const std::uint64_t seed = rng();
          auto gamma0 = random_configuration(n, seed, e == EngineKind::Swap);
          auto tr = run(w, gamma0, e, PivotRule::parse(rule, seed));
          const auto s = tr.moves();
          const std::string tag = to_string(e) + "/" + rule + " n=" + std::to_string(n);
          ck.expect(tr.status == RunStatus::LocalOpt, tag + " did not reach a local optimum");
          ck.expect(is_valid_sequence(s).valid, tag + " produced an invalid sequence");
          for (const auto& st : tr.steps) ck.expect(st.delta > 0, tag + " took a non-improving step");
          if (s.size() <= 150) {
            ck.expect(oracle::valid(s), tag + " invalid by brute force");
            ++oracle_checked;
          }
          ++runs;
          steps += s.size();
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  ck.expect(runs >= 1000, "fewer than 1000 runs");
  ck.expect(secs <= 300, "took longer than 5 minutes");
  std::ostringstream os;
  os << runs << " runs, " << steps << " steps, " << oracle_checked << " rechecked by brute force, " << secs << " s";
  return ck.outcome(os.str());
}

Outcome cancellation() {
  Checker ck;
  std::mt19937_64 rng(102);
  std::size_t arcs = 0, cycles = 0;
  for (const auto& s : sample_windows(rng, 200)) {
    const auto act = active_nodes(s);
    const std::set<NodeId> aset(act.begin(), act.end());
    const std::size_t N = static_cast<std::size_t>(max_node(s)) + 4;
    const auto arc_list = enumerate_arcs(s);
    const auto cyc = enumerate_cycles(s, CycleBudget{8, 2000});
    auto outside_zero = [&](const EdgeVector& v) {
      for (const auto& [k, x] : v.entries()) {
        if (!aset.count(k.lo) || !aset.count(k.hi)) return false;
      }
      return true;
    };
    for (int ext = 0; ext < 5; ++ext) {
      const auto g = random_signs(rng, N);
      const Configuration gamma0(g);
      const auto tau0 = PartialConfiguration::restrict(gamma0, act);
      const auto configs = oracle::replay(g, s);
      for (const Arc& a : arc_list) {
        const auto v = arc_vector(s, gamma0, a);
        const auto ov = oracle::combination(s, g, {a.i, a.j},
                                            {configs[a.i][static_cast<std::size_t>(a.node)],
                                             -configs[a.j][static_cast<std::size_t>(a.node)]},
                                            all_nodes(N));
        ck.expect(outside_zero(v), "arc vector leaks outside E(S) on " + seq_string(s));
        ck.expect(outside_zero(ov), "recomputed arc combination leaks on " + seq_string(s));
        ck.expect(v == ov, "arc vector differs from recomputation on " + seq_string(s));
        ++arcs;
      }
      for (const Cycle& c : cyc.cycles) {
        const auto dep = is_dependent(s, c, tau0);
        if (!dep.dependent || c.steps.size() > 8) continue;
        const auto v = cycle_vector(s, gamma0, c, dep.b);
        const auto ov = oracle::combination(s, g, c.steps, dep.b, all_nodes(N));
        ck.expect(outside_zero(v), "cycle vector leaks outside E(S) on " + seq_string(s));
        ck.expect(outside_zero(ov), "recomputed cycle combination leaks on " + seq_string(s));
        ck.expect(v == ov, "cycle vector differs from recomputation on " + seq_string(s));
        ++cycles;
      }
    }
  }
  ck.expect(arcs > 0 && cycles > 0, "no arcs or no dependent cycles exercised");
  return ck.outcome(std::to_string(arcs) + " arc and " + std::to_string(cycles) +
                    " dependent-cycle vectors over 200 windows x 5 extensions");
}

Outcome invariance() {
  Checker ck;
  std::mt19937_64 rng(103);
  const CycleBudget budget{8, 2000};
  std::size_t cycles_seen = 0, max_ra = 0, max_rc = 0;
  for (const auto& s : sample_windows(rng, 100)) {
    const auto act = active_nodes(s);
    const auto base_tau = default_tau0(s);
    const auto ra = rank_arcs(s, base_tau);
    const auto rc = rank_cycles(s, base_tau, budget).rank;
    const auto cyc = enumerate_cycles(s, budget);
    std::vector<Dependence> base;
    for (const Cycle& c : cyc.cycles) base.push_back(is_dependent(s, c, base_tau));
    cycles_seen += cyc.cycles.size();
    max_ra = std::max(max_ra, ra);
    max_rc = std::max(max_rc, rc);
    for (int t = 0; t < 10; ++t) {
      const PartialConfiguration tau(act, random_signs(rng, act.size()));
      const std::string tag = seq_string(s);
      ck.expect(rank_arcs(s, tau) == ra, "rank_arcs changed on " + tag);
      ck.expect(rank_cycles(s, tau, budget).rank == rc, "rank_cycles changed on " + tag);
      for (std::size_t k = 0; k < cyc.cycles.size(); ++k) {
        const auto d = is_dependent(s, cyc.cycles[k], tau);
        ck.expect(d.dependent == base[k].dependent, "dependence changed on " + tag);
        ck.expect(d.b == base[k].b, "cancellation vector changed on " + tag);
      }
    }
  }
  std::ostringstream os;
  os << "100 windows x 10 initial signs, " << cycles_seen << " cycles, max rank_arcs " << max_ra
     << ", max rank_cycles " << max_rc;
  return ck.outcome(os.str());
}

// Recomputes a certificate from scratch: structure of each item, its vector
// from cut indicators, dependence against an extra inactive node, witness
// matrix triangularity and rational rank.
void recheck_certificate(Checker& ck, const MoveSequence& w, const TriangularCertificate& c, const std::string& tag) {
  const auto vr = verify_certificate(w, c);
  ck.expect(vr.ok, tag + ": verify_certificate failed " + vr.invariant + " " + vr.detail);
  if (c.items.empty()) return;
  const NodeId extra = max_node(w) + 1;
  std::vector<int> start(static_cast<std::size_t>(extra) + 1, -1);
  auto nodes = oracle::active(w);
  auto with_extra = nodes;
  with_extra.push_back(extra);
  const auto configs = oracle::replay(start, w);
  std::vector<EdgeVector> vecs;
  for (const auto& it : c.items) {
    const std::size_t t = it.steps.size();
    bool shape = t >= 2 && it.coefficients.size() == t;
    for (std::size_t k = 0; shape && k < t; ++k) shape = it.steps[k] >= 1 && it.steps[k] <= w.size();
    if (shape && it.kind == CertificateKind::ArcPair) {
      const NodeId u = it.nodes.empty() ? -1 : it.nodes[0];
      const std::size_t i = it.steps[0], j = it.steps[1];
      shape = t == 2 && it.nodes.size() == 1 && i < j && w[i - 1] == Move::one(u) && w[j - 1] == Move::one(u);
      for (std::size_t k = i + 1; shape && k < j; ++k) shape = !(w[k - 1] == Move::one(u));
      shape = shape && it.coefficients[0] == configs[i][static_cast<std::size_t>(u)] &&
              it.coefficients[1] == -configs[j][static_cast<std::size_t>(u)];
    } else if (shape) {
      shape = it.nodes.size() == t && std::set<std::size_t>(it.steps.begin(), it.steps.end()).size() == t;
      for (std::size_t k = 0; shape && k < t; ++k) {
        shape = w[it.steps[k] - 1] == Move::two(it.nodes[k], it.nodes[(k + 1) % t]) &&
                (it.coefficients[k] == 1 || it.coefficients[k] == -1);
      }
    }
    ck.expect(shape, tag + ": malformed item");
    if (!shape) return;
    const auto ext = oracle::combination(w, start, it.steps, it.coefficients, with_extra);
    for (const auto& [k, x] : ext.entries()) ck.expect(!k.contains(extra), tag + ": combination does not cancel");
    const auto v = oracle::combination(w, start, it.steps, it.coefficients, nodes);
    ck.expect(v == it.vector, tag + ": stored vector differs from recomputation");
    vecs.push_back(v);
  }
  const std::size_t m = c.items.size();
  ck.expect(c.matrix.rows == m && c.matrix.cols == m, tag + ": matrix not square");
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t col = 0; col < m; ++col) {
      const auto x = vecs[col].at(c.items[r].witness);
      if (col > r) ck.expect(x == 0, tag + ": nonzero above the diagonal");
      if (col == r) ck.expect(x != 0, tag + ": zero on the diagonal");
      if (c.matrix.rows == m && c.matrix.cols == m) ck.expect(c.matrix.at(r, col) == x, tag + ": stored matrix differs");
    }
  }
  ck.expect(oracle::rank(vecs) == m, tag + ": rational rank below item count");
  ck.expect(c.rank == m, tag + ": stored rank differs from item count");
}

Outcome certificate_soundness() {
  const auto t0 = std::chrono::steady_clock::now();
  Checker ck;
  std::mt19937_64 rng(104);
  AnalysisParams p = AnalysisParams::desk();
  p.d_min = 2;
  std::size_t certs = 0, items = 0, traces = 0, windows = 0;
  auto check_all = [&](const MoveSequence& s, const std::string& tag) {
    auto check = [&](const MoveSequence& w, const TriangularCertificate& c, const std::string& what) {
      recheck_certificate(ck, w, c, tag + " " + what);
      ++certs;
      items += c.size();
    };
    const auto h = harvest_cycles(s, p);
    check(s, h.two_cycles.certificate, "parallel 2-cycles");
    check(s, h.certificate, "harvest");
    const auto a = case1_arcs(s, p);
    check(slice(s, a.window), a.certificate, "arcs");
    const auto r = analyze(s, p);
    check(r.window_moves, r.certificate, "analyze");
    if (r.cycles) check(r.window_moves, r.cycles->two_cycles.certificate, "analyze 2-cycles");
  };
  const EngineKind engines[] = {EngineKind::TwoFlip, EngineKind::PureTwoFlip, EngineKind::OneFlip, EngineKind::Swap};
  const auto rules = all_rule_names();
  while (traces < 100) {
    const EngineKind e = engines[traces % 4];
    std::size_t n = 12 + rng() % 19;
    if (e == EngineKind::Swap && n % 2) ++n;
    auto w = random_instance(rng, n, traces % 2 ? 10.0 : 1.0);
    const std::uint64_t seed = rng();
    auto tr = run(w, random_configuration(n, seed, e == EngineKind::Swap), e,
                  PivotRule::parse(rules[traces % rules.size()], seed));
    if (tr.steps.size() < 2) continue;
    check_all(tr.moves(), "trace " + std::to_string(traces));
    ++traces;
  }
  std::vector<MoveSequence> adversarial;
  for (NodeId m : {2, 4, 6}) {
    for (int slot = 0; slot < 3; ++slot) adversarial.push_back(construct::disjoint_four_cycles(m, slot));
  }
  for (NodeId m : {1, 3, 5, 8}) adversarial.push_back(construct::parallel_edge_farm(m));
  for (NodeId k : {3, 6, 10, 20}) adversarial.push_back(construct::arc_chain(k));
  for (NodeId k : {2, 6}) adversarial.push_back(construct::arc_patterns(k));
  for (std::uint64_t seed : {0, 1}) {
    std::mt19937_64 arr(seed);
    adversarial.push_back(oracle::valid_arrangement(arr, oracle::complete_bipartite(8, 8)));
  }
  for (const auto& s : adversarial) {
    ck.expect(oracle::valid(s), "adversarial window is not valid");
    check_all(s, "window " + std::to_string(windows));
    ++windows;
  }
  const double secs = seconds_since(t0);
  ck.expect(secs <= 600, "took longer than 10 minutes");
  std::ostringstream os;
  os << traces << " traces + " << windows << " constructed windows, " << certs << " certificates with " << items
     << " items rechecked, " << secs << " s";
  return ck.outcome(os.str());
}

// Terminal configuration beats every configuration in the engine's
// neighborhood, enumerated over all 2^n configurations.
bool brute_local_opt(const EdgeWeights& w, const Configuration& gamma, EngineKind e) {
  const std::size_t n = w.n();
  const auto g = gamma.to_vector();
  const double here = oracle::cut_value(w, g);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> c(n);
    std::vector<std::size_t> diff;
    for (std::size_t u = 0; u < n; ++u) {
      c[u] = (mask >> u) & 1 ? 1 : -1;
      if (c[u] != g[u]) diff.push_back(u);
    }
    bool neighbor = false;
    switch (e) {
      case EngineKind::OneFlip: neighbor = diff.size() == 1; break;
      case EngineKind::TwoFlip: neighbor = diff.size() == 1 || diff.size() == 2; break;
      case EngineKind::PureTwoFlip: neighbor = diff.size() == 2; break;
      case EngineKind::Swap: neighbor = diff.size() == 2 && g[diff[0]] != g[diff[1]]; break;
    }
    if (neighbor && oracle::cut_value(w, c) > here) return false;
  }
  return true;
}

Outcome local_optimum() {
  Checker ck;
  std::mt19937_64 rng(105);
  const auto rules = all_rule_names();
  std::size_t runs = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 2 + static_cast<std::size_t>(inst) % 5;
    auto w = random_instance(rng, n, inst % 2 ? 10.0 : 1.0);
    for (EngineKind e : kAllEngines) {
      if (e == EngineKind::Swap && n % 2) continue;
      const std::uint64_t seed = rng();
      auto tr = run(w, random_configuration(n, seed, e == EngineKind::Swap), e,
                    PivotRule::parse(rules[static_cast<std::size_t>(inst) % rules.size()], seed));
      auto end = tr.gamma0;
      for (const auto& st : tr.steps) end = apply_move(end, st.move);
      const std::string tag = "instance " + std::to_string(inst) + " " + to_string(e);
      ck.expect(tr.status == RunStatus::LocalOpt, tag + " hit the cap");
      ck.expect(brute_local_opt(w, end, e), tag + " stopped at a non-optimum");
      ck.expect(is_local_optimum(w, end, e), tag + " rejected by is_local_optimum");
      ++runs;
    }
  }
  return ck.outcome("200 instances, " + std::to_string(runs) + " engine runs");
}

Outcome probability_bound_check() {
  Checker ck;
  const std::size_t n = 5, draws = 100000;
  const double phi = 5, eps = 0.02;
  const std::vector<MoveSequence> seqs{
      {Move::one(0), Move::one(1), Move::one(0)},
      {Move::one(0), Move::one(1), Move::one(0), Move::one(2), Move::one(0)},
      {Move::one(0), Move::one(1), Move::one(0), Move::one(2), Move::one(0), Move::one(1)},
  };
  std::mt19937_64 rng(106);
  std::ostringstream os;
  for (std::size_t r = 1; r <= 3; ++r) {
    const auto& s = seqs[r - 1];
    const std::size_t rank = std::max(rank_arcs(s), rank_cycles(s).rank);
    ck.expect(rank == r, "fixed sequence has rank " + std::to_string(rank) + ", expected " + std::to_string(r));
    ck.expect(is_valid_sequence(s).valid, "fixed sequence is not valid");
    const double bound = probability_bound(static_cast<double>(s.size()), phi, eps, rank);
    // zero means plus a few random centerings
    double worst = 0;
    for (int model = 0; model < 4; ++model) {
      PerturbationModel m;
      m.n = n;
      m.phi = phi;
      m.seed = rng();
      std::uniform_real_distribution<double> mean(-0.5, 0.5);
      if (model > 0) {
        for (std::size_t k = 0; k < edge_count(n); ++k) m.means[edge_at(n, k)] = mean(rng);
      }
      const Configuration gamma0 = Configuration::uniform(n, -1);
      std::size_t hits = 0;
      for (std::size_t d = 0; d < draws; ++d) {
        m.seed = rng();
        const auto w = sample_weights(m);
        Configuration g = gamma0;
        bool all = true;
        for (const Move& mv : s) {
          const double delta = move_delta(w, g, mv);
          if (!(delta > 0 && delta <= eps)) {
            all = false;
            break;
          }
          g = apply_move(g, mv);
        }
        hits += all;
      }
      const double f = static_cast<double>(hits) / static_cast<double>(draws);
      const double se = std::sqrt(f * (1 - f) / static_cast<double>(draws));
      ck.expect(f <= bound + 3 * se, "rank " + std::to_string(r) + " frequency " + std::to_string(f) +
                                         " exceeds bound " + std::to_string(bound));
      worst = std::max(worst, f);
    }
    os << (r > 1 ? ", " : "") << "rank " << r << ": max freq " << worst << " <= bound " << bound;
  }
  return ck.outcome(os.str());
}

Outcome objective_drift() {
  Checker ck;
  std::mt19937_64 rng(107);
  const std::size_t n = 40, steps = 1000000;
  auto w = random_instance(rng, n, 10);
  Configuration g(random_signs(rng, n));
  double inc = objective(w, g), worst = 0;
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n) - 1);
  for (std::size_t k = 1; k <= steps; ++k) {
    Move m;
    const NodeId a = node(rng), b = node(rng);
    m = (a == b || (rng() & 1)) ? Move::one(a) : Move::two(a, b);
    inc += move_delta(w, g, m);
    g = apply_move(std::move(g), m);
    if (k % 10000 == 0 || k == steps) worst = std::max(worst, std::abs(inc - objective(w, g)));
  }
  ck.expect(worst <= 1e-9, "drift " + std::to_string(worst));
  std::ostringstream os;
  os << steps << " random moves on n=" << n << ", max drift " << worst;
  return ck.outcome(os.str());
}

std::vector<std::pair<EdgeKey, bool>> pattern(const EdgeVector& v, std::size_t n) {
  std::vector<std::pair<EdgeKey, bool>> out;
  for (std::size_t k = 0; k < edge_count(n); ++k) out.push_back({edge_at(n, k), v.at(edge_at(n, k)) != 0});
  return out;
}

Outcome bfop_equivalence() {
  Checker ck;
  std::mt19937_64 rng(108);
  const auto rules = all_rule_names();
  std::size_t vectors = 0, items = 0;
  AnalysisParams p = AnalysisParams::desk();
  p.d_min = 2;
  for (int t = 0; t < 50; ++t) {
    const EngineKind e = kAllEngines[t % 4];
    std::size_t n = 8 + rng() % 9;
    if (e == EngineKind::Swap && n % 2) ++n;
    auto w = random_instance(rng, n, t % 3 == 0 ? 1.0 : 10.0);
    const std::uint64_t seed = rng();
    const auto gamma0 = random_configuration(n, seed, e == EngineKind::Swap);
    const auto rule = PivotRule::parse(rules[static_cast<std::size_t>(t) % rules.size()], seed);
    const auto native = run(w, gamma0, e, rule);
    const auto inst = maxcut_as_bfop(w);
    const auto enc = bfop_run(inst, gamma0, rule, static_cast<std::int64_t>(kDefaultStepCap), e);
    const std::string tag = "run " + std::to_string(t);
    bool same = native.steps.size() == enc.steps.size() && native.status == enc.status;
    for (std::size_t k = 0; same && k < native.steps.size(); ++k) {
      same = native.steps[k].move == enc.steps[k].move &&
             std::memcmp(&native.steps[k].delta, &enc.steps[k].delta, sizeof(double)) == 0;
    }
    ck.expect(same, tag + ": traces differ");
    if (!same) continue;
    const auto s = native.moves();
    for (std::size_t i = 1; i <= s.size(); ++i) {
      const auto mv = move_vector(s, gamma0, i);
      const auto fv = function_to_edge_vector(n, bfop_improvement_vector(inst, gamma0, s, i));
      ck.expect(pattern(mv, n) == pattern(fv, n), tag + ": step vector structure differs");
      ++vectors;
    }
    // certificate combinations replayed from the window's actual start
    const auto r = analyze(s, p);
    std::vector<TriangularCertificate> certs{r.certificate};
    if (r.cycles) certs.push_back(r.cycles->two_cycles.certificate);
    const auto configs = induced_configurations(gamma0, s);
    for (const auto& c : certs) {
      const auto wm = slice(s, c.window);
      const auto& g = configs[c.window.start - 1];
      std::vector<EdgeVector> native_vecs, enc_vecs;
      std::vector<EdgeKey> rows;
      for (const auto& it : c.items) {
        EdgeVector v;
        for (std::size_t k = 0; k < it.steps.size(); ++k) v.add(move_vector(wm, g, it.steps[k]), it.coefficients[k]);
        native_vecs.push_back(v);
        enc_vecs.push_back(
            function_to_edge_vector(n, bfop_combination(inst, g, wm, it.steps, it.coefficients)));
        rows.push_back(it.witness);
        ++items;
      }
      const auto a = matrix_on_rows(native_vecs, rows), b = matrix_on_rows(enc_vecs, rows);
      bool eq = a.data.size() == b.data.size();
      for (std::size_t k = 0; eq && k < a.data.size(); ++k) eq = (a.data[k] != 0) == (b.data[k] != 0);
      ck.expect(eq, tag + ": witness matrix structure differs");
      for (std::size_t k = 0; k < native_vecs.size(); ++k) {
        ck.expect(pattern(native_vecs[k], n) == pattern(enc_vecs[k], n), tag + ": combination structure differs");
      }
    }
  }
  return ck.outcome("50 runs, " + std::to_string(vectors) + " step vectors and " + std::to_string(items) +
                    " certificate combinations compared");
}

Outcome bench_scaling() {
  const auto t0 = std::chrono::steady_clock::now();
  Checker ck;
  cli::BenchConfig cfg;
  cfg.sizes = {10, 20, 40, 80};
  cfg.phis = {1, 10, 100};
  cfg.reps = 50;
  cfg.seed = 109;
  cfg.step_cap = 100000000;
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
  cfg.timing = false;
  const auto rows = cli::run_bench(cfg);
  std::map<std::pair<double, std::size_t>, double> mean;
  for (const auto& r : rows) {
    ck.expect(r.status == RunStatus::LocalOpt, "run reached the step cap");
    mean[{r.phi, r.n}] += static_cast<double>(r.steps) / static_cast<double>(cfg.reps);
  }
  std::size_t good = 0;
  std::ostringstream os;
  for (double phi : cfg.phis) {
    os << " phi=" << phi << ":";
    for (std::size_t k = 0; k < cfg.sizes.size(); ++k) {
      const double m = mean[{phi, cfg.sizes[k]}];
      os << " " << m;
      if (k == 0 || m >= mean[{phi, cfg.sizes[k - 1]}]) ++good;
    }
  }
  const double secs = seconds_since(t0);
  ck.expect(rows.size() == 600, "expected 600 rows");
  ck.expect(good >= 10, "only " + std::to_string(good) + " of 12 cells nondecreasing");
  ck.expect(secs <= 1800, "took longer than 30 minutes");
  std::ostringstream head;
  head << good << "/12 cells nondecreasing, " << secs << " s; mean steps" << os.str();
  return ck.outcome(head.str());
}

Outcome window_selection() {
  Checker ck;
  AnalysisParams small = AnalysisParams::desk();
  small.d_min = 2;
  AnalysisParams dyadic = small;
  dyadic.delta = 0.25;
  dyadic.bucket_base = 2;
  auto range = [](std::size_t lo, std::size_t hi, std::size_t step = 1) {
    std::vector<std::size_t> out;
    for (std::size_t k = lo; k <= hi; k += step) out.push_back(k);
    return out;
  };
  struct Planted {
    std::string name;
    MoveSequence s;
    std::size_t ell;
    std::map<std::size_t, std::size_t> histogram;  // empty: not compared
    Window window;
    std::vector<std::size_t> qualifying;
  };
  const std::vector<Planted> cases{
      {"round robin of 3 pairs", construct::round_robin(3, 8), 3, {{3, 12}}, {1, 11}, range(1, 11)},
      {"2 alternating pairs", construct::round_robin(2, 10), 2, {{2, 14}}, {1, 6}, range(1, 6)},
      {"interleaved 1-moves", construct::interleave_one_moves(construct::round_robin(3, 8), 6), 3, {}, {1, 21},
       range(1, 21, 2)},
      {"alternating partner", construct::pair_with_alternating_partner(20), 2, {{2, 7}, {3, 4}}, {1, 6},
       {1, 2, 3, 5, 6}},
  };
  for (const auto& c : cases) {
    const auto sel = select_window(c.s, dyadic);
    ck.expect(sel.found, c.name + ": not found");
    if (!sel.found) continue;
    ck.expect(sel.ell == c.ell, c.name + ": scale " + std::to_string(sel.ell));
    if (!c.histogram.empty()) ck.expect(sel.ell_histogram == c.histogram, c.name + ": histogram differs");
    ck.expect(sel.window == c.window, c.name + ": window differs");
    ck.expect(sel.qualifying == c.qualifying, c.name + ": qualifying steps differ");
  }
  const auto hub = select_window(construct::hub(30), small);
  ck.expect(!hub.found && hub.not_found && hub.not_found->stage == "select_window", "hub: window found");
  ck.expect(!select_window(construct::arc_patterns(4), small).found, "no 2-moves: window found");
  return ck.outcome(std::to_string(cases.size()) + " planted windows, 2 planted failures");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"sequence validity", validity},
      {"cancellation outside active edges", cancellation},
      {"initial-sign invariance", invariance},
      {"certificate soundness", certificate_soundness},
      {"local optimum vs brute force", local_optimum},
      {"probability bound", probability_bound_check},
      {"incremental objective drift", objective_drift},
      {"BFOP equivalence", bfop_equivalence},
      {"bench step scaling", bench_scaling},
      {"window selection on planted sequences", window_selection},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << k + 1 << " " << criteria[k].first << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
