#include <gtest/gtest.h>

#include <random>

#include "fliplab/csp.hpp"
#include "oracles.hpp"

using namespace fliplab;

namespace {

BinaryFunction fn(NodeId x, NodeId y, std::array<std::int64_t, 4> t, double w = 1.0) {
  return BinaryFunction{x, y, t, w};
}

double brute_objective(const BFOPInstance& inst, const std::vector<int>& a) {
  double total = 0;
  for (const auto& f : inst.functions) total += f.weight * static_cast<double>(f.value(a[f.x], a[f.y]));
  for (const auto& g : inst.unary) total += g.weight * static_cast<double>(g.value(a[g.x]));
  return total;
}

BFOPInstance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t m, std::int64_t d) {
  BFOPInstance inst;
  inst.n = n;
  inst.d = d;
  std::uniform_real_distribution<double> w(-1, 1);
  for (std::size_t k = 0; k < m; ++k) {
    NodeId x = static_cast<NodeId>(rng() % n), y = static_cast<NodeId>(rng() % n);
    if (x == y) y = (y + 1) % static_cast<NodeId>(n);
    std::array<std::int64_t, 4> t{};
    for (auto& v : t) v = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(d + 1));
    inst.functions.push_back(fn(x, y, t, w(rng)));
  }
  return inst;
}

std::vector<int> signs_of(std::uint32_t mask, std::size_t n) {
  std::vector<int> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i & 1) ? 1 : -1;
  return a;
}

}  // namespace

TEST(TableIndex, Layout) {
  EXPECT_EQ(table_index(-1, -1), 0u);
  EXPECT_EQ(table_index(-1, 1), 1u);
  EXPECT_EQ(table_index(1, -1), 2u);
  EXPECT_EQ(table_index(1, 1), 3u);
}

TEST(Separable, SumIsSeparable) {
  // x + y + 2 over {-1, 1}^2
  auto s = is_separable(fn(0, 1, {0, 2, 2, 4}));
  EXPECT_TRUE(s.separable);
  ASSERT_TRUE(s.parts.has_value());
}

TEST(Separable, NotEqualIsNot) {
  auto s = is_separable(fn(0, 1, {0, 1, 1, 0}));
  EXPECT_FALSE(s.separable);
  EXPECT_FALSE(s.parts.has_value());
}

TEST(Separable, ExhaustiveSmallTables) {
  std::size_t separable = 0;
  for (int code = 0; code < 81; ++code) {
    std::array<std::int64_t, 4> t{};
    for (int k = 0, c = code; k < 4; ++k, c /= 3) t[k] = c % 3;
    auto f = fn(0, 1, t, 0.5);
    auto s = is_separable(f);
    // separable iff some g, h reproduce every entry; with g(-1) free this is
    // f(1,1) - f(1,-1) == f(-1,1) - f(-1,-1)
    bool brute = false;
    for (int g0 = -4; g0 <= 4 && !brute; ++g0) {
      for (int g1 = -4; g1 <= 4 && !brute; ++g1) {
        const int h0 = static_cast<int>(t[0]) - g0, h1 = static_cast<int>(t[1]) - g0;
        brute = g1 + h0 == t[2] && g1 + h1 == t[3];
      }
    }
    ASSERT_EQ(s.separable, brute) << code;
    if (!s.separable) continue;
    ++separable;
    const auto& [f1, f2] = *s.parts;
    EXPECT_EQ(f1.weight, 0.5);
    EXPECT_EQ(f2.weight, 0.5);
    for (int x : {-1, 1}) {
      for (int y : {-1, 1}) EXPECT_EQ(f1.value(x) + f2.value(y), f.value(x, y));
    }
  }
  EXPECT_GT(separable, 0u);
}

TEST(Decompose, AllSeparableLeavesNoBinaryFunctions) {
  BFOPInstance inst;
  inst.n = 4;
  inst.d = 4;
  inst.functions = {fn(0, 1, {0, 2, 2, 4}, 0.3), fn(2, 3, {1, 1, 1, 1}, -0.2), fn(1, 3, {0, 0, 3, 3}, 0.9)};
  auto out = decompose(inst);
  EXPECT_TRUE(out.functions.empty());
  for (std::uint32_t mask = 0; mask < 16; ++mask) {
    Configuration a(signs_of(mask, 4));
    EXPECT_NEAR(bfop_objective(out, a), bfop_objective(inst, a), 1e-12);
  }
}

TEST(Decompose, MaxCutUnchanged) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> flat(edge_count(6));
  for (auto& x : flat) x = u(rng);
  auto inst = maxcut_as_bfop(EdgeWeights(6, flat));
  auto out = decompose(inst);
  ASSERT_EQ(out.functions.size(), inst.functions.size());
  EXPECT_TRUE(out.unary.empty());
  for (std::size_t k = 0; k < inst.functions.size(); ++k) {
    EXPECT_EQ(out.functions[k].table, inst.functions[k].table);
    EXPECT_EQ(out.functions[k].weight, inst.functions[k].weight);
  }
}

TEST(Decompose, PreservesObjectiveExhaustively) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 3 + t % 8;
    auto inst = random_instance(rng, n, 3 * n, 2);
    auto out = decompose(inst);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      auto a = signs_of(mask, n);
      ASSERT_NEAR(bfop_objective(out, Configuration(a)), brute_objective(inst, a), 1e-9);
    }
  }
}

TEST(Instance, Validation) {
  BFOPInstance inst;
  inst.n = 3;
  inst.d = 2;
  inst.functions = {fn(0, 0, {0, 1, 1, 0})};
  EXPECT_THROW(inst.validate(), InvalidArgument);
  inst.functions = {fn(0, 3, {0, 1, 1, 0})};
  EXPECT_THROW(inst.validate(), InvalidArgument);
  inst.functions = {fn(0, 1, {0, 3, 1, 0})};
  EXPECT_THROW(inst.validate(), InvalidArgument);
  inst.functions = {fn(0, 1, {0, 1, 1, 0}, 1.5)};
  EXPECT_THROW(inst.validate(), InvalidArgument);
  inst.functions = {fn(0, 1, {0, 1, 1, 0}), fn(1, 2, {0, 1, 1, 0}), fn(0, 2, {2, 0, 0, 2})};
  EXPECT_NO_THROW(inst.validate());
  EXPECT_TRUE(inst.complete());
  inst.functions.pop_back();
  EXPECT_FALSE(inst.complete());
}

TEST(ObjectiveAndDelta, MatchBruteForce) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    auto inst = random_instance(rng, 6, 12, 3);
    inst.unary.push_back(UnaryFunction{2, {1, 3}, 0.4});
    auto a = signs_of(static_cast<std::uint32_t>(rng() % 64), 6);
    EXPECT_NEAR(bfop_objective(inst, Configuration(a)), brute_objective(inst, a), 1e-12);
    for (NodeId u = 0; u < 6; ++u) {
      for (NodeId v = u; v < 6; ++v) {
        const Move m = u == v ? Move::one(u) : Move::two(u, v);
        EXPECT_NEAR(bfop_move_delta(inst, Configuration(a), m),
                    brute_objective(inst, oracle::applied(a, m)) - brute_objective(inst, a), 1e-12);
      }
    }
  }
}

TEST(BfopRun, MaxCutTracesIdentical) {
  std::mt19937_64 rng(44);
  for (EngineKind e : kAllEngines) {
    for (const auto& rule : all_rule_names()) {
      std::uniform_real_distribution<double> u(-1, 1);
      std::vector<double> flat(edge_count(12));
      for (auto& x : flat) x = u(rng);
      EdgeWeights w(12, flat);
      auto g0 = random_configuration(12, rng(), e == EngineKind::Swap);
      auto a = run(w, g0, e, PivotRule::parse(rule, 3));
      auto b = bfop_run(maxcut_as_bfop(w), g0, PivotRule::parse(rule, 3), static_cast<std::int64_t>(kDefaultStepCap), e);
      ASSERT_EQ(a.steps.size(), b.steps.size()) << to_string(e) << " " << rule;
      for (std::size_t k = 0; k < a.steps.size(); ++k) {
        EXPECT_EQ(a.steps[k].move, b.steps[k].move);
        EXPECT_EQ(a.steps[k].delta, b.steps[k].delta);
      }
    }
  }
}

TEST(BfopRun, EmptyFunctionSetIsOptimal) {
  BFOPInstance inst;
  inst.n = 5;
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    Configuration a(signs_of(mask, 5));
    EXPECT_TRUE(bfop_is_local_optimum(inst, a));
    EXPECT_TRUE(bfop_run(inst, a, PivotRule::parse("best")).steps.empty());
  }
}

TEST(BfopRun, MaxTwoSatToyReachesTwoLocalOptimum) {
  // clauses (x0 or x1), (not x0 or x2), (not x1 or not x2), (x0 or not x2); true = +1
  auto clause = [](NodeId a, bool pa, NodeId b, bool pb, double w) {
    std::array<std::int64_t, 4> t{};
    for (int x : {-1, 1}) {
      for (int y : {-1, 1}) t[table_index(x, y)] = ((x > 0) == pa || (y > 0) == pb) ? 1 : 0;
    }
    return fn(a, b, t, w);
  };
  BFOPInstance inst;
  inst.n = 3;
  inst.d = 1;
  inst.functions = {clause(0, true, 1, true, 0.9), clause(0, false, 2, true, 0.7), clause(1, false, 2, false, 0.5),
                    clause(0, true, 2, false, 0.3)};
  for (std::uint32_t start = 0; start < 8; ++start) {
    auto t = bfop_run(inst, Configuration(signs_of(start, 3)), PivotRule::parse("best"));
    auto end = signs_of(start, 3);
    for (const auto& st : t.steps) end = oracle::applied(end, st.move);
    const double here = brute_objective(inst, end);
    for (std::uint32_t mask = 1; mask < 8; ++mask) {
      if (__builtin_popcount(mask) > 2) continue;
      auto nb = end;
      for (int i = 0; i < 3; ++i) {
        if (mask >> i & 1) nb[i] = -nb[i];
      }
      EXPECT_LE(brute_objective(inst, nb), here + 1e-12);
    }
  }
}

TEST(ImprovementVector, UntouchedFunctionsAreZero) {
  BFOPInstance inst;
  inst.n = 5;
  inst.d = 2;
  inst.functions = {fn(0, 1, {0, 1, 2, 0}), fn(2, 3, {2, 0, 1, 1}), fn(1, 4, {1, 0, 0, 2})};
  MoveSequence s{Move::one(2), Move::two(0, 4)};
  auto g0 = Configuration::uniform(5, -1);
  auto v1 = bfop_improvement_vector(inst, g0, s, 1);
  EXPECT_EQ(v1.at(0), 0);
  EXPECT_EQ(v1.at(2), 0);
  EXPECT_EQ(v1.at(1), 1 - 2);  // f(+1,-1) - f(-1,-1) on (2, 3)
  auto v2 = bfop_improvement_vector(inst, g0, s, 2);
  EXPECT_EQ(v2.at(1), 0);
}

TEST(ImprovementVector, DeltaDecomposition) {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 10; ++t) {
    auto inst = random_instance(rng, 7, 15, 3);
    auto g0 = random_configuration(7, t);
    auto tr = bfop_run(inst, g0, PivotRule::parse("first"));
    for (std::size_t i = 1; i <= tr.steps.size(); ++i) {
      EXPECT_NEAR(dot(bfop_improvement_vector(inst, g0, tr.moves(), i), inst), tr.steps[i - 1].delta, 1e-9);
    }
  }
}

TEST(ImprovementVector, MaxCutBijection) {
  std::mt19937_64 rng(46);
  for (int t = 0; t < 10; ++t) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> flat(edge_count(9));
    for (auto& x : flat) x = u(rng);
    EdgeWeights w(9, flat);
    auto g0 = random_configuration(9, t);
    auto tr = run(w, g0, EngineKind::TwoFlip, PivotRule::parse("best"));
    auto inst = maxcut_as_bfop(w);
    for (std::size_t i = 1; i <= tr.steps.size(); ++i) {
      EXPECT_EQ(function_to_edge_vector(9, bfop_improvement_vector(inst, g0, tr.moves(), i)),
                move_vector(tr.moves(), g0, i));
    }
  }
}

TEST(ImprovementVector, ArcWithEvenPartnerCancels) {
  // f on (0, 1); node 1 moves twice inside the arc of node 0
  BFOPInstance inst;
  inst.n = 3;
  inst.d = 3;
  inst.functions = {fn(0, 1, {0, 3, 1, 2})};
  MoveSequence s{Move::one(0), Move::one(1), Move::one(2), Move::one(1), Move::one(0)};
  auto g0 = Configuration::uniform(3, -1);
  auto configs = induced_configurations(g0, s);
  const int t1 = configs[1][0], t5 = configs[5][0];
  EXPECT_EQ(bfop_combination(inst, g0, s, {1, 5}, {t1, -t5}).at(0), 0);
  // with a single partner move the entry survives
  MoveSequence s2{Move::one(0), Move::one(1), Move::one(2), Move::one(0)};
  auto c2 = induced_configurations(g0, s2);
  EXPECT_NE(bfop_combination(inst, g0, s2, {1, 4}, {c2[1][0], -c2[4][0]}).at(0), 0);
}
