#include "stemtag/sampler.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "support/fixtures.h"

namespace stemtag {
namespace {

using testing::make_corpus;

TEST(Rng, SameSeedSameStream) {
  Rng a(99);
  Rng b(99);
  for (int k = 0; k < 1000; ++k) {
    ASSERT_EQ(a.below(7), b.below(7));
    ASSERT_EQ(a.uniform(), b.uniform());
  }
  EXPECT_THROW(a.below(0), std::invalid_argument);
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(5);
  for (int k = 0; k < 100000; ++k) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(InitRandom, SameSeedSameState) {
  Corpus c = testing::synthetic_corpus(1, 200);
  SplitSupport s = build_split_support(c);
  Model m(c, s, Hyperparams{0.1, 0.1, 0.1, 5, Variant::kStemSuffix});
  auto [a, ca] = init_random(m, 42);
  auto [b, cb] = init_random(m, 42);
  EXPECT_EQ(a, b);
  EXPECT_EQ(ca, cb);
  auto [d, cd] = init_random(m, 43);
  EXPECT_NE(a, d);
  m.check_consistent(a, ca);
}

TEST(InitRandom, SingleTagGivesAllZero) {
  Corpus c = testing::synthetic_corpus(2, 100);
  SplitSupport s = build_split_support(c);
  Model m(c, s, Hyperparams{0.1, 0.1, 0.1, 1, Variant::kWord});
  auto [state, counts] = init_random(m, 7);
  for (TagId t : state.tags) EXPECT_EQ(t, 0u);
}

TEST(InitRandom, TagFrequenciesWithinThreeSigma) {
  std::vector<std::string> words(10000, "x");
  Corpus c = make_corpus({words});
  SplitSupport s = build_split_support(c);
  const std::size_t T = 4;
  Model m(c, s, Hyperparams{0.1, 0.1, 0.1, T, Variant::kWord});
  auto [state, counts] = init_random(m, 2024);
  const double n = 10000.0;
  const double p = 1.0 / T;
  const double sigma = std::sqrt(n * p * (1 - p));
  for (TagId t = 0; t < T; ++t) {
    EXPECT_NEAR(static_cast<double>(counts.emit_total[t]), n * p, 3 * sigma);
  }
}

TEST(SampleIndex, ArgmaxAboveThreshold) {
  Rng r(1);
  const std::vector<double> w = {0.1, 0.5, 0.5, 0.2};
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(sample_index(w, 2 * kArgmaxInverseTemperature, r), 1u);
  }
}

TEST(SampleIndex, FrequenciesFollowWeights) {
  Rng r(3);
  const std::vector<double> w = {1.0, 3.0};
  int ones = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) ones += sample_index(w, 1.0, r) == 1;
  EXPECT_NEAR(ones / static_cast<double>(n), 0.75, 0.005);
  // Squaring the weights: 9/10.
  ones = 0;
  for (int k = 0; k < n; ++k) ones += sample_index(w, 2.0, r) == 1;
  EXPECT_NEAR(ones / static_cast<double>(n), 0.9, 0.005);
}

TEST(Sweep, SingleTokenSingleTagUnchanged) {
  Corpus c = make_corpus({{"a"}});
  SplitSupport s = build_split_support(c);
  Model m(c, s, Hyperparams{0.5, 0.5, 0.5, 1, Variant::kStem});
  auto [state, counts] = init_random(m, 1);
  const SamplerState before = state;
  Rng r(1);
  for (int k = 0; k < 10; ++k) sweep(m, state, counts, r);
  EXPECT_EQ(state, before);
  m.check_consistent(state, counts);
}

TEST(Sweep, CountsStayConsistent) {
  for (Variant v : {Variant::kWord, Variant::kStem, Variant::kStemSuffix}) {
    Corpus c = testing::synthetic_corpus(8, 300);
    SplitSupport s = build_split_support(c);
    Model m(c, s, Hyperparams{0.01, 0.1, 0.01, 6, v});
    SamplerConfig cfg;
    cfg.iterations = 20;
    cfg.seed = 4;
    cfg.check_counts = true;
    EXPECT_NO_THROW(run(m, cfg));
  }
}

TEST(Run, RejectsZeroIterations) {
  Corpus c = make_corpus({{"a"}});
  SplitSupport s = build_split_support(c);
  Model m(c, s, Hyperparams{});
  SamplerConfig cfg;
  cfg.iterations = 0;
  EXPECT_THROW(run(m, cfg), std::invalid_argument);
}

TEST(Run, SameSeedSameTrace) {
  Corpus c = testing::synthetic_corpus(3, 300);
  SplitSupport s = build_split_support(c);
  Model m(c, s, Hyperparams{0.001, 0.1, 0.001, 4, Variant::kStemSuffix});
  SamplerConfig cfg;
  cfg.iterations = 30;
  cfg.seed = 11;
  cfg.schedule = AnnealSchedule::parse("0:0.2,20:1");
  const RunResult a = run(m, cfg);
  const RunResult b = run(m, cfg);
  EXPECT_EQ(a.joint_log_prob_trace, b.joint_log_prob_trace);
  EXPECT_EQ(a.final_state, b.final_state);
  ASSERT_EQ(a.joint_log_prob_trace.size(), 30u);
}

TEST(Run, JointLogProbRisesFromRandomStart) {
  // Seed 1; early sweeps leave the uniform initialization behind.
  Corpus c = testing::synthetic_corpus(6, 2000);
  SplitSupport s = build_split_support(c);
  Model m(c, s, Hyperparams{0.001, 0.1, 0.001, 4, Variant::kStem});
  SamplerConfig cfg;
  cfg.iterations = 200;
  cfg.seed = 1;
  const auto trace = run(m, cfg).joint_log_prob_trace;
  const std::size_t tenth = trace.size() / 10;
  const double first =
      std::accumulate(trace.begin(), trace.begin() + tenth, 0.0) / tenth;
  const double last =
      std::accumulate(trace.end() - tenth, trace.end(), 0.0) / tenth;
  EXPECT_GT(last, first);
}

TEST(Run, TraceMatchesExactJointOfFinalState) {
  Corpus c = testing::synthetic_corpus(12, 150);
  SplitSupport s = build_split_support(c);
  const Hyperparams hp{0.01, 0.3, 0.02, 3, Variant::kStemSuffix};
  Model m(c, s, hp);
  SamplerConfig cfg;
  cfg.iterations = 5;
  const RunResult r = run(m, cfg);
  EXPECT_NEAR(r.joint_log_prob_trace.back(),
              exact_joint_log_prob(c, r.final_state, hp, s), 1e-9);
}

TEST(Schedule, ParseAndInterpolate) {
  const AnnealSchedule s = AnnealSchedule::parse("0:0.1,10:0.5,20:1");
  EXPECT_DOUBLE_EQ(s.at(0), 0.1);
  EXPECT_DOUBLE_EQ(s.at(5), 0.3);
  EXPECT_DOUBLE_EQ(s.at(15), 0.75);
  EXPECT_DOUBLE_EQ(s.at(20), 1.0);
  EXPECT_DOUBLE_EQ(s.at(1000), 1.0);
  EXPECT_EQ(AnnealSchedule::parse(s.to_string()).points(), s.points());
  EXPECT_DOUBLE_EQ(AnnealSchedule().at(3), 1.0);
  EXPECT_DOUBLE_EQ(AnnealSchedule::parse("5:0.5,10:1").at(2), 0.5);
}

TEST(Schedule, RejectsBadInput) {
  EXPECT_THROW(AnnealSchedule::parse("0:0.1,10:0.5"), std::invalid_argument);
  EXPECT_THROW(AnnealSchedule::parse("10:0.1,5:1"), std::invalid_argument);
  EXPECT_THROW(AnnealSchedule::parse("0:-1,5:1"), std::invalid_argument);
  EXPECT_THROW(AnnealSchedule::parse("0:0,5:1"), std::invalid_argument);
  EXPECT_THROW(AnnealSchedule::parse("x:1"), std::invalid_argument);
  EXPECT_THROW(AnnealSchedule::parse("0-1"), std::invalid_argument);
  EXPECT_THROW(AnnealSchedule::parse("0:1x"), std::invalid_argument);
}

TEST(RunChains, MatchesSequentialRuns) {
  Corpus c = testing::synthetic_corpus(4, 200);
  SplitSupport s = build_split_support(c);
  std::vector<ChainSpec> specs;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    ChainSpec spec;
    spec.hp = Hyperparams{0.01, 0.1, 0.01, 4,
                          seed % 2 ? Variant::kWord : Variant::kStemSuffix};
    spec.config.iterations = 10;
    spec.config.seed = seed;
    specs.push_back(spec);
  }
  const auto parallel = run_chains(c, s, specs, 3);
  ASSERT_EQ(parallel.size(), specs.size());
  for (std::size_t j = 0; j < specs.size(); ++j) {
    Model m(c, s, specs[j].hp);
    const RunResult seq = run(m, specs[j].config);
    EXPECT_EQ(parallel[j].final_state, seq.final_state);
    EXPECT_EQ(parallel[j].joint_log_prob_trace, seq.joint_log_prob_trace);
  }
  specs[2].config.iterations = 0;
  EXPECT_THROW(run_chains(c, s, specs, 2), std::invalid_argument);
}

}  // namespace
}  // namespace stemtag
