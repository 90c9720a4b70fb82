// Collapsed Gibbs sampling over tags (and splits, for the stem variants).

#ifndef STEMTAG_SAMPLER_H_
#define STEMTAG_SAMPLER_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "stemtag/corpus.h"
#include "stemtag/model.h"

namespace stemtag {

// 64-bit Mersenne Twister with hand-rolled uniform draws. The standard
// distributions are implementation-defined, so they are not used anywhere a
// seed must reproduce the same chain on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // Uniform on [0, n) by rejection; n >= 1.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

// Above this inverse temperature a site update takes the argmax candidate
// (lowest index on ties) instead of sampling.
inline constexpr double kArgmaxInverseTemperature = 1e6;

struct ScheduleBreakpoint {
  std::size_t sweep = 0;
  double inverse_temperature = 1.0;
  friend bool operator==(const ScheduleBreakpoint&,
                         const ScheduleBreakpoint&) = default;
};

// Piecewise-linear inverse-temperature schedule over sweep indices. Before
// the first breakpoint its value holds; after the last, 1.0 holds.
class AnnealSchedule {
 public:
  AnnealSchedule() = default;
  explicit AnnealSchedule(std::vector<ScheduleBreakpoint> points);

  // Parses "sweep:beta,sweep:beta,...", e.g. "0:0.1,500:1".
  static AnnealSchedule parse(std::string_view text);
  std::string to_string() const;

  bool empty() const { return points_.empty(); }
  double at(std::size_t sweep) const;
  const std::vector<ScheduleBreakpoint>& points() const { return points_; }

 private:
  std::vector<ScheduleBreakpoint> points_;
};

struct SamplerConfig {
  std::size_t iterations = 1000;
  std::uint64_t seed = 1;
  AnnealSchedule schedule;
  // Recount after every sweep and throw ConsistencyError on mismatch.
  bool check_counts = false;

  void validate() const;
};

struct RunResult {
  SamplerState final_state;
  std::vector<double> joint_log_prob_trace;
  double wall_time = 0.0;  // seconds; excluded from any written artifact
};

// Uniform random tags and splits, with counts built to match.
std::pair<SamplerState, CountTables> init_random(const Model& model, Rng& rng);
std::pair<SamplerState, CountTables> init_random(const Model& model,
                                                 std::uint64_t seed);

// Picks a candidate with probability proportional to weights^inv_temp.
std::size_t sample_index(std::span<const double> weights, double inv_temp,
                         Rng& rng);

// One pass over all tokens in corpus order: remove, weigh, sample, add.
void sweep(const Model& model, SamplerState& state, CountTables& counts,
           Rng& rng, double inv_temp = 1.0);

RunResult run(const Model& model, const SamplerConfig& config);

struct ChainSpec {
  Hyperparams hp;
  SamplerConfig config;
};

// Runs independent chains concurrently over one shared corpus and support.
// Results come back in the order of specs and do not depend on threads.
std::vector<RunResult> run_chains(const Corpus& corpus,
                                  const SplitSupport& support,
                                  const std::vector<ChainSpec>& specs,
                                  std::size_t threads = 0);

}  // namespace stemtag

#endif  // STEMTAG_SAMPLER_H_
