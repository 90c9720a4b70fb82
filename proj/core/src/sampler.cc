#include "stemtag/sampler.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <charconv>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

namespace stemtag {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  // Largest multiple of n that fits, to avoid modulo bias.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

AnnealSchedule::AnnealSchedule(std::vector<ScheduleBreakpoint> points)
    : points_(std::move(points)) {
  for (std::size_t j = 0; j < points_.size(); ++j) {
    const double b = points_[j].inverse_temperature;
    if (!std::isfinite(b) || b <= 0.0) {
      throw std::invalid_argument("inverse temperatures must be positive");
    }
    if (j > 0 && points_[j].sweep <= points_[j - 1].sweep) {
      throw std::invalid_argument("schedule sweeps must strictly increase");
    }
  }
  if (!points_.empty() && points_.back().inverse_temperature != 1.0) {
    throw std::invalid_argument("schedule must end at inverse temperature 1");
  }
}

AnnealSchedule AnnealSchedule::parse(std::string_view text) {
  std::vector<ScheduleBreakpoint> points;
  while (!text.empty()) {
    std::size_t comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("schedule entries must be sweep:beta");
    }
    ScheduleBreakpoint bp;
    std::string_view sweep_text = item.substr(0, colon);
    auto [p, ec] = std::from_chars(sweep_text.data(),
                                   sweep_text.data() + sweep_text.size(),
                                   bp.sweep);
    if (ec != std::errc() || p != sweep_text.data() + sweep_text.size()) {
      throw std::invalid_argument("bad sweep index in schedule");
    }
    std::string beta_text(item.substr(colon + 1));
    std::size_t used = 0;
    try {
      bp.inverse_temperature = std::stod(beta_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != beta_text.size()) {
      throw std::invalid_argument("bad inverse temperature in schedule");
    }
    points.push_back(bp);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return AnnealSchedule(std::move(points));
}

std::string AnnealSchedule::to_string() const {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t j = 0; j < points_.size(); ++j) {
    if (j > 0) out << ',';
    out << points_[j].sweep << ':' << points_[j].inverse_temperature;
  }
  return out.str();
}

double AnnealSchedule::at(std::size_t sweep) const {
  if (points_.empty()) return 1.0;
  if (sweep <= points_.front().sweep) return points_.front().inverse_temperature;
  if (sweep >= points_.back().sweep) return 1.0;
  auto hi = std::upper_bound(
      points_.begin(), points_.end(), sweep,
      [](std::size_t s, const ScheduleBreakpoint& bp) { return s < bp.sweep; });
  auto lo = hi - 1;
  const double f = static_cast<double>(sweep - lo->sweep) /
                   static_cast<double>(hi->sweep - lo->sweep);
  return lo->inverse_temperature +
         f * (hi->inverse_temperature - lo->inverse_temperature);
}

void SamplerConfig::validate() const {
  if (iterations == 0) throw std::invalid_argument("iterations must be >= 1");
}

std::pair<SamplerState, CountTables> init_random(const Model& model, Rng& rng) {
  const std::size_t n = model.corpus().num_tokens();
  SamplerState state = SamplerState::full(std::vector<TagId>(n),
                                          std::vector<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    state.tags[i] = static_cast<TagId>(rng.below(model.num_tags()));
    state.split_idx[i] = static_cast<std::uint32_t>(rng.below(model.num_splits(i)));
  }
  CountTables counts = model.recount(state);
  return {std::move(state), std::move(counts)};
}

std::pair<SamplerState, CountTables> init_random(const Model& model,
                                                 std::uint64_t seed) {
  Rng rng(seed);
  return init_random(model, rng);
}

std::size_t sample_index(std::span<const double> weights, double inv_temp,
                         Rng& rng) {
  if (weights.size() == 1) return 0;
  if (inv_temp > kArgmaxInverseTemperature) {
    return static_cast<std::size_t>(
        std::max_element(weights.begin(), weights.end()) - weights.begin());
  }
  thread_local std::vector<double> scaled;
  std::span<const double> w = weights;
  if (inv_temp != 1.0) {
    const double top = *std::max_element(weights.begin(), weights.end());
    scaled.resize(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) {
      scaled[k] = std::pow(weights[k] / top, inv_temp);
    }
    w = scaled;
  }
  double total = 0.0;
  for (double x : w) total += x;
  double u = rng.uniform() * total;
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    if (u < w[k]) return k;
    u -= w[k];
  }
  return w.size() - 1;
}

void sweep(const Model& model, SamplerState& state, CountTables& counts,
           Rng& rng, double inv_temp) {
  thread_local std::vector<double> weights;
  const std::size_t n = model.corpus().num_tokens();
  for (std::size_t i = 0; i < n; ++i) {
    model.remove_token(state, counts, i);
    model.site_weights(state, counts, i, weights);
    const std::size_t c = sample_index(weights, inv_temp, rng);
    const std::size_t splits = model.num_splits(i);
    model.add_token(state, counts, i, static_cast<TagId>(c / splits),
                    static_cast<std::uint32_t>(c % splits));
  }
}

RunResult run(const Model& model, const SamplerConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(config.seed);
  auto [state, counts] = init_random(model, rng);
  RunResult result;
  result.joint_log_prob_trace.reserve(config.iterations);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    sweep(model, state, counts, rng, config.schedule.at(it));
    if (config.check_counts) model.check_consistent(state, counts);
    result.joint_log_prob_trace.push_back(model.log_joint(counts));
  }
  result.final_state = std::move(state);
  result.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return result;
}

std::vector<RunResult> run_chains(const Corpus& corpus,
                                  const SplitSupport& support,
                                  const std::vector<ChainSpec>& specs,
                                  std::size_t threads) {
  for (const ChainSpec& spec : specs) {
    spec.hp.validate();
    spec.config.validate();
  }
  std::vector<RunResult> results(specs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, specs.size());

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(specs.size());
  auto worker = [&] {
    for (std::size_t j = next++; j < specs.size(); j = next++) {
      try {
        Model model(corpus, support, specs[j].hp);
        results[j] = run(model, specs[j].config);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace stemtag
