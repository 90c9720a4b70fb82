#include "stemtag/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stemtag {
namespace {

std::vector<double> normalize_logs(const std::vector<double>& logs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> p(logs.size());
  double total = 0.0;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    p[k] = std::exp(logs[k] - top);
    total += p[k];
  }
  for (double& x : p) x /= total;
  return p;
}

bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return true;
  out = a * b;
  return false;
}

}  // namespace

BudgetExceeded::BudgetExceeded(std::uint64_t required, std::uint64_t budget)
    : std::runtime_error(
          "exact enumeration needs " +
          (required == 0 ? std::string("more than 2^64")
                         : std::to_string(required)) +
          " assignments, budget is " + std::to_string(budget)),
      required_(required) {}

std::uint64_t enumeration_size(const Model& model) {
  std::uint64_t size = 1;
  const std::size_t n = model.corpus().num_tokens();
  for (std::size_t i = 0; i < n; ++i) {
    if (mul_overflows(size, model.num_candidates(i), size)) return 0;
  }
  return size;
}

std::map<Assignment, double> exact_posterior(const Corpus& corpus,
                                             const SplitSupport& support,
                                             const Hyperparams& hp,
                                             const EnumerationBudget& budget) {
  Model model(corpus, support, hp);
  const std::uint64_t size = enumeration_size(model);
  if (size == 0 || size > budget.max_assignments) {
    throw BudgetExceeded(size, budget.max_assignments);
  }
  const std::size_t n = corpus.num_tokens();

  // Odometer over per-token candidate indices, last token fastest.
  std::vector<std::size_t> digit(n, 0);
  SamplerState state = SamplerState::full(std::vector<TagId>(n),
                                          std::vector<std::uint32_t>(n));
  std::vector<Assignment> assignments;
  std::vector<double> logs;
  assignments.reserve(size);
  logs.reserve(size);
  auto advance = [&] {
    for (std::size_t pos = n; pos-- > 0;) {
      if (++digit[pos] < model.num_candidates(pos)) return true;
      digit[pos] = 0;
    }
    return false;
  };
  do {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t L = model.num_splits(i);
      state.tags[i] = static_cast<TagId>(digit[i] / L);
      state.split_idx[i] = static_cast<std::uint32_t>(digit[i] % L);
    }
    logs.push_back(model.log_joint(model.recount(state)));
    assignments.push_back({state.tags, state.split_idx});
  } while (advance());

  const std::vector<double> probs = normalize_logs(logs);
  std::map<Assignment, double> posterior;
  for (std::size_t k = 0; k < assignments.size(); ++k) {
    posterior.emplace(std::move(assignments[k]), probs[k]);
  }
  return posterior;
}

std::vector<double> exact_conditional(const Corpus& corpus,
                                      const SplitSupport& support,
                                      const Hyperparams& hp,
                                      const SamplerState& state,
                                      std::size_t i) {
  Model model(corpus, support, hp);
  model.validate_state(state);
  SamplerState probe = state;
  std::fill(probe.included.begin(), probe.included.end(), 1);
  const std::size_t L = model.num_splits(i);
  std::vector<double> logs(model.num_candidates(i));
  for (std::size_t c = 0; c < logs.size(); ++c) {
    probe.tags[i] = static_cast<TagId>(c / L);
    probe.split_idx[i] = static_cast<std::uint32_t>(c % L);
    logs[c] = model.log_joint(model.recount(probe));
  }
  return normalize_logs(logs);
}

}  // namespace stemtag
