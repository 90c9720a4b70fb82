// Exact brute-force inference for tiny corpora. Used as ground truth for the
// conditionals and the sampler.

#ifndef STEMTAG_ORACLE_H_
#define STEMTAG_ORACLE_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "stemtag/corpus.h"
#include "stemtag/model.h"

namespace stemtag {

struct EnumerationBudget {
  std::uint64_t max_assignments = 1u << 20;
};

class BudgetExceeded : public std::runtime_error {
 public:
  // required == 0 means the count overflowed 64 bits.
  BudgetExceeded(std::uint64_t required, std::uint64_t budget);
  std::uint64_t required() const { return required_; }

 private:
  std::uint64_t required_;
};

struct Assignment {
  std::vector<TagId> tags;
  std::vector<std::uint32_t> splits;
  auto operator<=>(const Assignment&) const = default;
};

// T^N * prod_i L_i for N tokens, or 0 on overflow.
std::uint64_t enumeration_size(const Model& model);

// Every joint assignment with its posterior probability, normalized with a
// max-shift in log space.
std::map<Assignment, double> exact_posterior(
    const Corpus& corpus, const SplitSupport& support, const Hyperparams& hp,
    const EnumerationBudget& budget = {});

// Distribution over the candidates at token i (tag-major, matching
// Model::site_weights), from ratios of exact joints with every other token
// held at its value in state.
std::vector<double> exact_conditional(const Corpus& corpus,
                                      const SplitSupport& support,
                                      const Hyperparams& hp,
                                      const SamplerState& state, std::size_t i);

}  // namespace stemtag

#endif  // STEMTAG_ORACLE_H_
