// Collapsed Dirichlet-multinomial bigram HMM: sufficient statistics,
// single-site conditionals, and the exact collapsed joint.
//
// Tags are 0..T-1. The sentence boundary is tag T: it is the left context of
// every sentence-initial token and is never emitted, sampled, or used as a
// transition outcome. Each context (T tags plus the boundary) therefore owns
// a symmetric Dirichlet over the T real tags, which is what makes the
// T*alpha normalizer in the conditionals exact.

#ifndef STEMTAG_MODEL_H_
#define STEMTAG_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stemtag/corpus.h"

namespace stemtag {

enum class Variant {
  kWord,        // words emitted by tags
  kStem,        // stems emitted by tags
  kStemSuffix,  // stems and suffixes emitted independently by tags
};

std::string_view variant_name(Variant v);  // "w", "s", "sm"
Variant parse_variant(std::string_view name);
inline bool uses_splits(Variant v) { return v != Variant::kWord; }

struct Hyperparams {
  double alpha = 0.001;
  double beta = 0.1;
  double gamma = 0.001;
  std::size_t num_tags = 12;
  Variant variant = Variant::kWord;

  // Throws std::invalid_argument unless all concentrations are finite and
  // positive and num_tags >= 1.
  void validate() const;
};

// Raised when a count would go negative or a recount disagrees; always a
// bookkeeping bug, never a user error.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using Count = std::uint32_t;

struct CountTables {
  std::size_t num_tags = 0;
  // Emission outcomes in the primary family: W words or S stems.
  std::size_t num_emissions = 0;
  // Suffix outcomes M; zero unless the variant emits suffixes.
  std::size_t num_suffixes = 0;

  // trans[ctx * T + t], ctx in [0, T] with T the boundary.
  std::vector<Count> trans;
  // trans_ctx[ctx] = sum over t of trans[ctx][t].
  std::vector<Count> trans_ctx;
  // Tokens currently carrying each tag.
  std::vector<Count> emit_total;
  // emit[t * num_emissions + e]
  std::vector<Count> emit;
  // emit_suffix[t * num_suffixes + m]
  std::vector<Count> emit_suffix;

  CountTables() = default;
  CountTables(std::size_t tags, std::size_t emissions, std::size_t suffixes);

  TagId boundary() const { return static_cast<TagId>(num_tags); }
  Count transition(TagId ctx, TagId t) const { return trans[ctx * num_tags + t]; }
  Count emission(TagId t, std::uint32_t e) const {
    return emit[t * num_emissions + e];
  }
  Count suffix_emission(TagId t, SuffixId m) const {
    return emit_suffix[t * num_suffixes + m];
  }
  bool all_zero() const;

  friend bool operator==(const CountTables&, const CountTables&) = default;
};

struct SamplerState {
  std::vector<TagId> tags;
  // Index into SplitSupport::splits_of(word); always 0 for the word variant.
  std::vector<std::uint32_t> split_idx;
  // 1 while the token's contributions are in the count tables. A transition
  // between two tokens is counted only while both are included.
  std::vector<std::uint8_t> included;

  // A state with every token included.
  static SamplerState full(std::vector<TagId> tags,
                           std::vector<std::uint32_t> split_idx);
  std::size_t size() const { return tags.size(); }

  friend bool operator==(const SamplerState&, const SamplerState&) = default;
};

// Binds a corpus, its split support, and hyperparameters. Holds references;
// the corpus and support must outlive the model. Const methods are safe to
// call concurrently on distinct (state, counts) pairs.
class Model {
 public:
  Model(const Corpus& corpus, const SplitSupport& support, Hyperparams hp);

  const Corpus& corpus() const { return *corpus_; }
  const SplitSupport& support() const { return *support_; }
  const Hyperparams& hyperparams() const { return hp_; }
  std::size_t num_tags() const { return hp_.num_tags; }
  TagId boundary() const { return static_cast<TagId>(hp_.num_tags); }

  // Number of split candidates for token i (1 for the word variant).
  std::size_t num_splits(std::size_t i) const;
  // Candidates at token i: num_tags() * num_splits(i), tag-major.
  std::size_t num_candidates(std::size_t i) const {
    return num_tags() * num_splits(i);
  }

  CountTables empty_counts() const;
  CountTables recount(const SamplerState& state) const;
  // Throws ConsistencyError if counts differ from a recount of state.
  void check_consistent(const SamplerState& state,
                        const CountTables& counts) const;
  // Throws std::invalid_argument if the state does not fit the corpus.
  void validate_state(const SamplerState& state) const;

  // Neighbouring tags of token i; boundary() at sentence edges.
  TagId prev_tag(const SamplerState& state, std::size_t i) const;
  TagId next_tag(const SamplerState& state, std::size_t i) const;

  // Takes token i out of the counts: its emissions, the boundary transition
  // if it starts a sentence, and its transitions to included neighbours.
  void remove_token(SamplerState& state, CountTables& counts,
                    std::size_t i) const;
  // Inverse of remove_token with a new tag and split. Throws
  // std::invalid_argument for an out-of-range tag or split.
  void add_token(SamplerState& state, CountTables& counts, std::size_t i,
                 TagId tag, std::uint32_t split) const;

  // Unnormalized conditional weights for token i, which must be removed from
  // counts while its neighbours are included.
  // Layout: out[tag * num_splits(i) + split].
  void site_weights(const SamplerState& state, const CountTables& counts,
                    std::size_t i, std::vector<double>& out) const;

  // Collapsed log joint from counts that are consistent with some state.
  double log_joint(const CountTables& counts) const;

 private:
  std::uint32_t primary_outcome(WordId w, std::uint32_t split) const;

  const Corpus* corpus_;
  const SplitSupport* support_;
  Hyperparams hp_;
};

// Single-site conditionals. t_next == counts.boundary() means the token ends
// its sentence and has no outgoing transition. All weights are positive.
std::vector<double> cond_tag_dist_w(const CountTables& counts,
                                    const Hyperparams& hp, WordId w,
                                    TagId t_prev, TagId t_next);
std::vector<double> cond_tag_split_dist_s(const CountTables& counts,
                                          const Hyperparams& hp,
                                          std::span<const Split> splits,
                                          TagId t_prev, TagId t_next);
std::vector<double> cond_tag_split_dist_sm(const CountTables& counts,
                                           const Hyperparams& hp,
                                           std::span<const Split> splits,
                                           TagId t_prev, TagId t_next);

// Log of the collapsed marginal P(emissions, tags | alpha, beta[, gamma]):
// a product of Dirichlet-multinomial normalizer ratios over every transition
// context and every emission family.
double exact_joint_log_prob(const Corpus& corpus, const SamplerState& state,
                            const Hyperparams& hp, const SplitSupport& support);

}  // namespace stemtag

#endif  // STEMTAG_MODEL_H_
