#include "stemtag/model.h"

#include <algorithm>
#include <cmath>

namespace stemtag {
namespace {

void decrement(Count& c, const char* what) {
  if (c == 0) {
    throw ConsistencyError(std::string("negative count in ") + what);
  }
  --c;
}

// Transition factors shared by all three variants:
//   (n(p,t) + a) / (n(p) + T a)
//   (n(t,q) + [p=t=q] + a) / (n(t) + [p=t] + T a)   if q is a real tag
void transition_factors(const CountTables& c, const Hyperparams& hp,
                        TagId t_prev, TagId t_next, std::vector<double>& out) {
  const std::size_t T = c.num_tags;
  const double a = hp.alpha;
  const double Ta = static_cast<double>(T) * a;
  const TagId B = c.boundary();
  out.resize(T);
  const double left_den = c.trans_ctx[t_prev] + Ta;
  for (TagId t = 0; t < T; ++t) {
    double w = (c.transition(t_prev, t) + a) / left_den;
    if (t_next != B) {
      const double same_left = t_prev == t ? 1.0 : 0.0;
      const double same_both = (t_prev == t && t == t_next) ? 1.0 : 0.0;
      w *= (c.transition(t, t_next) + same_both + a) /
           (c.trans_ctx[t] + same_left + Ta);
    }
    out[t] = w;
  }
}

void fill_word_weights(const CountTables& c, const Hyperparams& hp, WordId w,
                       TagId t_prev, TagId t_next, std::vector<double>& out) {
  transition_factors(c, hp, t_prev, t_next, out);
  const double Wb = static_cast<double>(c.num_emissions) * hp.beta;
  for (TagId t = 0; t < c.num_tags; ++t) {
    out[t] *= (c.emission(t, w) + hp.beta) / (c.emit_total[t] + Wb);
  }
}

// Tag-major (tag, split) weights. The suffix factor is included when
// with_suffix is set.
void fill_split_weights(const CountTables& c, const Hyperparams& hp,
                        std::span<const Split> splits, TagId t_prev,
                        TagId t_next, bool with_suffix,
                        std::vector<double>& trans, std::vector<double>& out) {
  transition_factors(c, hp, t_prev, t_next, trans);
  const std::size_t L = splits.size();
  const double Sb = static_cast<double>(c.num_emissions) * hp.beta;
  const double Mg = static_cast<double>(c.num_suffixes) * hp.gamma;
  out.resize(c.num_tags * L);
  for (TagId t = 0; t < c.num_tags; ++t) {
    const double stem_den = c.emit_total[t] + Sb;
    const double suffix_den = c.emit_total[t] + Mg;
    double* row = out.data() + t * L;
    for (std::size_t k = 0; k < L; ++k) {
      double w = trans[t] * (c.emission(t, splits[k].stem) + hp.beta) / stem_den;
      if (with_suffix) {
        w *= (c.suffix_emission(t, splits[k].suffix) + hp.gamma) / suffix_den;
      }
      row[k] = w;
    }
  }
}

// sum over outcomes of lgamma(n + c) - lgamma(c), plus the normalizer
// lgamma(K c) - lgamma(N + K c). Zero counts contribute nothing.
double dirichlet_multinomial_log(std::span<const Count> row, Count total,
                                 std::size_t outcomes, double conc) {
  if (total == 0) return 0.0;
  const double lg_conc = std::lgamma(conc);
  double acc = 0.0;
  for (Count n : row) {
    if (n != 0) acc += std::lgamma(n + conc) - lg_conc;
  }
  const double K = static_cast<double>(outcomes) * conc;
  return acc + std::lgamma(K) - std::lgamma(total + K);
}

}  // namespace

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kWord:
      return "w";
    case Variant::kStem:
      return "s";
    case Variant::kStemSuffix:
      return "sm";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "w") return Variant::kWord;
  if (name == "s") return Variant::kStem;
  if (name == "sm") return Variant::kStemSuffix;
  throw std::invalid_argument("unknown variant '" + std::string(name) +
                              "' (expected w, s or sm)");
}

void Hyperparams::validate() const {
  auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!ok(alpha) || !ok(beta) || !ok(gamma)) {
    throw std::invalid_argument(
        "alpha, beta and gamma must be finite and positive");
  }
  if (num_tags == 0) throw std::invalid_argument("num_tags must be >= 1");
}

SamplerState SamplerState::full(std::vector<TagId> tags,
                                std::vector<std::uint32_t> split_idx) {
  SamplerState s;
  s.included.assign(tags.size(), 1);
  s.tags = std::move(tags);
  s.split_idx = std::move(split_idx);
  return s;
}

CountTables::CountTables(std::size_t tags, std::size_t emissions,
                         std::size_t suffixes)
    : num_tags(tags),
      num_emissions(emissions),
      num_suffixes(suffixes),
      trans((tags + 1) * tags, 0),
      trans_ctx(tags + 1, 0),
      emit_total(tags, 0),
      emit(tags * emissions, 0),
      emit_suffix(tags * suffixes, 0) {}

bool CountTables::all_zero() const {
  auto zero = [](const std::vector<Count>& v) {
    return std::all_of(v.begin(), v.end(), [](Count c) { return c == 0; });
  };
  return zero(trans) && zero(trans_ctx) && zero(emit_total) && zero(emit) &&
         zero(emit_suffix);
}

Model::Model(const Corpus& corpus, const SplitSupport& support, Hyperparams hp)
    : corpus_(&corpus), support_(&support), hp_(hp) {
  hp_.validate();
  if (support.num_words() != corpus.words.size()) {
    throw std::invalid_argument("split support does not match vocabulary");
  }
}

std::size_t Model::num_splits(std::size_t i) const {
  if (!uses_splits(hp_.variant)) return 1;
  return support_->num_splits(corpus_->tokens()[i].word_id);
}

CountTables Model::empty_counts() const {
  switch (hp_.variant) {
    case Variant::kWord:
      return CountTables(hp_.num_tags, corpus_->words.size(), 0);
    case Variant::kStem:
      return CountTables(hp_.num_tags, support_->num_stems(), 0);
    case Variant::kStemSuffix:
      return CountTables(hp_.num_tags, support_->num_stems(),
                         support_->num_suffixes());
  }
  return {};
}

void Model::validate_state(const SamplerState& state) const {
  const std::size_t n = corpus_->num_tokens();
  if (state.tags.size() != n || state.split_idx.size() != n ||
      state.included.size() != n) {
    throw std::invalid_argument("state size does not match corpus");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (state.tags[i] >= hp_.num_tags) {
      throw std::invalid_argument("tag out of range at token " +
                                  std::to_string(i));
    }
    if (state.split_idx[i] >= num_splits(i)) {
      throw std::invalid_argument("split index out of range at token " +
                                  std::to_string(i));
    }
  }
}

CountTables Model::recount(const SamplerState& state) const {
  validate_state(state);
  CountTables c = empty_counts();
  const std::size_t T = hp_.num_tags;
  const auto tokens = corpus_->tokens();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!state.included[i]) continue;
    const TagId t = state.tags[i];
    if (corpus_->is_sentence_start(i) || state.included[i - 1]) {
      const TagId p = prev_tag(state, i);
      ++c.trans[p * T + t];
      ++c.trans_ctx[p];
    }
    ++c.emit_total[t];
    const WordId w = tokens[i].word_id;
    ++c.emit[t * c.num_emissions + primary_outcome(w, state.split_idx[i])];
    if (hp_.variant == Variant::kStemSuffix) {
      const Split s = support_->splits_of(w)[state.split_idx[i]];
      ++c.emit_suffix[t * c.num_suffixes + s.suffix];
    }
  }
  return c;
}

void Model::check_consistent(const SamplerState& state,
                             const CountTables& counts) const {
  if (!(recount(state) == counts)) {
    throw ConsistencyError("count tables disagree with a full recount");
  }
}

TagId Model::prev_tag(const SamplerState& state, std::size_t i) const {
  return corpus_->is_sentence_start(i) ? boundary() : state.tags[i - 1];
}

TagId Model::next_tag(const SamplerState& state, std::size_t i) const {
  return corpus_->is_sentence_end(i) ? boundary() : state.tags[i + 1];
}

std::uint32_t Model::primary_outcome(WordId w, std::uint32_t split) const {
  if (hp_.variant == Variant::kWord) return w;
  return support_->splits_of(w)[split].stem;
}

void Model::remove_token(SamplerState& state, CountTables& c,
                         std::size_t i) const {
  if (!state.included[i]) {
    throw ConsistencyError("token " + std::to_string(i) + " already removed");
  }
  const std::size_t T = hp_.num_tags;
  const TagId t = state.tags[i];
  if (corpus_->is_sentence_start(i) || state.included[i - 1]) {
    const TagId p = prev_tag(state, i);
    decrement(c.trans[p * T + t], "transition");
    decrement(c.trans_ctx[p], "transition context");
  }
  if (!corpus_->is_sentence_end(i) && state.included[i + 1]) {
    decrement(c.trans[t * T + state.tags[i + 1]], "transition");
    decrement(c.trans_ctx[t], "transition context");
  }
  decrement(c.emit_total[t], "tag total");
  const WordId w = corpus_->tokens()[i].word_id;
  decrement(c.emit[t * c.num_emissions + primary_outcome(w, state.split_idx[i])],
            "emission");
  if (hp_.variant == Variant::kStemSuffix) {
    const Split s = support_->splits_of(w)[state.split_idx[i]];
    decrement(c.emit_suffix[t * c.num_suffixes + s.suffix], "suffix emission");
  }
  state.included[i] = 0;
}

void Model::add_token(SamplerState& state, CountTables& c, std::size_t i,
                      TagId tag, std::uint32_t split) const {
  if (tag >= hp_.num_tags) {
    throw std::invalid_argument("tag " + std::to_string(tag) +
                                " out of range");
  }
  if (split >= num_splits(i)) {
    throw std::invalid_argument("split index " + std::to_string(split) +
                                " out of range");
  }
  if (state.included[i]) {
    throw ConsistencyError("token " + std::to_string(i) + " already included");
  }
  state.tags[i] = tag;
  state.split_idx[i] = split;
  state.included[i] = 1;
  const std::size_t T = hp_.num_tags;
  if (corpus_->is_sentence_start(i) || state.included[i - 1]) {
    const TagId p = prev_tag(state, i);
    ++c.trans[p * T + tag];
    ++c.trans_ctx[p];
  }
  if (!corpus_->is_sentence_end(i) && state.included[i + 1]) {
    ++c.trans[tag * T + state.tags[i + 1]];
    ++c.trans_ctx[tag];
  }
  ++c.emit_total[tag];
  const WordId w = corpus_->tokens()[i].word_id;
  ++c.emit[tag * c.num_emissions + primary_outcome(w, split)];
  if (hp_.variant == Variant::kStemSuffix) {
    const Split s = support_->splits_of(w)[split];
    ++c.emit_suffix[tag * c.num_suffixes + s.suffix];
  }
}

void Model::site_weights(const SamplerState& state, const CountTables& c,
                         std::size_t i, std::vector<double>& out) const {
  if ((!corpus_->is_sentence_start(i) && !state.included[i - 1]) ||
      (!corpus_->is_sentence_end(i) && !state.included[i + 1])) {
    throw ConsistencyError("site weights need both neighbours included");
  }
  const TagId p = prev_tag(state, i);
  const TagId q = next_tag(state, i);
  const WordId w = corpus_->tokens()[i].word_id;
  if (hp_.variant == Variant::kWord) {
    fill_word_weights(c, hp_, w, p, q, out);
  } else {
    thread_local std::vector<double> scratch;
    fill_split_weights(c, hp_, support_->splits_of(w), p, q,
                       hp_.variant == Variant::kStemSuffix, scratch, out);
  }
}

double Model::log_joint(const CountTables& c) const {
  const std::size_t T = c.num_tags;
  double lp = 0.0;
  for (std::size_t ctx = 0; ctx <= T; ++ctx) {
    lp += dirichlet_multinomial_log(
        std::span<const Count>(c.trans).subspan(ctx * T, T), c.trans_ctx[ctx],
        T, hp_.alpha);
  }
  for (std::size_t t = 0; t < T; ++t) {
    lp += dirichlet_multinomial_log(
        std::span<const Count>(c.emit).subspan(t * c.num_emissions,
                                               c.num_emissions),
        c.emit_total[t], c.num_emissions, hp_.beta);
    if (c.num_suffixes > 0) {
      lp += dirichlet_multinomial_log(
          std::span<const Count>(c.emit_suffix)
              .subspan(t * c.num_suffixes, c.num_suffixes),
          c.emit_total[t], c.num_suffixes, hp_.gamma);
    }
  }
  return lp;
}

std::vector<double> cond_tag_dist_w(const CountTables& c, const Hyperparams& hp,
                                    WordId w, TagId t_prev, TagId t_next) {
  std::vector<double> out;
  fill_word_weights(c, hp, w, t_prev, t_next, out);
  return out;
}

std::vector<double> cond_tag_split_dist_s(const CountTables& c,
                                          const Hyperparams& hp,
                                          std::span<const Split> splits,
                                          TagId t_prev, TagId t_next) {
  std::vector<double> out;
  std::vector<double> scratch;
  fill_split_weights(c, hp, splits, t_prev, t_next, false, scratch, out);
  return out;
}

std::vector<double> cond_tag_split_dist_sm(const CountTables& c,
                                           const Hyperparams& hp,
                                           std::span<const Split> splits,
                                           TagId t_prev, TagId t_next) {
  std::vector<double> out;
  std::vector<double> scratch;
  fill_split_weights(c, hp, splits, t_prev, t_next, true, scratch, out);
  return out;
}

double exact_joint_log_prob(const Corpus& corpus, const SamplerState& state,
                            const Hyperparams& hp,
                            const SplitSupport& support) {
  if (corpus.num_tokens() == 0) return 0.0;
  Model model(corpus, support, hp);
  return model.log_joint(model.recount(state));
}

}  // namespace stemtag
