// Shared test fixtures and independent reference computations.
//
// Nothing here calls into the model's count tables or log-gamma code: the
// reference joint below walks the corpus once and multiplies predictive
// probabilities from its own counters.

#ifndef STEMTAG_TESTS_SUPPORT_FIXTURES_H_
#define STEMTAG_TESTS_SUPPORT_FIXTURES_H_

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stemtag/corpus.h"
#include "stemtag/model.h"

namespace stemtag::testing {

// Builds a word-only corpus from sentences of words.
inline Corpus make_corpus(const std::vector<std::vector<std::string>>& sentences) {
  std::string text;
  for (const auto& s : sentences) {
    for (const auto& w : s) text += w + "\n";
    text += "\n";
  }
  return parse_corpus(text);
}

// Random word-only corpus: 1..max_sentences sentences, total tokens <=
// max_tokens, words over "abc" of length 1..max_word_len.
inline Corpus random_tiny_corpus(std::mt19937_64& rng, std::size_t max_tokens,
                                 std::size_t max_word_len,
                                 std::size_t max_sentences = 3) {
  std::uniform_int_distribution<std::size_t> n_tok(1, max_tokens);
  std::uniform_int_distribution<std::size_t> len(1, max_word_len);
  std::uniform_int_distribution<int> ch(0, 2);
  const std::size_t n = n_tok(rng);
  std::vector<std::vector<std::string>> sentences(1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!sentences.back().empty() && sentences.size() < max_sentences &&
        std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
      sentences.emplace_back();
    }
    std::string w;
    for (std::size_t k = len(rng); k > 0; --k) w += static_cast<char>('a' + ch(rng));
    sentences.back().push_back(w);
  }
  return make_corpus(sentences);
}

inline SamplerState random_state(const Model& model, std::mt19937_64& rng) {
  SamplerState s;
  const std::size_t n = model.corpus().num_tokens();
  for (std::size_t i = 0; i < n; ++i) {
    s.tags.push_back(static_cast<TagId>(
        std::uniform_int_distribution<std::size_t>(0, model.num_tags() - 1)(rng)));
    s.split_idx.push_back(static_cast<std::uint32_t>(
        std::uniform_int_distribution<std::size_t>(0, model.num_splits(i) - 1)(
            rng)));
    s.included.push_back(1);
  }
  return s;
}

// Synthetic text from a small generating HMM whose classes prefer their own
// stems and suffixes, so that stems carry real signal.
inline Corpus synthetic_corpus(std::uint64_t seed, std::size_t num_tokens,
                               std::vector<TagId>* gold_classes = nullptr) {
  std::mt19937_64 rng(seed);
  const std::vector<std::vector<std::string>> stems = {
      {"walk", "talk", "jump", "play", "call", "look"},
      {"house", "tree", "river", "stone", "cloud", "bird"},
      {"the", "a", "this", "that"},
      {"quick", "green", "small", "loud"}};
  const std::vector<std::vector<std::string>> suffixes = {
      {"", "s", "ed", "ing"}, {"", "s"}, {""}, {"", "er", "est"}};
  // class -> next class preferences
  const std::vector<std::vector<double>> trans = {
      {0.1, 0.1, 0.7, 0.1}, {0.6, 0.1, 0.1, 0.2}, {0.05, 0.6, 0.05, 0.3},
      {0.05, 0.85, 0.05, 0.05}};
  std::string text;
  std::size_t cls = 2;
  std::size_t in_sentence = 0;
  for (std::size_t i = 0; i < num_tokens; ++i) {
    std::discrete_distribution<std::size_t> next(trans[cls].begin(),
                                                 trans[cls].end());
    cls = in_sentence == 0 ? 2 : next(rng);
    const auto& st = stems[cls];
    const auto& sf = suffixes[cls];
    text += st[std::uniform_int_distribution<std::size_t>(0, st.size() - 1)(rng)] +
            sf[std::uniform_int_distribution<std::size_t>(0, sf.size() - 1)(rng)] +
            "\tC" + std::to_string(cls) + "\n";
    if (gold_classes) gold_classes->push_back(static_cast<TagId>(cls));
    if (++in_sentence >= 6 &&
        std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
      text += "\n";
      in_sentence = 0;
    }
  }
  return parse_corpus(text);
}

// Like synthetic_corpus, but open classes draw from a Zipfian inventory of
// generated stems, so most word forms are rare while their stems recur.
inline Corpus sparse_synthetic_corpus(std::uint64_t seed, std::size_t num_tokens,
                                      std::size_t stems_per_class = 1500) {
  std::mt19937_64 rng(seed);
  const std::string cons = "bcdfghklmnprstvz";
  const std::string vow = "aeiou";
  std::vector<std::vector<std::string>> stems(4);
  for (std::size_t cls : {0, 1, 3}) {
    for (std::size_t k = 0; k < stems_per_class; ++k) {
      std::string st;
      for (std::size_t len = 2 + rng() % 2; len > 0; --len) {
        st += cons[rng() % cons.size()];
        st += vow[rng() % vow.size()];
      }
      st += cons[rng() % cons.size()];
      stems[cls].push_back(st);
    }
  }
  stems[2] = {"the", "a", "this", "that"};
  std::vector<double> zipf(stems_per_class);
  for (std::size_t k = 0; k < zipf.size(); ++k) zipf[k] = 1.0 / (k + 1);
  const std::vector<std::vector<std::string>> suffixes = {
      {"", "s", "ed", "ing"}, {"", "s"}, {""}, {"", "er", "est"}};
  const std::vector<std::vector<double>> trans = {
      {0.1, 0.1, 0.7, 0.1}, {0.6, 0.1, 0.1, 0.2}, {0.05, 0.6, 0.05, 0.3},
      {0.05, 0.85, 0.05, 0.05}};
  std::discrete_distribution<std::size_t> pick_open(zipf.begin(), zipf.end());
  std::string text;
  std::size_t cls = 2;
  std::size_t in_sentence = 0;
  for (std::size_t i = 0; i < num_tokens; ++i) {
    std::discrete_distribution<std::size_t> next(trans[cls].begin(),
                                                 trans[cls].end());
    cls = in_sentence == 0 ? 2 : next(rng);
    const auto& st = stems[cls];
    const auto& sf = suffixes[cls];
    const std::string& stem =
        cls == 2 ? st[rng() % st.size()] : st[pick_open(rng)];
    const std::string& suffix = sf[rng() % sf.size()];
    text += stem + suffix + "\tC" + std::to_string(cls) + "\t" + stem + "\n";
    if (++in_sentence >= 6 &&
        std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
      text += "\n";
      in_sentence = 0;
    }
  }
  return parse_corpus(text);
}

// Log joint by the chain rule: tokens are added one at a time and each
// transition and emission contributes its posterior predictive probability.
inline double chain_rule_log_joint(const Corpus& corpus,
                                   const SplitSupport& support,
                                   const Hyperparams& hp,
                                   const SamplerState& state) {
  const double T = static_cast<double>(hp.num_tags);
  const TagId boundary = static_cast<TagId>(hp.num_tags);
  double E = 0.0;
  double M = static_cast<double>(support.num_suffixes());
  switch (hp.variant) {
    case Variant::kWord:
      E = static_cast<double>(corpus.words.size());
      break;
    default:
      E = static_cast<double>(support.num_stems());
  }
  std::map<std::pair<TagId, TagId>, int> trans;
  std::map<TagId, int> ctx;
  std::map<std::pair<TagId, std::uint32_t>, int> emit;
  std::map<std::pair<TagId, std::uint32_t>, int> suffix;
  std::map<TagId, int> total;
  double lp = 0.0;
  std::size_t i = 0;
  for (std::size_t k = 0; k < corpus.num_sentences(); ++k) {
    TagId prev = boundary;
    for (const Token& tok : corpus.sentence(k)) {
      const TagId t = state.tags[i];
      lp += std::log((trans[{prev, t}] + hp.alpha) / (ctx[prev] + T * hp.alpha));
      ++trans[{prev, t}];
      ++ctx[prev];
      std::uint32_t e = tok.word_id;
      std::uint32_t m = 0;
      if (hp.variant != Variant::kWord) {
        const Split s = support.splits_of(tok.word_id)[state.split_idx[i]];
        e = s.stem;
        m = s.suffix;
      }
      lp += std::log((emit[{t, e}] + hp.beta) / (total[t] + E * hp.beta));
      if (hp.variant == Variant::kStemSuffix) {
        lp += std::log((suffix[{t, m}] + hp.gamma) / (total[t] + M * hp.gamma));
        ++suffix[{t, m}];
      }
      ++emit[{t, e}];
      ++total[t];
      prev = t;
      ++i;
    }
  }
  return lp;
}

}  // namespace stemtag::testing

#endif  // STEMTAG_TESTS_SUPPORT_FIXTURES_H_
