// Corpus loading, tagset mapping, and the stem/suffix split support.

#ifndef STEMTAG_CORPUS_H_
#define STEMTAG_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stemtag {

using WordId = std::uint32_t;
using TagId = std::uint32_t;
using StemId = std::uint32_t;
using SuffixId = std::uint32_t;

// Thrown for malformed corpus or mapping files. line() is 1-based, or 0 when
// the problem is not tied to a particular line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Bidirectional string <-> dense id map. Ids are assigned in order of first
// insertion, so they never depend on hashing.
class Vocabulary {
 public:
  std::uint32_t intern(std::string_view s);
  std::optional<std::uint32_t> find(std::string_view s) const;
  const std::string& str(std::uint32_t id) const { return strings_.at(id); }
  std::size_t size() const { return strings_.size(); }
  const std::vector<std::string>& strings() const { return strings_; }

 private:
  std::vector<std::string> strings_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

struct Token {
  WordId word_id = 0;
  // Id into Corpus::gold_tags: a fine tag until apply_mapping replaces it
  // with a coarse id.
  std::optional<TagId> gold_tag;
  std::optional<std::string> gold_stem;
  // 1-based source line, kept for error messages.
  std::size_t line = 0;
};

enum class ColumnLayout {
  kAuto,         // inferred from the first token line, then enforced
  kWord,         // word
  kWordTag,      // word, fine tag
  kWordTagStem,  // word, fine tag, gold stem (an empty stem column is allowed)
};

struct LoadOptions {
  ColumnLayout layout = ColumnLayout::kAuto;
  // ASCII-only lowercasing of words and gold stems.
  bool lowercase = false;
};

// Sentences are stored flat: sentence k owns tokens
// [sentence_starts[k], sentence_starts[k + 1]).
class Corpus {
 public:
  Vocabulary words;
  Vocabulary gold_tags;
  // True once apply_mapping has run; gold_tags then holds coarse names.
  bool coarse = false;
  // Columns present in the source file; format_corpus writes the same.
  ColumnLayout layout = ColumnLayout::kWord;

  void add_sentence(std::vector<Token> sentence);

  std::size_t num_tokens() const { return tokens_.size(); }
  std::size_t num_sentences() const {
    return sentence_starts_.empty() ? 0 : sentence_starts_.size() - 1;
  }
  std::span<const Token> tokens() const { return tokens_; }
  std::span<Token> mutable_tokens() { return tokens_; }
  std::span<const Token> sentence(std::size_t k) const;
  std::size_t sentence_begin(std::size_t k) const {
    return sentence_starts_.at(k);
  }
  std::size_t sentence_end(std::size_t k) const {
    return sentence_starts_.at(k + 1);
  }
  bool has_gold_tags() const;
  bool has_gold_stems() const;

  // Per-token flags derived from sentence boundaries.
  bool is_sentence_start(std::size_t i) const { return starts_[i] != 0; }
  bool is_sentence_end(std::size_t i) const { return ends_[i] != 0; }

 private:
  std::vector<Token> tokens_;
  std::vector<std::size_t> sentence_starts_;
  std::vector<std::uint8_t> starts_;
  std::vector<std::uint8_t> ends_;
};

Corpus load_corpus(const std::filesystem::path& path,
                   const LoadOptions& options = {});
Corpus parse_corpus(std::string_view text, const LoadOptions& options = {});

// Writes the corpus back in the column format it was read with.
std::string format_corpus(const Corpus& corpus);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

struct TagsetMapping {
  std::unordered_map<std::string, TagId> fine_to_coarse;
  std::vector<std::string> coarse_names;
  std::size_t num_tags() const { return coarse_names.size(); }
};

TagsetMapping load_mapping(const std::filesystem::path& path);
TagsetMapping parse_mapping(std::string_view text);

// Replaces fine gold tags with coarse ids. Throws ParseError naming the tag
// and line of the first unmapped fine tag.
Corpus apply_mapping(const Corpus& corpus, const TagsetMapping& mapping);

struct Split {
  StemId stem = 0;
  SuffixId suffix = 0;
  friend bool operator==(const Split&, const Split&) = default;
};

// Every word of n code points has exactly n splits: stems of 1..n code
// points, the last one with the empty suffix.
class SplitSupport {
 public:
  Vocabulary stems;
  Vocabulary suffixes;

  std::span<const Split> splits_of(WordId w) const {
    return {splits_.data() + offsets_[w], offsets_[w + 1] - offsets_[w]};
  }
  std::size_t num_splits(WordId w) const {
    return offsets_[w + 1] - offsets_[w];
  }
  std::size_t num_words() const { return offsets_.size() - 1; }
  std::size_t max_splits() const { return max_splits_; }
  std::size_t num_stems() const { return stems.size(); }
  std::size_t num_suffixes() const { return suffixes.size(); }

  const std::string& stem_str(WordId w, std::size_t k) const {
    return stems.str(splits_of(w)[k].stem);
  }
  const std::string& suffix_str(WordId w, std::size_t k) const {
    return suffixes.str(splits_of(w)[k].suffix);
  }

 private:
  friend SplitSupport build_split_support(const Vocabulary& words);

  std::vector<std::size_t> offsets_{0};
  std::vector<Split> splits_;
  std::size_t max_splits_ = 0;
};

SplitSupport build_split_support(const Vocabulary& words);
inline SplitSupport build_split_support(const Corpus& corpus) {
  return build_split_support(corpus.words);
}

// Byte offsets of code point boundaries after each of the n code points of a
// UTF-8 string (the last entry is s.size()).
std::vector<std::size_t> code_point_ends(std::string_view s);

}  // namespace stemtag

#endif  // STEMTAG_CORPUS_H_
