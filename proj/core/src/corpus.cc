#include "stemtag/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace stemtag {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
  });
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::size_t columns_of(ColumnLayout layout) {
  switch (layout) {
    case ColumnLayout::kWord:
      return 1;
    case ColumnLayout::kWordTag:
      return 2;
    case ColumnLayout::kWordTagStem:
      return 3;
    case ColumnLayout::kAuto:
      break;
  }
  return 0;
}

ColumnLayout layout_for(std::size_t columns) {
  switch (columns) {
    case 1:
      return ColumnLayout::kWord;
    case 2:
      return ColumnLayout::kWordTag;
    default:
      return ColumnLayout::kWordTagStem;
  }
}

// Iterates lines, stripping a trailing '\r'.
template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(line, ++line_no);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

}  // namespace

std::uint32_t Vocabulary::intern(std::string_view s) {
  auto it = ids_.find(std::string(s));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(strings_.size());
  strings_.emplace_back(s);
  ids_.emplace(strings_.back(), id);
  return id;
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view s) const {
  auto it = ids_.find(std::string(s));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void Corpus::add_sentence(std::vector<Token> sentence) {
  if (sentence.empty()) {
    throw std::invalid_argument("sentences must be nonempty");
  }
  if (sentence_starts_.empty()) sentence_starts_.push_back(0);
  for (std::size_t j = 0; j < sentence.size(); ++j) {
    if (sentence[j].word_id >= words.size()) {
      throw std::invalid_argument("token word id out of vocabulary range");
    }
    tokens_.push_back(std::move(sentence[j]));
    starts_.push_back(j == 0 ? 1 : 0);
    ends_.push_back(j + 1 == sentence.size() ? 1 : 0);
  }
  sentence_starts_.push_back(tokens_.size());
}

std::span<const Token> Corpus::sentence(std::size_t k) const {
  std::size_t b = sentence_begin(k);
  return std::span<const Token>(tokens_).subspan(b, sentence_end(k) - b);
}

bool Corpus::has_gold_tags() const {
  return !tokens_.empty() &&
         std::all_of(tokens_.begin(), tokens_.end(),
                     [](const Token& t) { return t.gold_tag.has_value(); });
}

bool Corpus::has_gold_stems() const {
  return std::any_of(tokens_.begin(), tokens_.end(),
                     [](const Token& t) { return t.gold_stem.has_value(); });
}

Corpus parse_corpus(std::string_view text, const LoadOptions& options) {
  Corpus corpus;
  ColumnLayout layout = options.layout;
  std::vector<Token> sentence;

  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (is_blank(line)) {
      if (!sentence.empty()) corpus.add_sentence(std::move(sentence));
      sentence.clear();
      return;
    }
    auto cols = split_tabs(line);
    if (layout == ColumnLayout::kAuto) {
      if (cols.size() > 3) {
        throw ParseError("line " + std::to_string(line_no) + ": expected 1-3 "
                             "tab-separated columns, found " +
                             std::to_string(cols.size()),
                         line_no);
      }
      layout = layout_for(cols.size());
    }
    const std::size_t want = columns_of(layout);
    if (cols.size() != want) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(want) + " columns, found " +
                           std::to_string(cols.size()),
                       line_no);
    }
    if (cols[0].empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty word",
                       line_no);
    }
    std::string word =
        options.lowercase ? ascii_lower(cols[0]) : std::string(cols[0]);
    Token tok;
    tok.line = line_no;
    tok.word_id = corpus.words.intern(word);
    if (want >= 2) {
      if (cols[1].empty()) {
        throw ParseError("line " + std::to_string(line_no) + ": empty tag",
                         line_no);
      }
      tok.gold_tag = corpus.gold_tags.intern(cols[1]);
    }
    if (want == 3 && !cols[2].empty()) {
      std::string stem =
          options.lowercase ? ascii_lower(cols[2]) : std::string(cols[2]);
      if (word.compare(0, stem.size(), stem) != 0) {
        throw ParseError("line " + std::to_string(line_no) + ": gold stem '" +
                             stem + "' is not a prefix of '" + word + "'",
                         line_no);
      }
      tok.gold_stem = std::move(stem);
    }
    sentence.push_back(std::move(tok));
  });
  if (!sentence.empty()) corpus.add_sentence(std::move(sentence));

  if (corpus.num_tokens() == 0) {
    throw ParseError("corpus contains no tokens", 0);
  }
  corpus.layout = layout;
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path,
                   const LoadOptions& options) {
  return parse_corpus(read_file(path), options);
}

std::string format_corpus(const Corpus& corpus) {
  std::string out;
  const std::size_t cols = columns_of(corpus.layout);
  for (std::size_t k = 0; k < corpus.num_sentences(); ++k) {
    if (k > 0) out += '\n';
    for (const Token& tok : corpus.sentence(k)) {
      out += corpus.words.str(tok.word_id);
      if (cols >= 2) {
        out += '\t';
        if (tok.gold_tag) out += corpus.gold_tags.str(*tok.gold_tag);
      }
      if (cols == 3) {
        out += '\t';
        if (tok.gold_stem) out += *tok.gold_stem;
      }
      out += '\n';
    }
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_corpus(corpus);
}

TagsetMapping parse_mapping(std::string_view text) {
  TagsetMapping mapping;
  Vocabulary coarse;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    // "#<TAB>coarse" is data: '#' is itself a Penn Treebank tag.
    if (is_blank(line) || (line.front() == '#' && !line.starts_with("#\t"))) {
      return;
    }
    auto cols = split_tabs(line);
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
      throw ParseError("mapping line " + std::to_string(line_no) +
                           ": expected 'fine<TAB>coarse'",
                       line_no);
    }
    TagId id = coarse.intern(cols[1]);
    auto [it, inserted] =
        mapping.fine_to_coarse.emplace(std::string(cols[0]), id);
    if (!inserted && it->second != id) {
      throw ParseError("mapping line " + std::to_string(line_no) +
                           ": fine tag '" + std::string(cols[0]) +
                           "' mapped to two coarse tags",
                       line_no);
    }
  });
  if (coarse.size() == 0) throw ParseError("mapping is empty", 0);
  mapping.coarse_names = coarse.strings();
  return mapping;
}

TagsetMapping load_mapping(const std::filesystem::path& path) {
  return parse_mapping(read_file(path));
}

Corpus apply_mapping(const Corpus& corpus, const TagsetMapping& mapping) {
  Corpus out;
  out.words = corpus.words;
  out.layout = corpus.layout;
  out.coarse = true;
  for (const std::string& name : mapping.coarse_names) out.gold_tags.intern(name);
  for (std::size_t k = 0; k < corpus.num_sentences(); ++k) {
    std::vector<Token> sentence(corpus.sentence(k).begin(),
                                corpus.sentence(k).end());
    for (Token& tok : sentence) {
      if (!tok.gold_tag) continue;
      const std::string& fine = corpus.gold_tags.str(*tok.gold_tag);
      auto it = mapping.fine_to_coarse.find(fine);
      if (it == mapping.fine_to_coarse.end()) {
        throw ParseError("line " + std::to_string(tok.line) + ": tag '" +
                             fine + "' has no coarse mapping",
                         tok.line);
      }
      tok.gold_tag = it->second;
    }
    out.add_sentence(std::move(sentence));
  }
  return out;
}

std::vector<std::size_t> code_point_ends(std::string_view s) {
  std::vector<std::size_t> ends;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    if (i == s.size() || (static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      ends.push_back(i);
    }
  }
  return ends;
}

SplitSupport build_split_support(const Vocabulary& words) {
  if (words.size() == 0) {
    throw std::invalid_argument("split support needs a nonempty vocabulary");
  }
  SplitSupport support;
  for (const std::string& word : words.strings()) {
    const auto ends = code_point_ends(word);
    for (std::size_t cut : ends) {
      Split split;
      split.stem = support.stems.intern(std::string_view(word).substr(0, cut));
      split.suffix = support.suffixes.intern(std::string_view(word).substr(cut));
      support.splits_.push_back(split);
    }
    support.offsets_.push_back(support.splits_.size());
    support.max_splits_ = std::max(support.max_splits_, ends.size());
  }
  return support;
}

}  // namespace stemtag
