#include "stemtag/cli.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace stemtag::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || p != end) {
    throw CliError(ExitCode::kUsage,
                   "invalid value for " + key + ": '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw CliError(ExitCode::kUsage,
                 "invalid boolean for " + key + ": '" + text + "'");
}

Corpus load_input_corpus(const std::filesystem::path& path, bool lowercase) {
  try {
    LoadOptions options;
    options.lowercase = lowercase;
    return load_corpus(path, options);
  } catch (const std::exception& e) {
    throw CliError(ExitCode::kInput, path.string() + ": " + e.what());
  }
}

Corpus map_if_requested(Corpus corpus,
                        const std::optional<std::filesystem::path>& mapping) {
  if (!mapping) return corpus;
  try {
    return apply_mapping(corpus, load_mapping(*mapping));
  } catch (const std::exception& e) {
    throw CliError(ExitCode::kInput, e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) {
    throw CliError(ExitCode::kOutput, "cannot write " + path.string());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(ExitCode::kInput, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct PredictedToken {
  std::string word;
  std::uint32_t tag = 0;
  std::string stem;
  std::size_t line = 0;
};

std::vector<PredictedToken> parse_predictions(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::vector<PredictedToken> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 4) {
      throw CliError(ExitCode::kInput, path.string() + ": line " +
                                           std::to_string(line_no) +
                                           ": expected 4 columns");
    }
    PredictedToken tok;
    tok.word = cols[0];
    try {
      tok.tag = parse_number<std::uint32_t>("induced tag", cols[1]);
    } catch (const CliError& e) {
      throw CliError(ExitCode::kInput, path.string() + ": line " +
                                           std::to_string(line_no) + ": " +
                                           e.what());
    }
    tok.stem = cols[2];
    tok.line = line_no;
    out.push_back(std::move(tok));
  }
  return out;
}

// Shared by train and eval so both produce identical reports.
EvalReport score(std::span<const std::uint32_t> induced, const Corpus& gold,
                 const std::vector<std::string>* predicted_stems) {
  std::vector<std::uint32_t> gold_tags;
  gold_tags.reserve(gold.num_tokens());
  for (const Token& tok : gold.tokens()) gold_tags.push_back(*tok.gold_tag);
  const Contingency table = Contingency::from_labels(induced, gold_tags);
  EvalReport report;
  report.many_to_one = many_to_one(table);
  report.vi_bits = variation_of_information(table);
  if (predicted_stems != nullptr && gold.has_gold_stems()) {
    std::vector<std::string> predicted;
    std::vector<std::string> expected;
    const auto tokens = gold.tokens();
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (!tokens[k].gold_stem) continue;
      predicted.push_back((*predicted_stems)[k]);
      expected.push_back(*tokens[k].gold_stem);
    }
    report.stemming_accuracy = stemming_accuracy(predicted, expected);
  }
  return report;
}

std::string assignment_label(const Model& model, const Assignment& a) {
  std::string out;
  const auto tokens = model.corpus().tokens();
  for (std::size_t i = 0; i < a.tags.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(a.tags[i]);
    if (uses_splits(model.hyperparams().variant)) {
      const WordId w = tokens[i].word_id;
      const std::string& suffix = model.support().suffix_str(w, a.splits[i]);
      out += ':';
      out += model.support().stem_str(w, a.splits[i]);
      out += '+';
      out += suffix.empty() ? "#" : suffix;
    }
  }
  return out;
}

}  // namespace

SettingPreset setting_preset(int setting) {
  switch (setting) {
    case 1:
    case 3:
      return {0.001, 0.1, 0.001};
    case 2:
    case 4:
      return {0.003, 1.0, 0.003};
    default:
      throw CliError(ExitCode::kUsage, "setting must be 1, 2, 3 or 4");
  }
}

std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw CliError(ExitCode::kUsage, "config line " + std::to_string(line_no) +
                                           ": expected key = value");
    }
    kv[trim(std::string_view(t).substr(0, eq))] =
        trim(std::string_view(t).substr(eq + 1));
  }
  return kv;
}

KeyValues load_key_values(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(ExitCode::kUsage, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str());
}

ExperimentConfig ExperimentConfig::resolve(const KeyValues& kv) {
  static const char* const kKnown[] = {
      "corpus", "mapping",    "variant", "setting", "alpha",
      "beta",   "gamma",      "num-tags", "iterations", "seed",
      "out",    "lowercase", "anneal-schedule"};
  for (const auto& [key, value] : kv) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char* k) {
          return key == k;
        }) == std::end(kKnown)) {
      throw CliError(ExitCode::kUsage, "unknown config key '" + key + "'");
    }
  }
  auto get = [&kv](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() || it->second.empty() ? nullptr : &it->second;
  };

  ExperimentConfig c;
  if (auto v = get("corpus")) c.corpus_path = *v;
  if (auto v = get("mapping")) c.mapping_path = *v;
  if (auto v = get("variant")) {
    try {
      c.variant = parse_variant(*v);
    } catch (const std::invalid_argument& e) {
      throw CliError(ExitCode::kUsage, e.what());
    }
  }
  if (auto v = get("setting")) {
    c.setting = parse_number<int>("setting", *v);
    const SettingPreset p = setting_preset(*c.setting);
    c.alpha = p.alpha;
    c.beta = p.beta;
    c.gamma = p.gamma;
  }
  if (auto v = get("alpha")) c.alpha = parse_number<double>("alpha", *v);
  if (auto v = get("beta")) c.beta = parse_number<double>("beta", *v);
  if (auto v = get("gamma")) c.gamma = parse_number<double>("gamma", *v);
  if (auto v = get("num-tags")) {
    c.num_tags = parse_number<std::size_t>("num-tags", *v);
  }
  if (auto v = get("iterations")) {
    c.iterations = parse_number<std::size_t>("iterations", *v);
  }
  if (auto v = get("seed")) c.seed = parse_number<std::uint64_t>("seed", *v);
  if (auto v = get("out")) c.output_dir = *v;
  if (auto v = get("lowercase")) c.lowercase = parse_bool("lowercase", *v);
  if (auto v = get("anneal-schedule")) {
    try {
      c.schedule = AnnealSchedule::parse(*v);
    } catch (const std::invalid_argument& e) {
      throw CliError(ExitCode::kUsage, e.what());
    }
  }

  Hyperparams hp{c.alpha, c.beta, c.gamma, c.num_tags == 0 ? 1 : c.num_tags,
                 c.variant};
  try {
    hp.validate();
  } catch (const std::invalid_argument& e) {
    throw CliError(ExitCode::kUsage, e.what());
  }
  if (c.iterations == 0) {
    throw CliError(ExitCode::kUsage, "iterations must be >= 1");
  }
  return c;
}

std::string ExperimentConfig::to_manifest() const {
  std::string out;
  out += "# stemtag " + std::string(kVersion) + " run manifest\n";
  auto line = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  line("corpus", corpus_path.string());
  line("mapping", mapping_path ? mapping_path->string() : "");
  line("variant", std::string(variant_name(variant)));
  line("setting", setting ? std::to_string(*setting) : "");
  line("alpha", format_double(alpha));
  line("beta", format_double(beta));
  line("gamma", format_double(gamma));
  line("num-tags", std::to_string(num_tags));
  line("iterations", std::to_string(iterations));
  line("seed", std::to_string(seed));
  line("out", output_dir.string());
  line("lowercase", lowercase ? "true" : "false");
  line("anneal-schedule", schedule.to_string());
  return out;
}

TrainOutcome cmd_train(const ExperimentConfig& config) {
  if (config.corpus_path.empty()) {
    throw CliError(ExitCode::kUsage, "train needs --corpus");
  }
  if (config.output_dir.empty()) {
    throw CliError(ExitCode::kUsage, "train needs --out");
  }
  Corpus corpus = map_if_requested(
      load_input_corpus(config.corpus_path, config.lowercase),
      config.mapping_path);

  std::size_t num_tags = config.num_tags;
  if (num_tags == 0) {
    num_tags = corpus.coarse ? corpus.gold_tags.size() : 12;
  }
  const SplitSupport support = build_split_support(corpus);
  const Hyperparams hp{config.alpha, config.beta, config.gamma, num_tags,
                       config.variant};
  const Model model(corpus, support, hp);
  SamplerConfig sc;
  sc.iterations = config.iterations;
  sc.seed = config.seed;
  sc.schedule = config.schedule;

  TrainOutcome outcome;
  outcome.run = run(model, sc);
  const SamplerState& state = outcome.run.final_state;

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw CliError(ExitCode::kOutput, "cannot create " +
                                          config.output_dir.string() + ": " +
                                          ec.message());
  }

  std::string tagged;
  std::vector<std::string> predicted_stems;
  const bool splits = uses_splits(config.variant);
  for (std::size_t k = 0; k < corpus.num_sentences(); ++k) {
    if (k > 0) tagged += '\n';
    for (std::size_t i = corpus.sentence_begin(k); i < corpus.sentence_end(k);
         ++i) {
      const WordId w = corpus.tokens()[i].word_id;
      tagged += corpus.words.str(w);
      tagged += '\t';
      tagged += std::to_string(state.tags[i]);
      tagged += '\t';
      if (splits) {
        predicted_stems.push_back(support.stem_str(w, state.split_idx[i]));
        tagged += predicted_stems.back();
        tagged += '\t';
        tagged += support.suffix_str(w, state.split_idx[i]);
      } else {
        tagged += '\t';
      }
      tagged += '\n';
    }
  }
  write_text(config.output_dir / "tagged.tsv", tagged);

  std::string trace = "sweep,joint_log_prob\n";
  for (std::size_t it = 0; it < outcome.run.joint_log_prob_trace.size(); ++it) {
    trace += std::to_string(it + 1) + "," +
             format_double(outcome.run.joint_log_prob_trace[it]) + "\n";
  }
  write_text(config.output_dir / "trace.csv", trace);
  write_text(config.output_dir / "manifest.txt", config.to_manifest());

  if (corpus.has_gold_tags()) {
    EvalReport report =
        score(state.tags, corpus, splits ? &predicted_stems : nullptr);
    report.variant = std::string(variant_name(config.variant));
    report.alpha = config.alpha;
    report.beta = config.beta;
    report.gamma = config.gamma;
    report.seed = config.seed;
    report.iterations = config.iterations;
    write_text(config.output_dir / "report.json", report.to_json());
    outcome.report = std::move(report);
  }
  return outcome;
}

EvalReport cmd_eval(const std::filesystem::path& predictions_path,
                    const std::filesystem::path& gold_path,
                    const EvalOptions& options) {
  const std::vector<PredictedToken> predicted =
      parse_predictions(predictions_path);
  const Corpus gold = map_if_requested(
      load_input_corpus(gold_path, options.lowercase), options.mapping_path);
  if (!gold.has_gold_tags()) {
    throw CliError(ExitCode::kInput, gold_path.string() + " has no gold tags");
  }
  const auto gold_tokens = gold.tokens();
  const std::size_t n = std::min(predicted.size(), gold_tokens.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (predicted[k].word != gold.words.str(gold_tokens[k].word_id)) {
      throw CliError(ExitCode::kInput,
                     "files diverge at predictions line " +
                         std::to_string(predicted[k].line) + " / gold line " +
                         std::to_string(gold_tokens[k].line));
    }
  }
  if (predicted.size() != gold_tokens.size()) {
    const std::string where =
        predicted.size() > n
            ? "predictions line " + std::to_string(predicted[n].line)
            : "gold line " + std::to_string(gold_tokens[n].line);
    throw CliError(ExitCode::kInput,
                   "token count mismatch (" + std::to_string(predicted.size()) +
                       " predicted vs " + std::to_string(gold_tokens.size()) +
                       " gold); first unmatched token at " + where);
  }

  std::vector<std::uint32_t> induced;
  std::vector<std::string> stems;
  bool have_stems = !predicted.empty();
  for (const PredictedToken& tok : predicted) {
    induced.push_back(tok.tag);
    stems.push_back(tok.stem);
    if (tok.stem.empty()) have_stems = false;
  }
  return score(induced, gold, have_stems ? &stems : nullptr);
}

void cmd_oracle(const std::filesystem::path& corpus_path,
                const OracleOptions& options, std::ostream& out) {
  const Corpus corpus = load_input_corpus(corpus_path, options.lowercase);
  const SplitSupport support = build_split_support(corpus);
  std::map<Assignment, double> posterior;
  try {
    posterior = exact_posterior(corpus, support, options.hp, options.budget);
  } catch (const BudgetExceeded& e) {
    throw CliError(ExitCode::kBudget, e.what());
  } catch (const std::invalid_argument& e) {
    throw CliError(ExitCode::kUsage, e.what());
  }
  const Model model(corpus, support, options.hp);
  std::vector<std::pair<const Assignment*, double>> rows;
  rows.reserve(posterior.size());
  for (const auto& [a, p] : posterior) rows.emplace_back(&a, p);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  char buf[64];
  for (const auto& [a, p] : rows) {
    std::snprintf(buf, sizeof buf, "%.12g", p);
    out << assignment_label(model, *a) << '\t' << buf << '\n';
  }
}

void cmd_map_tagset(const std::filesystem::path& corpus_path,
                    const std::filesystem::path& mapping_path,
                    std::ostream& out) {
  const Corpus corpus =
      map_if_requested(load_input_corpus(corpus_path, false), mapping_path);
  out << format_corpus(corpus);
}

}  // namespace stemtag::cli
