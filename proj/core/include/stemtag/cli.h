// End-to-end commands behind the stemtag executable.

#ifndef STEMTAG_CLI_H_
#define STEMTAG_CLI_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stemtag/eval.h"
#include "stemtag/model.h"
#include "stemtag/oracle.h"
#include "stemtag/sampler.h"

namespace stemtag::cli {

inline constexpr std::string_view kVersion = "0.1.0";

// Process exit codes.
enum class ExitCode : int {
  kOk = 0,
  kFailure = 1,  // internal error
  kUsage = 2,    // bad flags or configuration values
  kInput = 3,    // unreadable or malformed corpus, mapping, or predictions
  kOutput = 4,   // cannot write artifacts
  kBudget = 5,   // oracle enumeration over budget
};

class CliError : public std::runtime_error {
 public:
  CliError(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

struct SettingPreset {
  double alpha;
  double beta;
  double gamma;
};

// Settings 1-4. Settings 3 and 4 carry the same values as 1 and 2.
SettingPreset setting_preset(int setting);

// Flat "key = value" text; '#' starts a comment line. Keys are the long flag
// names without dashes.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::string_view text);
KeyValues load_key_values(const std::filesystem::path& path);

struct ExperimentConfig {
  std::filesystem::path corpus_path;
  std::optional<std::filesystem::path> mapping_path;
  Variant variant = Variant::kStem;
  std::optional<int> setting;
  double alpha = 0.001;
  double beta = 0.1;
  double gamma = 0.001;
  // 0: take the mapping's coarse tag count, or 12 without a mapping.
  std::size_t num_tags = 0;
  std::size_t iterations = 1000;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir;
  bool lowercase = false;
  AnnealSchedule schedule;

  // Later sources override earlier ones. A preset from "setting" fills
  // alpha/beta/gamma; explicit alpha/beta/gamma keys win over it.
  static ExperimentConfig resolve(const KeyValues& kv);
  // Key-value text that resolve() maps back to this config.
  std::string to_manifest() const;
};

struct TrainOutcome {
  RunResult run;
  std::optional<EvalReport> report;
};

// Writes tagged.tsv, trace.csv, manifest.txt and, with gold tags,
// report.json into config.output_dir.
TrainOutcome cmd_train(const ExperimentConfig& config);

struct EvalOptions {
  std::optional<std::filesystem::path> mapping_path;
  bool lowercase = false;
};

// Scores a tagged.tsv-format prediction file against a gold corpus file.
EvalReport cmd_eval(const std::filesystem::path& predictions_path,
                    const std::filesystem::path& gold_path,
                    const EvalOptions& options = {});

struct OracleOptions {
  Hyperparams hp;
  EnumerationBudget budget;
  bool lowercase = false;
};

// Prints "assignment<TAB>probability" lines, most probable first.
void cmd_oracle(const std::filesystem::path& corpus_path,
                const OracleOptions& options, std::ostream& out);

// Rewrites a corpus with coarse tags.
void cmd_map_tagset(const std::filesystem::path& corpus_path,
                    const std::filesystem::path& mapping_path,
                    std::ostream& out);

// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace stemtag::cli

#endif  // STEMTAG_CLI_H_
