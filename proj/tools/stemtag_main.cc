// stemtag: unsupervised joint part-of-speech tagging and stemming.

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "stemtag/cli.h"

namespace {

using stemtag::cli::CliError;
using stemtag::cli::ExitCode;
using stemtag::cli::KeyValues;

// Collects flags that were given on the command line so they can override a
// config file key by key.
struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App& app, const std::string& key, const std::string& help) {
    options[key] = app.add_option("--" + key, values[key], help);
  }
  KeyValues given() const {
    KeyValues kv;
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) kv[key] = values.at(key);
    }
    return kv;
  }
};

int run_command(const std::function<void()>& body) {
  try {
    body();
    return static_cast<int>(ExitCode::kOk);
  } catch (const CliError& e) {
    std::cerr << "stemtag: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "stemtag: internal error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kFailure);
  }
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw CliError(ExitCode::kOutput, "cannot write " + path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised joint PoS tagger and stemmer (collapsed Gibbs)"};
  app.set_version_flag("--version", std::string(stemtag::cli::kVersion));
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Run a sampler and write artifacts");
  std::string config_path;
  bool lowercase = false;
  FlagSet train_flags;
  train->add_option("--config", config_path,
                    "Key-value config file; flags override its values");
  train_flags.add(*train, "corpus", "Corpus file (word[\\ttag[\\tstem]])");
  train_flags.add(*train, "mapping", "Fine-to-coarse tag mapping file");
  train_flags.add(*train, "variant", "Model variant: w, s or sm");
  train_flags.add(*train, "setting", "Hyperparameter preset 1-4");
  train_flags.add(*train, "alpha", "Transition concentration");
  train_flags.add(*train, "beta", "Word/stem emission concentration");
  train_flags.add(*train, "gamma", "Suffix emission concentration");
  train_flags.add(*train, "num-tags", "Number of induced tags");
  train_flags.add(*train, "iterations", "Gibbs sweeps (default 1000)");
  train_flags.add(*train, "seed", "PRNG seed");
  train_flags.add(*train, "out", "Output directory");
  train_flags.add(*train, "anneal-schedule",
                  "Inverse temperatures as sweep:beta,...; must end at 1");
  train->add_flag("--lowercase", lowercase, "Lowercase ASCII letters");

  // eval
  auto* eval = app.add_subcommand("eval", "Score predictions against gold");
  std::string predictions;
  std::string gold;
  std::string eval_mapping;
  std::string eval_out;
  bool eval_lowercase = false;
  eval->add_option("--predictions", predictions, "tagged.tsv from train")
      ->required();
  eval->add_option("--gold", gold, "Gold corpus file")->required();
  eval->add_option("--mapping", eval_mapping, "Fine-to-coarse tag mapping");
  eval->add_option("--out", eval_out, "Write the JSON report here");
  eval->add_flag("--lowercase", eval_lowercase, "Lowercase ASCII letters");

  // oracle
  auto* oracle = app.add_subcommand(
      "oracle", "Print the exact posterior of a tiny corpus");
  std::string oracle_corpus;
  std::string oracle_variant = "w";
  int oracle_setting = 0;
  stemtag::cli::OracleOptions oracle_options;
  oracle_options.hp.num_tags = 2;
  oracle_options.hp.alpha = 0.5;
  oracle_options.hp.beta = 0.5;
  oracle_options.hp.gamma = 0.5;
  auto* o_alpha = oracle->add_option("--alpha", oracle_options.hp.alpha);
  auto* o_beta = oracle->add_option("--beta", oracle_options.hp.beta);
  auto* o_gamma = oracle->add_option("--gamma", oracle_options.hp.gamma);
  oracle->add_option("--corpus", oracle_corpus, "Tiny corpus file")->required();
  oracle->add_option("--variant", oracle_variant, "w, s or sm");
  oracle->add_option("--setting", oracle_setting, "Hyperparameter preset 1-4");
  oracle->add_option("--num-tags", oracle_options.hp.num_tags,
                     "Number of tags (default 2)");
  oracle->add_option("--budget", oracle_options.budget.max_assignments,
                     "Maximum enumerated assignments");
  oracle->add_flag("--lowercase", oracle_options.lowercase);

  // map-tagset
  auto* map = app.add_subcommand("map-tagset", "Rewrite gold tags to coarse tags");
  std::string map_corpus;
  std::string map_mapping;
  std::string map_out;
  map->add_option("--corpus", map_corpus, "Corpus file")->required();
  map->add_option("--mapping", map_mapping, "Mapping file")->required();
  map->add_option("--out", map_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::kUsage);
  }

  if (train->parsed()) {
    return run_command([&] {
      KeyValues kv;
      if (!config_path.empty()) kv = stemtag::cli::load_key_values(config_path);
      for (auto& [key, value] : train_flags.given()) kv[key] = value;
      if (lowercase) kv["lowercase"] = "true";
      const auto config = stemtag::cli::ExperimentConfig::resolve(kv);
      const auto outcome = stemtag::cli::cmd_train(config);
      std::cerr << "stemtag: " << config.iterations << " sweeps in "
                << outcome.run.wall_time << " s, final log joint "
                << outcome.run.joint_log_prob_trace.back() << "\n";
      if (outcome.report) std::cout << outcome.report->to_json();
    });
  }
  if (eval->parsed()) {
    return run_command([&] {
      stemtag::cli::EvalOptions options;
      if (!eval_mapping.empty()) options.mapping_path = eval_mapping;
      options.lowercase = eval_lowercase;
      const auto report = stemtag::cli::cmd_eval(predictions, gold, options);
      write_or_print(eval_out, report.to_json());
    });
  }
  if (oracle->parsed()) {
    return run_command([&] {
      try {
        oracle_options.hp.variant = stemtag::parse_variant(oracle_variant);
      } catch (const std::invalid_argument& e) {
        throw CliError(ExitCode::kUsage, e.what());
      }
      if (oracle_setting != 0) {
        const auto p = stemtag::cli::setting_preset(oracle_setting);
        if (o_alpha->count() == 0) oracle_options.hp.alpha = p.alpha;
        if (o_beta->count() == 0) oracle_options.hp.beta = p.beta;
        if (o_gamma->count() == 0) oracle_options.hp.gamma = p.gamma;
      }
      stemtag::cli::cmd_oracle(oracle_corpus, oracle_options, std::cout);
    });
  }
  if (map->parsed()) {
    return run_command([&] {
      std::ostringstream out;
      stemtag::cli::cmd_map_tagset(map_corpus, map_mapping, out);
      write_or_print(map_out, out.str());
    });
  }
  return static_cast<int>(ExitCode::kUsage);
}
