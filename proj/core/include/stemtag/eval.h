// Tagging and stemming metrics.

#ifndef STEMTAG_EVAL_H_
#define STEMTAG_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stemtag {

// Joint counts of induced cluster vs gold class.
class Contingency {
 public:
  Contingency(std::size_t num_induced, std::size_t num_gold);
  // Sizes each axis to the largest label seen plus one.
  static Contingency from_labels(std::span<const std::uint32_t> induced,
                                 std::span<const std::uint32_t> gold);

  void add(std::uint32_t induced, std::uint32_t gold, std::uint64_t n = 1);
  std::uint64_t at(std::size_t induced, std::size_t gold) const {
    return table_[induced * num_gold_ + gold];
  }
  std::size_t num_induced() const { return num_induced_; }
  std::size_t num_gold() const { return num_gold_; }
  std::uint64_t total() const { return total_; }
  Contingency transposed() const;

 private:
  std::size_t num_induced_;
  std::size_t num_gold_;
  std::vector<std::uint64_t> table_;
  std::uint64_t total_ = 0;
};

// Tokens matched when every induced cluster is mapped to its most frequent
// gold class (the lowest gold index wins ties).
std::uint64_t many_to_one_matches(const Contingency& c);
// matches / n. Throws std::invalid_argument when the table is empty.
double many_to_one(const Contingency& c);

// H(induced | gold) + H(gold | induced), in bits. Throws on an empty table.
double variation_of_information(const Contingency& c);

// Fraction of positions whose predicted stem equals the gold stem.
double stemming_accuracy(std::span<const std::string> predicted,
                         std::span<const std::string> gold);

struct EvalReport {
  double many_to_one = 0.0;
  double vi_bits = 0.0;
  std::optional<double> stemming_accuracy;

  // Run metadata; absent when scoring files without a training config.
  std::optional<std::string> variant;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iterations;

  std::string to_json() const;
  static EvalReport from_json(const std::string& text);
};

}  // namespace stemtag

#endif  // STEMTAG_EVAL_H_
