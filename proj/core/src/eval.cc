#include "stemtag/eval.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace stemtag {

Contingency::Contingency(std::size_t num_induced, std::size_t num_gold)
    : num_induced_(num_induced),
      num_gold_(num_gold),
      table_(num_induced * num_gold, 0) {}

Contingency Contingency::from_labels(std::span<const std::uint32_t> induced,
                                     std::span<const std::uint32_t> gold) {
  if (induced.size() != gold.size()) {
    throw std::invalid_argument("label sequences differ in length");
  }
  std::uint32_t ni = 0;
  std::uint32_t ng = 0;
  for (std::size_t k = 0; k < induced.size(); ++k) {
    ni = std::max(ni, induced[k] + 1);
    ng = std::max(ng, gold[k] + 1);
  }
  Contingency c(ni, ng);
  for (std::size_t k = 0; k < induced.size(); ++k) c.add(induced[k], gold[k]);
  return c;
}

void Contingency::add(std::uint32_t induced, std::uint32_t gold,
                      std::uint64_t n) {
  if (induced >= num_induced_ || gold >= num_gold_) {
    throw std::out_of_range("contingency label out of range");
  }
  table_[induced * num_gold_ + gold] += n;
  total_ += n;
}

Contingency Contingency::transposed() const {
  Contingency t(num_gold_, num_induced_);
  for (std::size_t i = 0; i < num_induced_; ++i) {
    for (std::size_t g = 0; g < num_gold_; ++g) {
      if (at(i, g) != 0) {
        t.add(static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(i),
              at(i, g));
      }
    }
  }
  return t;
}

std::uint64_t many_to_one_matches(const Contingency& c) {
  std::uint64_t matched = 0;
  for (std::size_t i = 0; i < c.num_induced(); ++i) {
    std::uint64_t best = 0;
    for (std::size_t g = 0; g < c.num_gold(); ++g) {
      best = std::max(best, c.at(i, g));
    }
    matched += best;
  }
  return matched;
}

double many_to_one(const Contingency& c) {
  if (c.total() == 0) throw std::invalid_argument("empty contingency table");
  return static_cast<double>(many_to_one_matches(c)) /
         static_cast<double>(c.total());
}

double variation_of_information(const Contingency& c) {
  if (c.total() == 0) throw std::invalid_argument("empty contingency table");
  std::vector<std::uint64_t> row(c.num_induced(), 0);
  std::vector<std::uint64_t> col(c.num_gold(), 0);
  for (std::size_t i = 0; i < c.num_induced(); ++i) {
    for (std::size_t g = 0; g < c.num_gold(); ++g) {
      row[i] += c.at(i, g);
      col[g] += c.at(i, g);
    }
  }
  // -sum p(i,g) [log2 p(i,g)/p(i) + log2 p(i,g)/p(g)]; every term is >= 0.
  const double n = static_cast<double>(c.total());
  double vi = 0.0;
  for (std::size_t i = 0; i < c.num_induced(); ++i) {
    for (std::size_t g = 0; g < c.num_gold(); ++g) {
      const std::uint64_t nig = c.at(i, g);
      if (nig == 0) continue;
      const double joint = static_cast<double>(nig);
      vi -= joint / n *
            (std::log2(joint / static_cast<double>(row[i])) +
             std::log2(joint / static_cast<double>(col[g])));
    }
  }
  return vi;
}

double stemming_accuracy(std::span<const std::string> predicted,
                         std::span<const std::string> gold) {
  if (predicted.size() != gold.size()) {
    throw std::invalid_argument("predicted and gold stems differ in length");
  }
  if (gold.empty()) throw std::invalid_argument("no stems to score");
  std::size_t correct = 0;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    if (predicted[k] == gold[k]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["many_to_one"] = many_to_one;
  j["vi_bits"] = vi_bits;
  j["stemming_accuracy"] =
      stemming_accuracy ? nlohmann::ordered_json(*stemming_accuracy) : nullptr;
  auto opt = [](const auto& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  j["variant"] = opt(variant);
  j["alpha"] = opt(alpha);
  j["beta"] = opt(beta);
  j["gamma"] = opt(gamma);
  j["seed"] = opt(seed);
  j["iterations"] = opt(iterations);
  return j.dump(2) + "\n";
}

EvalReport EvalReport::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  EvalReport r;
  r.many_to_one = j.at("many_to_one").get<double>();
  r.vi_bits = j.at("vi_bits").get<double>();
  auto read = [&j](const char* key, auto& field) {
    if (j.contains(key) && !j.at(key).is_null()) {
      field = j.at(key).get<typename std::decay_t<decltype(field)>::value_type>();
    }
  };
  read("stemming_accuracy", r.stemming_accuracy);
  read("variant", r.variant);
  read("alpha", r.alpha);
  read("beta", r.beta);
  read("gamma", r.gamma);
  read("seed", r.seed);
  read("iterations", r.iterations);
  return r;
}

}  // namespace stemtag
