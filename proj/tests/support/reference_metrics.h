// Reference metric computations that share no code with the library.

#ifndef STEMTAG_TESTS_SUPPORT_REFERENCE_METRICS_H_
#define STEMTAG_TESTS_SUPPORT_REFERENCE_METRICS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace stemtag::testing {

using Labels = std::vector<std::uint32_t>;

// Best matches over every function from clusters to classes.
inline std::uint64_t brute_force_matches(const Labels& induced, const Labels& gold,
                                  std::uint32_t ni, std::uint32_t ng) {
  std::vector<std::uint32_t> f(ni, 0);
  std::uint64_t best = 0;
  while (true) {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < induced.size(); ++k) m += f[induced[k]] == gold[k];
    best = std::max(best, m);
    std::size_t pos = 0;
    while (pos < ni && ++f[pos] == ng) f[pos++] = 0;
    if (pos == ni) break;
  }
  return best;
}

// H(X) + H(Y) - 2 I(X; Y) from label sequences.
inline double reference_vi(const Labels& x, const Labels& y) {
  std::map<std::uint32_t, double> px;
  std::map<std::uint32_t, double> py;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> pxy;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    px[x[k]] += 1 / n;
    py[y[k]] += 1 / n;
    pxy[{x[k], y[k]}] += 1 / n;
  }
  double hx = 0;
  double hy = 0;
  double mi = 0;
  for (auto [k, p] : px) hx -= p * std::log2(p);
  for (auto [k, p] : py) hy -= p * std::log2(p);
  for (auto [k, p] : pxy) mi += p * std::log2(p / (px[k.first] * py[k.second]));
  return hx + hy - 2 * mi;
}

}  // namespace stemtag::testing

#endif  // STEMTAG_TESTS_SUPPORT_REFERENCE_METRICS_H_
