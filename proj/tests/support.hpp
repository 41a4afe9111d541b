#pragma once

#include "ifsends/fixtures.hpp"

#include <random>
#include <vector>

namespace ifsends::testing {

inline IfsSystem load_fixture(const std::string& name) { return parse(fixture(name).source).system; }

/// All words of length 1..n in shortlex order.
inline std::vector<Word> all_words(std::size_t generators, int n) {
  std::vector<Word> out;
  std::vector<Word> layer{Word{}};
  for (int len = 1; len <= n; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (std::uint32_t f = 0; f < generators; ++f) {
        Word x = w;
        x.push_back(f);
        next.push_back(x);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

/// Distinct maps among all words of length <= n, found by plain evaluation.
inline std::vector<AffineMap> brute_force_elements(const IfsSystem& s, int n) {
  std::vector<AffineMap> seen;
  for (const auto& w : all_words(s.size(), n)) {
    const AffineMap m = word_evaluate(s, w);
    if (std::find(seen.begin(), seen.end(), m) == seen.end()) seen.push_back(m);
  }
  return seen;
}

inline QuadScalar random_scalar(std::mt19937& rng, std::uint32_t radicand, int span = 9) {
  std::uniform_int_distribution<int> num(-span, span);
  std::uniform_int_distribution<int> den(1, span);
  mpq_class rat(num(rng), den(rng));
  mpq_class rad(radicand ? num(rng) : 0, den(rng));
  return QuadScalar(rat, rad, radicand);
}

/// Random affine map whose coefficients are small enough to be contracting.
inline AffineMap random_contraction(std::mt19937& rng, std::size_t dim, std::uint32_t radicand) {
  Matrix m(dim);
  Vector t(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    t[i] = random_scalar(rng, radicand);
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = random_scalar(rng, radicand) / QuadScalar(100);
  }
  return {m, t};
}

}  // namespace ifsends::testing
