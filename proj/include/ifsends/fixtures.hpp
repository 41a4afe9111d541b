#pragma once

// Built-in corpus: the affine systems used as worked examples, each with the
// congruences claimed for it and the analysis outcome the test suites check.

#include "ifsends/report.hpp"

#include <map>
#include <string>
#include <vector>

namespace ifsends {

struct ExpectedOutcome {
  std::optional<EndsEstimate::Kind> ends;
  std::size_t ends_count = 0;  // for Exactly
  std::optional<bool> certificate;
  std::optional<bool> link_connected;
  std::optional<bool> link_edgeless;
  std::optional<bool> has_idempotents;
};

struct Fixture {
  std::string name;
  std::string description;
  std::string source;
  AnalysisParams params;
  ExpectedOutcome expected;
};

namespace detail {

inline AnalysisParams fixture_params(int ball_depth, int link_depth, int k_max, int margin, int cloud_length) {
  AnalysisParams p;
  p.ball_depth = ball_depth;
  p.link_depth = link_depth;
  p.k_max = k_max;
  p.margin = margin;
  p.cloud_length = cloud_length;
  return p;
}

inline std::vector<Fixture> build_fixtures() {
  using K = EndsEstimate::Kind;
  std::vector<Fixture> out;

  out.push_back({"ex14_projections", "two coordinate projections in the plane; attractor is the origin",
                 R"(dim 2
radicand 0
map a : [1/2, 0; 0, 0] ; [0, 0]
map b : [0, 0; 0, 1/2] ; [0, 0]
expect a b = b a
)",
                 fixture_params(10, 6, 6, 3, 10), {K::Exactly, 2, false, true, std::nullopt, true}});

  out.push_back({"ex14_halfconst", "halving plus the constant 1 on the line; one end, not linked",
                 R"(dim 1
radicand 0
map a : [1/2] ; [0]
map b : [0] ; [1]
expect a b a = a b b
expect b a = b b
)",
                 fixture_params(10, 8, 6, 3, 12), {K::Exactly, 1, false, false, true, true}});

  out.push_back({"koch2", "Koch curve from two similarities",
                 R"(dim 2
radicand 3
map a : [-1/2, 0+1/6r; 0-1/6r, -1/2] ; [1/2, 0+1/6r]
map b : [-1/2, 0-1/6r; 0+1/6r, -1/2] ; [1, 0]
)",
                 fixture_params(10, 6, 6, 3, 11), {K::GrowingUnbounded, 0, false, false, std::nullopt, false}});

  out.push_back({"koch3", "Koch curve with a third map tying the tree together",
                 R"(dim 2
radicand 3
map a : [-1/2, 0+1/6r; 0-1/6r, -1/2] ; [1/2, 0+1/6r]
map b : [-1/2, 0-1/6r; 0+1/6r, -1/2] ; [1, 0]
map c : [1/3, 0; 0, 1/3] ; [1/3, 0+1/9r]
expect a a b = c a
expect c b = b b a
)",
                 fixture_params(10, 6, 6, 3, 11), {K::Exactly, 1, true, true, std::nullopt, false}});

  out.push_back({"sierpinski3", "Sierpinski triangle from three half-scale maps",
                 R"(dim 2
radicand 3
map a : [1/2, 0; 0, 1/2] ; [0, 0]
map b : [1/2, 0; 0, 1/2] ; [1/2, 0]
map c : [1/2, 0; 0, 1/2] ; [1/4, 0+1/4r]
)",
                 fixture_params(8, 6, 5, 3, 12), {K::GrowingUnbounded, 0, false, false, std::nullopt, false}});

  out.push_back({"sierpinski5", "Sierpinski triangle with two extra line maps",
                 R"(dim 2
radicand 3
map a : [1/2, 0; 0, 1/2] ; [0, 0]
map b : [1/2, 0; 0, 1/2] ; [1/2, 0]
map c : [1/2, 0; 0, 1/2] ; [1/4, 0+1/4r]
map d : [1/2, 0; 0, 0] ; [1/4, 0]
map e : [1/8, 0-1/8r; 0-1/8r, 3/8] ; [3/4, 0+1/4r]
expect a b d = d a d
expect d b d = b a d
expect b c e = e b e
expect e c e = c b e
)",
                 fixture_params(7, 6, 4, 3, 9), {K::Exactly, 1, true, true, std::nullopt, false}});

  out.push_back({"carpet8", "Sierpinski carpet from eight third-scale maps",
                 R"(dim 2
radicand 0
map a1 : [1/3, 0; 0, 1/3] ; [0, 2/3]
map a2 : [1/3, 0; 0, 1/3] ; [1/3, 2/3]
map a3 : [1/3, 0; 0, 1/3] ; [2/3, 2/3]
map a4 : [1/3, 0; 0, 1/3] ; [0, 1/3]
map a6 : [1/3, 0; 0, 1/3] ; [2/3, 1/3]
map a7 : [1/3, 0; 0, 1/3] ; [0, 0]
map a8 : [1/3, 0; 0, 1/3] ; [1/3, 0]
map a9 : [1/3, 0; 0, 1/3] ; [2/3, 0]
)",
                 fixture_params(5, 4, 3, 2, 6), {K::GrowingUnbounded, 0, false, false, std::nullopt, false}});

  out.push_back({"carpet10", "Sierpinski carpet with two edge projections",
                 R"(dim 2
radicand 0
map a1 : [1/3, 0; 0, 1/3] ; [0, 2/3]
map a2 : [1/3, 0; 0, 1/3] ; [1/3, 2/3]
map a3 : [1/3, 0; 0, 1/3] ; [2/3, 2/3]
map a4 : [1/3, 0; 0, 1/3] ; [0, 1/3]
map a6 : [1/3, 0; 0, 1/3] ; [2/3, 1/3]
map a7 : [1/3, 0; 0, 1/3] ; [0, 0]
map a8 : [1/3, 0; 0, 1/3] ; [1/3, 0]
map a9 : [1/3, 0; 0, 1/3] ; [2/3, 0]
map w : [0, 0; 0, 2/3] ; [0, 1/6]
map e : [0, 0; 0, 2/3] ; [1, 1/6]
expect a1 e = a2 w
expect a2 e = a3 w
expect a7 e = a8 w
expect a8 e = a9 w
expect a4 w = w a4
expect a6 e = e a6
expect w a1 a4 = a1 a7 w
expect w a7 a4 = a7 a1 w
expect e a1 a4 = a3 a9 e
)",
                 fixture_params(6, 6, 3, 3, 5), {K::Exactly, 1, true, true, std::nullopt, false}});

  out.push_back({"crooked_koch4", "crooked Koch curve; its semigroup is free",
                 R"(dim 2
radicand 0
map a : [1/3, 0; 0, 1/3] ; [0, 0]
map b : [1/3, -1/3; 1/3, 1/3] ; [1/3, 0]
map c : [0, 1/3; -1/3, 0] ; [2/3, 1/3]
map d : [1/3, 0; 0, 1/3] ; [2/3, 0]
)",
                 fixture_params(8, 6, 5, 3, 8), {K::GrowingUnbounded, 0, false, false, std::nullopt, false}});

  out.push_back({"ex19_abc", "unit interval from two halvings plus the constant 1",
                 R"(dim 1
radicand 2
map a : [1/2] ; [0]
map b : [1/2] ; [1/2]
map c : [0] ; [1]
)",
                 fixture_params(9, 6, 5, 3, 12), {K::GrowingUnbounded, 0, false, std::nullopt, std::nullopt, true}});

  out.push_back({"ex19_abd", "two halvings plus the constant sqrt 2; adds isolated points",
                 R"(dim 1
radicand 2
map a : [1/2] ; [0]
map b : [1/2] ; [1/2]
map d : [0] ; [0+1r]
)",
                 fixture_params(9, 6, 5, 3, 12), {K::GrowingUnbounded, 0, false, std::nullopt, std::nullopt, true}});

  out.push_back({"ex21", "two non-constant maps whose products include infinitely many constants",
                 R"(dim 2
radicand 0
map a : [1/2, 0; 0, 0] ; [0, 0]
map b : [0, 0; 1/2, 0] ; [1, 0]
)",
                 fixture_params(10, 6, 6, 3, 12), {K::Exactly, 2, false, std::nullopt, std::nullopt, true}});

  return out;
}

}  // namespace detail

inline const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> corpus = detail::build_fixtures();
  return corpus;
}

inline const Fixture& fixture(const std::string& name) {
  for (const auto& f : fixtures())
    if (f.name == name) return f;
  throw std::out_of_range("unknown fixture '" + name + "'");
}

}  // namespace ifsends
