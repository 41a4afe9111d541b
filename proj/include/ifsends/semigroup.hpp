#pragma once

// Truncated Cayley graph of the semigroup generated by an IFS. Vertices are
// distinct maps, edges go from s to s o f, and the graph is grown breadth first
// with exact deduplication on coefficient tuples.

#include "ifsends/affine.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ifsends {

/// Generator indices, read left to right as f1 o f2 o ... o fn.
using Word = std::vector<std::uint32_t>;

inline constexpr std::uint32_t kNoVertex = std::numeric_limits<std::uint32_t>::max();
inline constexpr std::size_t kDefaultVertexCap = 5'000'000;

class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, int completed_depth)
      : std::runtime_error(what), completed_depth_(completed_depth) {}
  int completed_depth() const { return completed_depth_; }

 private:
  int completed_depth_;
};

class UndeterminedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Words print as concatenated names when every name is one character,
/// otherwise space separated.
inline std::string format_word(const IfsSystem& system, const Word& w) {
  bool short_names = true;
  for (const auto& g : system.generators()) short_names = short_names && g.name.size() == 1;
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i && !short_names) s += ' ';
    s += system.name(w[i]);
  }
  return s;
}

inline AffineMap word_evaluate(const IfsSystem& system, const Word& w) {
  if (w.empty()) throw std::invalid_argument("cannot evaluate the empty word");
  AffineMap acc = system.map(w.at(0));
  for (std::size_t i = 1; i < w.size(); ++i) acc = compose(acc, system.map(w.at(i)));
  return acc;
}

inline bool congruent(const IfsSystem& system, const Word& w1, const Word& w2) {
  return word_evaluate(system, w1) == word_evaluate(system, w2);
}

struct SemigroupElement {
  AffineMap map;
  Word word;  // shortest, lexicographically least in declaration order
  int depth = 0;
  std::uint32_t id = 0;
};

struct CayleyEdge {
  std::uint32_t source;
  std::uint32_t generator;
  std::uint32_t target;

  friend bool operator==(const CayleyEdge&, const CayleyEdge&) = default;
};

/// The ball B_N of the Cayley graph. Vertices at depth N form the frontier and
/// carry no out-edges; every other vertex has exactly one out-edge per generator.
class CayleyBall {
 public:
  CayleyBall() = default;
  explicit CayleyBall(const IfsSystem& system, std::size_t vertex_cap = kDefaultVertexCap)
      : dim_(system.dim()), vertex_cap_(vertex_cap) {
    for (const auto& g : system.generators()) generators_.push_back(g.map);
  }

  /// Adds layers until the radius reaches `n` (or the semigroup closes).
  void grow_to(int n);

  int radius() const { return radius_; }
  int complete_to() const { return radius_; }
  bool closed() const { return closed_; }
  std::size_t generator_count() const { return generators_.size(); }
  std::size_t size() const { return elements_.size(); }
  const std::vector<SemigroupElement>& elements() const { return elements_; }
  const SemigroupElement& operator[](std::uint32_t id) const { return elements_.at(id); }

  bool is_frontier(std::uint32_t v) const { return !closed_ && elements_.at(v).depth == radius_; }

  /// Target of the edge (v, f), or kNoVertex for frontier vertices.
  std::uint32_t successor(std::uint32_t v, std::size_t f) const {
    const std::size_t slot = static_cast<std::size_t>(v) * generators_.size() + f;
    return slot < succ_.size() ? succ_[slot] : kNoVertex;
  }

  /// The vertex reached from the (implicit) identity root along generator f.
  std::uint32_t generator_vertex(std::size_t f) const { return roots_.at(f); }

  std::vector<std::uint32_t> frontier() const {
    std::vector<std::uint32_t> out;
    for (const auto& e : elements_)
      if (is_frontier(e.id)) out.push_back(e.id);
    return out;
  }

  std::vector<CayleyEdge> edges() const {
    std::vector<CayleyEdge> out;
    for (const auto& e : elements_) {
      for (std::uint32_t f = 0; f < generators_.size(); ++f) {
        const std::uint32_t t = successor(e.id, f);
        if (t != kNoVertex) out.push_back({e.id, f, t});
      }
    }
    return out;
  }

  std::optional<std::uint32_t> find(const AffineMap& m) const { return lookup(m, m.hash()); }

  /// Number of vertices with depth <= d.
  std::size_t count_up_to(int d) const {
    std::size_t n = 0;
    for (const auto& e : elements_) n += e.depth <= d;
    return n;
  }

 private:
  std::optional<std::uint32_t> lookup(const AffineMap& m, std::size_t h) const {
    auto [lo, hi] = index_.equal_range(h);
    for (auto it = lo; it != hi; ++it)
      if (elements_[it->second].map == m) return it->second;
    return std::nullopt;
  }

  std::uint32_t insert(AffineMap m, Word w, int depth) {
    const std::size_t h = m.hash();
    if (auto found = lookup(m, h)) return *found;
    if (elements_.size() >= vertex_cap_) {
      throw TruncationError("Cayley ball exceeded vertex cap of " + std::to_string(vertex_cap_) + " at depth " +
                                std::to_string(depth),
                            depth - 1);
    }
    const auto id = static_cast<std::uint32_t>(elements_.size());
    elements_.push_back({std::move(m), std::move(w), depth, id});
    index_.emplace(h, id);
    return id;
  }

  std::size_t dim_ = 0;
  std::size_t vertex_cap_ = kDefaultVertexCap;
  std::vector<AffineMap> generators_;
  std::vector<SemigroupElement> elements_;
  std::unordered_multimap<std::size_t, std::uint32_t> index_;
  std::vector<std::uint32_t> succ_;
  std::vector<std::uint32_t> roots_;
  int radius_ = 0;
  bool closed_ = false;
};

inline void CayleyBall::grow_to(int n) {
  if (n < 1) throw std::invalid_argument("ball radius must be >= 1");
  const std::size_t k = generators_.size();
  if (radius_ == 0) {
    for (std::uint32_t f = 0; f < k; ++f) roots_.push_back(insert(generators_[f], Word{f}, 1));
    radius_ = 1;
  }
  while (radius_ < n && !closed_) {
    // Expand the current frontier in id order; ids within a layer are in
    // lexicographic word order, so first discovery yields the least word.
    const std::size_t layer_begin = [&] {
      std::size_t i = elements_.size();
      while (i > 0 && elements_[i - 1].depth == radius_) --i;
      return i;
    }();
    const std::size_t layer_end = elements_.size();
    succ_.resize(layer_end * k, kNoVertex);
    for (std::size_t v = layer_begin; v < layer_end; ++v) {
      for (std::uint32_t f = 0; f < k; ++f) {
        AffineMap product = compose(elements_[v].map, generators_[f]);
        Word w = elements_[v].word;
        w.push_back(f);
        const std::uint32_t t = insert(std::move(product), std::move(w), radius_ + 1);
        succ_[v * k + f] = t;
      }
    }
    if (elements_.size() == layer_end) {
      closed_ = true;
    } else {
      ++radius_;
    }
  }
  if (closed_) radius_ = std::max(radius_, n);
}

/// Breadth-first ball of radius n. Throws TruncationError if the vertex cap is hit.
inline CayleyBall build_ball(const IfsSystem& system, int n, std::size_t vertex_cap = kDefaultVertexCap) {
  CayleyBall ball(system, vertex_cap);
  ball.grow_to(n);
  return ball;
}

struct Idempotent {
  std::uint32_t vertex;
  Point value;
};

/// Constant maps in the ball; for IFS semigroups these are exactly the
/// idempotents and the dead-ends.
inline std::vector<Idempotent> find_idempotents(const CayleyBall& ball) {
  std::vector<Idempotent> out;
  for (const auto& e : ball.elements())
    if (is_constant(e.map)) out.push_back({e.id, e.map.translation});
  return out;
}

inline bool is_dead_end(const CayleyBall& ball, std::uint32_t v) {
  if (ball.is_frontier(v)) throw UndeterminedError("vertex " + std::to_string(v) + " is on the frontier");
  for (std::size_t f = 0; f < ball.generator_count(); ++f)
    if (ball.successor(v, f) != v) return false;
  return true;
}

/// Result of checking constant <=> idempotent <=> dead-end on every
/// non-frontier vertex of B_depth.
struct DeadEndSurvey {
  int depth = 0;
  std::size_t checked = 0;
  std::vector<Word> violations;
};

namespace detail {

inline std::string exact_key(const AffineMap& m) {
  std::string k;
  for (const auto& x : m.linear.entries()) (k += x.to_dsl()) += ',';
  for (const auto& x : m.translation) (k += x.to_dsl()) += ',';
  return k;
}

}  // namespace detail

/// Same check as over a CayleyBall of radius `depth`, without building it.
/// The non-frontier vertices are exactly the elements of B_{depth-1}, and
/// whether v is a dead-end only needs the products v o f, so one layer of
/// maps plus the exact keys seen so far is enough.
inline DeadEndSurvey survey_dead_ends(const IfsSystem& system, int depth) {
  if (depth < 2) throw std::invalid_argument("survey depth must be >= 2");
  DeadEndSurvey out;
  out.depth = depth;
  std::unordered_set<std::string> seen;
  std::vector<std::pair<AffineMap, Word>> layer;

  auto visit = [&](const AffineMap& m, const Word& w) {
    ++out.checked;
    const bool constant = is_constant(m);
    const bool idempotent = compose(m, m) == m;
    bool dead = true;
    for (std::size_t f = 0; f < system.size() && dead; ++f) dead = compose(m, system.map(f)) == m;
    if (constant != idempotent || constant != dead) out.violations.push_back(w);
  };

  for (std::uint32_t f = 0; f < system.size(); ++f) {
    if (!seen.insert(detail::exact_key(system.map(f))).second) continue;
    layer.push_back({system.map(f), Word{f}});
    visit(system.map(f), layer.back().second);
  }
  for (int d = 2; d < depth && !layer.empty(); ++d) {
    const bool keep = d + 1 < depth;
    std::vector<std::pair<AffineMap, Word>> next;
    for (const auto& [m, w] : layer) {
      for (std::uint32_t f = 0; f < system.size(); ++f) {
        AffineMap p = compose(m, system.map(f));
        if (!seen.insert(detail::exact_key(p)).second) continue;
        Word pw = w;
        pw.push_back(f);
        visit(p, pw);
        if (keep) next.push_back({std::move(p), std::move(pw)});
      }
    }
    layer = std::move(next);
  }
  return out;
}

struct IdempotentEvidence {
  enum class Kind { CertifiedNone, FoundAtDepth, UnknownUpTo };
  Kind kind = Kind::UnknownUpTo;
  int depth = 0;
  Word witness;
};

inline const char* to_string(IdempotentEvidence::Kind k) {
  switch (k) {
    case IdempotentEvidence::Kind::CertifiedNone:
      return "CertifiedNone";
    case IdempotentEvidence::Kind::FoundAtDepth:
      return "FoundAtDepth";
    case IdempotentEvidence::Kind::UnknownUpTo:
      return "UnknownUpTo";
  }
  return "?";
}

namespace detail {

/// The matrix divided by its first nonzero entry; zero stays zero.
inline Matrix projective_normal(Matrix m) {
  for (const auto& x : m.entries()) {
    if (x.is_zero()) continue;
    const QuadScalar pivot = x;
    Matrix out(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) = m(i, j) / pivot;
    return out;
  }
  return m;
}

}  // namespace detail

/// A word is constant exactly when the product of its linear parts vanishes,
/// and vanishing does not depend on scalar factors. So the products are
/// explored up to scaling, breadth first: if that set closes without reaching
/// zero no product is constant; if zero is reached the first word doing so is
/// a shortest constant word. Falls back to a plain ball search when the set
/// outgrows `state_cap`.
inline IdempotentEvidence certify_no_idempotents(const IfsSystem& system, int search_depth = 8,
                                                 std::size_t vertex_cap = kDefaultVertexCap,
                                                 std::size_t state_cap = 100'000) {
  bool all_invertible = true;
  for (const auto& g : system.generators()) all_invertible = all_invertible && !g.map.linear.det().is_zero();
  if (all_invertible) return {IdempotentEvidence::Kind::CertifiedNone, 0, {}};

  struct State {
    Matrix m;
    Word word;
  };
  std::vector<Matrix> gens;
  for (const auto& g : system.generators()) gens.push_back(detail::projective_normal(g.map.linear));
  std::vector<State> states;
  std::unordered_multimap<std::size_t, std::uint32_t> index;
  auto visit = [&](Matrix m, Word w) -> bool {
    const std::size_t h = m.hash();
    auto [lo, hi] = index.equal_range(h);
    for (auto it = lo; it != hi; ++it)
      if (states[it->second].m == m) return false;
    index.emplace(h, static_cast<std::uint32_t>(states.size()));
    states.push_back({std::move(m), std::move(w)});
    return true;
  };
  bool overflow = false;
  for (std::uint32_t f = 0; f < gens.size(); ++f) visit(gens[f], Word{f});
  for (std::size_t i = 0; i < states.size() && !overflow; ++i) {
    if (states[i].m.is_zero()) {
      const int depth = static_cast<int>(states[i].word.size());
      return {IdempotentEvidence::Kind::FoundAtDepth, depth, states[i].word};
    }
    for (std::uint32_t f = 0; f < gens.size(); ++f) {
      Word w = states[i].word;
      w.push_back(f);
      visit(detail::projective_normal(states[i].m * gens[f]), std::move(w));
      if (states.size() > state_cap) {
        overflow = true;
        break;
      }
    }
  }
  if (!overflow) return {IdempotentEvidence::Kind::CertifiedNone, 0, {}};

  CayleyBall ball(system, vertex_cap);
  for (int d = 1; d <= search_depth; ++d) {
    ball.grow_to(d);
    for (const auto& e : ball.elements()) {
      if (e.depth == d && is_constant(e.map)) return {IdempotentEvidence::Kind::FoundAtDepth, d, e.word};
    }
    if (ball.closed()) break;
  }
  return {IdempotentEvidence::Kind::UnknownUpTo, search_depth, {}};
}

namespace detail {

inline constexpr std::uint32_t kRoot = kNoVertex - 1;

inline std::uint32_t step(const CayleyBall& b, std::uint32_t v, std::size_t f) {
  return v == kRoot ? b.generator_vertex(f) : b.successor(v, f);
}

inline std::vector<bool> loop_set(const CayleyBall& b, std::uint32_t v) {
  std::vector<bool> loops(b.generator_count(), false);
  if (v == kRoot) return loops;
  for (std::size_t f = 0; f < b.generator_count(); ++f) loops[f] = b.successor(v, f) == v;
  return loops;
}

inline void check_iso_preconditions(const CayleyBall& b1, const CayleyBall& b2, int depth) {
  if (b1.generator_count() != b2.generator_count())
    throw std::invalid_argument("balls have different generator counts");
  if ((!b1.closed() && b1.radius() < depth + 1) || (!b2.closed() && b2.radius() < depth + 1))
    throw std::invalid_argument("ball radius must be at least depth + 1");
}

struct PairHash {
  std::size_t operator()(const std::pair<std::uint32_t, std::uint32_t>& p) const {
    return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
  }
};

}  // namespace detail

/// Label-preserving bisimilarity of the two rooted graphs up to `depth` steps
/// from the root. Related vertices must agree on which generators loop back to
/// them, which is the only local structure a deterministic complete labeled
/// graph exposes to a bisimulation.
inline bool balls_isomorphic(const CayleyBall& b1, const CayleyBall& b2, int depth) {
  detail::check_iso_preconditions(b1, b2, depth);
  using Pair = std::pair<std::uint32_t, std::uint32_t>;
  std::unordered_set<Pair, detail::PairHash> seen;
  std::deque<std::pair<Pair, int>> queue;
  queue.push_back({{detail::kRoot, detail::kRoot}, 0});
  seen.insert({detail::kRoot, detail::kRoot});
  while (!queue.empty()) {
    const auto [pair, steps] = queue.front();
    queue.pop_front();
    if (detail::loop_set(b1, pair.first) != detail::loop_set(b2, pair.second)) return false;
    if (steps == depth) continue;
    for (std::size_t f = 0; f < b1.generator_count(); ++f) {
      const Pair next{detail::step(b1, pair.first, f), detail::step(b2, pair.second, f)};
      if (seen.insert(next).second) queue.push_back({next, steps + 1});
    }
  }
  return true;
}

/// Stricter check: the correspondence built from the roots must be a
/// bijection between the explored vertex sets.
inline bool balls_strictly_isomorphic(const CayleyBall& b1, const CayleyBall& b2, int depth) {
  detail::check_iso_preconditions(b1, b2, depth);
  std::unordered_map<std::uint32_t, std::uint32_t> fwd;
  std::unordered_map<std::uint32_t, std::uint32_t> bwd;
  std::deque<std::pair<std::uint32_t, int>> queue;
  fwd[detail::kRoot] = detail::kRoot;
  bwd[detail::kRoot] = detail::kRoot;
  queue.push_back({detail::kRoot, 0});
  while (!queue.empty()) {
    const auto [x, steps] = queue.front();
    queue.pop_front();
    if (steps == depth) continue;
    const std::uint32_t y = fwd.at(x);
    for (std::size_t f = 0; f < b1.generator_count(); ++f) {
      const std::uint32_t x2 = detail::step(b1, x, f);
      const std::uint32_t y2 = detail::step(b2, y, f);
      auto fi = fwd.find(x2);
      auto bi = bwd.find(y2);
      if (fi == fwd.end() && bi == bwd.end()) {
        fwd[x2] = y2;
        bwd[y2] = x2;
        queue.push_back({x2, steps + 1});
      } else if (fi == fwd.end() || bi == bwd.end() || fi->second != y2 || bi->second != x2) {
        return false;
      }
    }
  }
  return true;
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

/// Graphviz rendering. Nodes appear in vertex-id order; dead-ends are drawn as
/// filled double circles, frontier vertices dashed.
inline std::string to_dot(const CayleyBall& ball, const IfsSystem& system) {
  std::ostringstream os;
  os << "digraph cayley {\n";
  os << "  node [shape=circle];\n";
  for (const auto& e : ball.elements()) {
    os << "  v" << e.id << " [label=\"" << dot_escape(format_word(system, e.word)) << "\"";
    if (ball.is_frontier(e.id)) {
      os << ", style=dashed";
    } else if (is_dead_end(ball, e.id)) {
      os << ", shape=doublecircle, style=filled, fillcolor=gray80, deadend=true";
    }
    os << "];\n";
  }
  for (const auto& edge : ball.edges()) {
    os << "  v" << edge.source << " -> v" << edge.target << " [label=\"" << dot_escape(system.name(edge.generator))
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ifsends
