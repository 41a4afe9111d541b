#pragma once

// Ends of the Cayley graph (finite-ball estimates), the link graph of the
// generators, and the one-end certificate built from the two.

#include "ifsends/semigroup.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

namespace ifsends {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

struct LinkEdge {
  std::uint32_t f;
  std::uint32_t g;
  Word u;  // f o u == g o v
  Word v;

  friend bool operator==(const LinkEdge&, const LinkEdge&) = default;
};

struct LinkGraph {
  std::size_t generator_count = 0;
  int depth = 0;
  bool depth_limited = false;  // the ball was truncated before `depth`
  std::vector<LinkEdge> edges;
  /// Generators equal as maps share the representative of the lowest index.
  std::vector<std::uint32_t> representative;
};

namespace detail {

inline bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline bool witness_less(const Word& u1, const Word& v1, const Word& u2, const Word& v2) {
  if (u1.size() + v1.size() != u2.size() + v2.size()) return u1.size() + v1.size() < u2.size() + v2.size();
  if (u1 != u2) return shortlex_less(u1, u2);
  return shortlex_less(v1, v2);
}

}  // namespace detail

/// Link graph from the ball B_depth: f and g are joined when f o u == g o v for
/// some u, v in the ball. A missing edge only means no witness up to `depth`.
inline LinkGraph build_link_graph(const IfsSystem& system, const CayleyBall& ball, int depth) {
  const std::size_t k = system.size();
  LinkGraph lg;
  lg.generator_count = k;
  lg.depth = depth;
  lg.depth_limited = !ball.closed() && ball.radius() < depth;
  lg.representative.resize(k);
  for (std::uint32_t f = 0; f < k; ++f) {
    lg.representative[f] = f;
    for (std::uint32_t g = 0; g < f; ++g) {
      if (system.map(g) == system.map(f)) {
        lg.representative[f] = lg.representative[g];
        break;
      }
    }
  }

  std::vector<std::uint32_t> members;
  for (const auto& e : ball.elements())
    if (e.depth <= depth) members.push_back(e.id);

  // Only hashes of the products g o v are kept; candidate matches are
  // confirmed by recomputing the product exactly.
  std::vector<std::unordered_multimap<std::size_t, std::uint32_t>> keyed(k);
  for (std::uint32_t g = 0; g < k; ++g) {
    if (lg.representative[g] != g) continue;
    keyed[g].reserve(members.size());
    for (std::uint32_t j = 0; j < members.size(); ++j)
      keyed[g].emplace(compose(system.map(g), ball[members[j]].map).hash(), j);
  }

  for (std::uint32_t f = 0; f < k; ++f) {
    if (lg.representative[f] != f) continue;
    std::map<std::uint32_t, std::pair<Word, Word>> best;
    for (std::uint32_t i = 0; i < members.size(); ++i) {
      const AffineMap left = compose(system.map(f), ball[members[i]].map);
      const std::size_t h = left.hash();
      for (std::uint32_t g = f + 1; g < k; ++g) {
        if (lg.representative[g] != g) continue;
        auto [lo, hi] = keyed[g].equal_range(h);
        for (auto it = lo; it != hi; ++it) {
          if (compose(system.map(g), ball[members[it->second]].map) != left) continue;
          const Word& u = ball[members[i]].word;
          const Word& v = ball[members[it->second]].word;
          auto found = best.find(g);
          if (found == best.end()) {
            best.emplace(g, std::make_pair(u, v));
          } else if (detail::witness_less(u, v, found->second.first, found->second.second)) {
            found->second = {u, v};
          }
        }
      }
    }
    for (auto& [g, w] : best) lg.edges.push_back({f, g, std::move(w.first), std::move(w.second)});
  }
  return lg;
}

inline LinkGraph build_link_graph(const IfsSystem& system, int depth, std::size_t vertex_cap = kDefaultVertexCap) {
  if (depth < 1) throw std::invalid_argument("link depth must be >= 1");
  CayleyBall ball(system, vertex_cap);
  bool truncated = false;
  try {
    ball.grow_to(depth);
  } catch (const TruncationError&) {
    truncated = true;
  }
  LinkGraph lg = build_link_graph(system, ball, depth);
  lg.depth_limited = lg.depth_limited || truncated;
  return lg;
}

/// Connected components of the link graph, as sorted generator lists.
inline std::vector<std::vector<std::uint32_t>> link_components(const LinkGraph& lg) {
  UnionFind uf(lg.generator_count);
  for (std::uint32_t f = 0; f < lg.generator_count; ++f) uf.unite(f, lg.representative[f]);
  for (const auto& e : lg.edges) uf.unite(e.f, e.g);
  std::map<std::size_t, std::vector<std::uint32_t>> groups;
  for (std::uint32_t f = 0; f < lg.generator_count; ++f) groups[uf.find(f)].push_back(f);
  std::vector<std::vector<std::uint32_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

inline bool link_graph_connected(const LinkGraph& lg) { return link_components(lg).size() <= 1; }

/// Edges of a spanning forest, picked greedily in edge order.
inline std::vector<LinkEdge> link_spanning_tree(const LinkGraph& lg) {
  UnionFind uf(lg.generator_count);
  for (std::uint32_t f = 0; f < lg.generator_count; ++f) uf.unite(f, lg.representative[f]);
  std::vector<LinkEdge> tree;
  for (const auto& e : lg.edges)
    if (uf.unite(e.f, e.g)) tree.push_back(e);
  return tree;
}

/// Number of components of (B_horizon minus B_k), taken undirected, that reach
/// depth `horizon`. Only edges out of vertices of depth < horizon are used, so
/// the result matches a ball built with radius exactly `horizon`.
inline int estimate_ends(const CayleyBall& ball, int k, int horizon) {
  if (horizon > ball.radius()) throw std::invalid_argument("horizon exceeds ball radius");
  if (k >= horizon - 1) throw std::invalid_argument("estimate_ends requires k < N - 1");
  const auto& el = ball.elements();
  UnionFind uf(el.size());
  for (const auto& e : el) {
    if (e.depth <= k || e.depth >= horizon) continue;
    for (std::size_t f = 0; f < ball.generator_count(); ++f) {
      const std::uint32_t t = ball.successor(e.id, f);
      if (t == kNoVertex) continue;
      const int td = el[t].depth;
      if (td > k && td <= horizon) uf.unite(e.id, t);
    }
  }
  std::vector<std::size_t> roots;
  for (const auto& e : el)
    if (e.depth == horizon) roots.push_back(uf.find(e.id));
  std::sort(roots.begin(), roots.end());
  return static_cast<int>(std::unique(roots.begin(), roots.end()) - roots.begin());
}

inline int estimate_ends(const CayleyBall& ball, int k) { return estimate_ends(ball, k, ball.radius()); }

struct EndsSample {
  int k;
  int n;
  int count;

  friend bool operator==(const EndsSample&, const EndsSample&) = default;
};

struct EndsEstimate {
  enum class Kind { ZeroEnds, Exactly, GrowingUnbounded, Inconclusive };
  std::vector<EndsSample> samples;
  Kind kind = Kind::Inconclusive;
  int count = 0;  // meaningful for Exactly

  bool is_exactly(int n) const { return kind == Kind::Exactly && count == n; }
};

inline std::string to_string(const EndsEstimate& e) {
  switch (e.kind) {
    case EndsEstimate::Kind::ZeroEnds:
      return "ZeroEnds";
    case EndsEstimate::Kind::Exactly:
      return "Exactly(" + std::to_string(e.count) + ")";
    case EndsEstimate::Kind::GrowingUnbounded:
      return "GrowingUnbounded";
    case EndsEstimate::Kind::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

/// Samples k = 1..k_max at N = k + margin on a ball that must reach
/// k_max + margin (or be closed).
inline EndsEstimate classify_ends(const CayleyBall& ball, int k_max, int margin) {
  if (k_max < 2 || margin < 2) throw std::invalid_argument("classify_ends requires k_max >= 2 and margin >= 2");
  EndsEstimate est;
  if (ball.closed()) {
    for (int k = 1; k <= k_max; ++k) est.samples.push_back({k, k + margin, 0});
    est.kind = EndsEstimate::Kind::ZeroEnds;
    return est;
  }
  if (ball.radius() < k_max + margin) throw std::invalid_argument("ball too small for classify_ends");
  for (int k = 1; k <= k_max; ++k) est.samples.push_back({k, k + margin, estimate_ends(ball, k, k + margin)});
  const auto& s = est.samples;
  const std::size_t m = s.size();
  if (m >= 3 && s[m - 1].count == s[m - 2].count && s[m - 2].count == s[m - 3].count) {
    est.kind = EndsEstimate::Kind::Exactly;
    est.count = s[m - 1].count;
  } else if (m >= 3 && s[m - 3].count < s[m - 2].count && s[m - 2].count < s[m - 1].count) {
    est.kind = EndsEstimate::Kind::GrowingUnbounded;
  } else {
    est.kind = EndsEstimate::Kind::Inconclusive;
  }
  return est;
}

/// Propagates TruncationError from the ball construction.
inline EndsEstimate classify_ends(const IfsSystem& system, int k_max, int margin,
                                  std::size_t vertex_cap = kDefaultVertexCap) {
  if (k_max < 2 || margin < 2) throw std::invalid_argument("classify_ends requires k_max >= 2 and margin >= 2");
  const CayleyBall ball = build_ball(system, k_max + margin, vertex_cap);
  return classify_ends(ball, k_max, margin);
}

struct OneEndCertificate {
  IdempotentEvidence evidence;
  int link_depth = 0;  // depth at which the link graph became connected
  std::vector<LinkEdge> spanning_tree;
};

struct CertificateRefusal {
  enum class Reason { IdempotentFound, IdempotentsUnknown, LinkGraphDisconnected };
  Reason reason;
  IdempotentEvidence evidence;
  int link_depth = 0;
  std::vector<std::vector<std::uint32_t>> partition;  // link components at refusal
};

using CertificateResult = std::variant<OneEndCertificate, CertificateRefusal>;

/// Certificate of one-endedness: no idempotents and a connected link graph.
/// Link depths 1..depth are tried in turn on the given ball, so the witnesses
/// reported are the cheapest ones.
inline CertificateResult one_ended_certificate(const IfsSystem& system, const CayleyBall& ball, int depth,
                                               const IdempotentEvidence& evidence) {
  if (evidence.kind == IdempotentEvidence::Kind::FoundAtDepth)
    return CertificateRefusal{CertificateRefusal::Reason::IdempotentFound, evidence, 0, {}};
  if (evidence.kind == IdempotentEvidence::Kind::UnknownUpTo)
    return CertificateRefusal{CertificateRefusal::Reason::IdempotentsUnknown, evidence, 0, {}};
  LinkGraph lg;
  const int reach = ball.closed() ? depth : std::min(depth, ball.radius());
  for (int d = 1; d <= reach; ++d) {
    lg = build_link_graph(system, ball, d);
    if (link_graph_connected(lg)) return OneEndCertificate{evidence, d, link_spanning_tree(lg)};
  }
  return CertificateRefusal{CertificateRefusal::Reason::LinkGraphDisconnected, evidence, lg.depth,
                            link_components(lg)};
}

inline CertificateResult one_ended_certificate(const IfsSystem& system, int depth,
                                               std::size_t vertex_cap = kDefaultVertexCap) {
  if (depth < 1) throw std::invalid_argument("link depth must be >= 1");
  const IdempotentEvidence evidence = certify_no_idempotents(system, depth, vertex_cap);
  if (evidence.kind != IdempotentEvidence::Kind::CertifiedNone) return one_ended_certificate(system, {}, depth, evidence);
  CayleyBall ball(system, vertex_cap);
  int reached = 0;
  for (int d = 1; d <= depth; ++d) {
    try {
      ball.grow_to(d);
    } catch (const TruncationError&) {
      break;
    }
    reached = d;
    const LinkGraph lg = build_link_graph(system, ball, d);
    if (link_graph_connected(lg)) return OneEndCertificate{evidence, d, link_spanning_tree(lg)};
    if (ball.closed()) break;
  }
  const LinkGraph lg = build_link_graph(system, ball, std::max(reached, 1));
  return CertificateRefusal{CertificateRefusal::Reason::LinkGraphDisconnected, evidence, lg.depth,
                            link_components(lg)};
}

inline std::string to_dot(const LinkGraph& lg, const IfsSystem& system) {
  std::ostringstream os;
  os << "graph link {\n";
  for (std::uint32_t f = 0; f < lg.generator_count; ++f)
    os << "  g" << f << " [label=\"" << dot_escape(system.name(f)) << "\"];\n";
  for (const auto& e : lg.edges) {
    os << "  g" << e.f << " -- g" << e.g << " [label=\"" << dot_escape(system.name(e.f)) << "·"
       << dot_escape(format_word(system, e.u)) << " = " << dot_escape(system.name(e.g)) << "·"
       << dot_escape(format_word(system, e.v)) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ifsends
