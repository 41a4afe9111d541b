#include "ifsends/ends.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

using namespace ifsends;
using ifsends::testing::all_words;
using ifsends::testing::load_fixture;

namespace {

// Ends count from an explicitly enumerated graph: vertices are the distinct
// maps of words of length <= n with their minimal word length as depth, edges
// are right compositions, and the deleted ball is everything at depth <= k.
int oracle_ends(const IfsSystem& s, int k, int n) {
  std::vector<AffineMap> maps;
  std::vector<int> depth;
  for (const auto& w : all_words(s.size(), n)) {
    const AffineMap m = word_evaluate(s, w);
    if (std::find(maps.begin(), maps.end(), m) == maps.end()) {
      maps.push_back(m);
      depth.push_back(static_cast<int>(w.size()));
    }
  }
  std::vector<std::size_t> comp(maps.size());
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](std::size_t x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (depth[i] <= k || depth[i] >= n) continue;
    for (std::size_t f = 0; f < s.size(); ++f) {
      const auto it = std::find(maps.begin(), maps.end(), compose(maps[i], s.map(f)));
      const auto j = static_cast<std::size_t>(it - maps.begin());
      if (depth[j] > k) comp[find(i)] = find(j);
    }
  }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < maps.size(); ++i)
    if (depth[i] == n) roots.insert(find(i));
  return static_cast<int>(roots.size());
}

struct Witness {
  Word u, v;
};

// Cheapest f u = g v over all words of length <= d, by total length then
// shortlex u then shortlex v.
std::optional<Witness> oracle_witness(const IfsSystem& s, std::uint32_t f, std::uint32_t g, int d) {
  std::optional<Witness> best;
  const auto words = all_words(s.size(), d);
  for (const auto& u : words) {
    const AffineMap left = compose(s.map(f), word_evaluate(s, u));
    for (const auto& v : words) {
      if (compose(s.map(g), word_evaluate(s, v)) != left) continue;
      if (!best || detail::witness_less(u, v, best->u, best->v)) best = Witness{u, v};
    }
  }
  return best;
}

}  // namespace

TEST(UnionFind, MergesAndCounts) {
  UnionFind uf(6);
  uf.unite(0, 1);
  uf.unite(2, 3);
  uf.unite(1, 3);
  EXPECT_EQ(uf.find(0), uf.find(2));
  EXPECT_NE(uf.find(0), uf.find(4));
  EXPECT_NE(uf.find(4), uf.find(5));
}

TEST(Ends, BinaryTreeHasExponentiallyManyPieces) {
  const CayleyBall ball = build_ball(load_fixture("koch2"), 10);
  for (int k = 1; k <= 7; ++k) EXPECT_EQ(estimate_ends(ball, k, k + 3), 1 << (k + 1)) << k;
  const EndsEstimate est = classify_ends(ball, 6, 3);
  EXPECT_EQ(est.kind, EndsEstimate::Kind::GrowingUnbounded);
  ASSERT_EQ(est.samples.size(), 6u);
  EXPECT_EQ(est.samples[0], (EndsSample{1, 4, 4}));
}

TEST(Ends, AgreesWithExplicitGraph) {
  for (const char* name : {"ex21", "ex19_abc", "ex19_abd", "ex14_halfconst", "ex14_projections", "koch3"}) {
    const IfsSystem s = load_fixture(name);
    const int n = s.size() > 2 ? 6 : 8;
    const CayleyBall ball = build_ball(s, n);
    for (int k = 1; k + 2 <= n; ++k)
      for (int h = k + 2; h <= n; ++h) EXPECT_EQ(estimate_ends(ball, k, h), oracle_ends(s, k, h)) << name << " " << k << " " << h;
  }
}

TEST(Ends, ClassifiesTheCorpus) {
  EXPECT_TRUE(classify_ends(load_fixture("ex21"), 6, 3).is_exactly(2));
  EXPECT_TRUE(classify_ends(load_fixture("ex14_projections"), 6, 3).is_exactly(2));
  EXPECT_TRUE(classify_ends(load_fixture("ex14_halfconst"), 6, 3).is_exactly(1));
  EXPECT_TRUE(classify_ends(load_fixture("koch3"), 6, 3).is_exactly(1));
  EXPECT_EQ(classify_ends(load_fixture("crooked_koch4"), 4, 3).kind, EndsEstimate::Kind::GrowingUnbounded);
}

TEST(Ends, ClosedSemigroupHasNoEnds) {
  const IfsSystem s = parse("dim 1\nradicand 0\nmap a : [0] ; [0]\nmap b : [0] ; [1]\n").system;
  EXPECT_EQ(classify_ends(s, 3, 2).kind, EndsEstimate::Kind::ZeroEnds);
}

TEST(Ends, RejectsBadParameters) {
  const CayleyBall ball = build_ball(load_fixture("koch2"), 5);
  EXPECT_THROW(classify_ends(ball, 1, 3), std::invalid_argument);
  EXPECT_THROW(classify_ends(ball, 4, 3), std::invalid_argument);
  EXPECT_THROW(estimate_ends(ball, 4, 5), std::invalid_argument);
  EXPECT_THROW(estimate_ends(ball, 1, 6), std::invalid_argument);
}

TEST(LinkGraph, WitnessesMatchExhaustiveSearch) {
  for (const char* name : {"koch3", "ex14_projections", "ex21", "ex19_abc", "sierpinski5"}) {
    const IfsSystem s = load_fixture(name);
    const int d = s.size() > 3 ? 2 : 3;
    const LinkGraph lg = build_link_graph(s, d);
    for (std::uint32_t f = 0; f < s.size(); ++f) {
      for (std::uint32_t g = f + 1; g < s.size(); ++g) {
        const auto want = oracle_witness(s, f, g, d);
        const auto it = std::find_if(lg.edges.begin(), lg.edges.end(),
                                     [&](const LinkEdge& e) { return e.f == f && e.g == g; });
        ASSERT_EQ(want.has_value(), it != lg.edges.end()) << name << " " << f << " " << g;
        if (!want) continue;
        EXPECT_EQ(it->u, want->u) << name;
        EXPECT_EQ(it->v, want->v) << name;
        EXPECT_EQ(compose(s.map(f), word_evaluate(s, it->u)), compose(s.map(g), word_evaluate(s, it->v)));
      }
    }
  }
}

TEST(LinkGraph, KochWithThirdMap) {
  const IfsSystem s = load_fixture("koch3");
  const LinkGraph lg = build_link_graph(s, 2);
  ASSERT_EQ(lg.edges.size(), 2u);
  // a.ab = c.a and b.ba = c.b; a and b are not linked directly.
  EXPECT_EQ(lg.edges[0], (LinkEdge{0, 2, {0, 1}, {0}}));
  EXPECT_EQ(lg.edges[1], (LinkEdge{1, 2, {1, 0}, {1}}));
  EXPECT_TRUE(link_graph_connected(lg));
  EXPECT_EQ(link_spanning_tree(lg).size(), 2u);
}

TEST(LinkGraph, EqualGeneratorsCollapse) {
  const IfsSystem s = parse("dim 1\nradicand 0\nmap a : [1/2] ; [0]\nmap b : [1/2] ; [0]\nmap c : [1/3] ; [1]\n").system;
  const LinkGraph lg = build_link_graph(s, 3);
  EXPECT_EQ(lg.representative, (std::vector<std::uint32_t>{0, 0, 2}));
}

TEST(LinkGraph, DisconnectedPieces) {
  const LinkGraph koch2 = build_link_graph(load_fixture("koch2"), 6);
  EXPECT_TRUE(koch2.edges.empty());
  EXPECT_EQ(link_components(koch2), (std::vector<std::vector<std::uint32_t>>{{0}, {1}}));
  const LinkGraph half = build_link_graph(load_fixture("ex14_halfconst"), 8);
  EXPECT_TRUE(half.edges.empty());
  const LinkGraph proj = build_link_graph(load_fixture("ex14_projections"), 2);
  ASSERT_EQ(proj.edges.size(), 1u);
  EXPECT_EQ(proj.edges[0], (LinkEdge{0, 1, {1}, {0}}));
}

TEST(Certificate, IssuedForOneEndedSystems) {
  struct Case {
    const char* name;
    int depth;
    std::size_t tree_edges;
  };
  for (const Case& c : {Case{"koch3", 6, 2}, Case{"sierpinski5", 6, 4}, Case{"carpet10", 6, 9}}) {
    const IfsSystem s = load_fixture(c.name);
    const auto res = one_ended_certificate(s, c.depth);
    ASSERT_TRUE(std::holds_alternative<OneEndCertificate>(res)) << c.name;
    const auto& cert = std::get<OneEndCertificate>(res);
    EXPECT_EQ(cert.evidence.kind, IdempotentEvidence::Kind::CertifiedNone);
    EXPECT_EQ(cert.spanning_tree.size(), c.tree_edges) << c.name;
    UnionFind uf(s.size());
    for (const auto& e : cert.spanning_tree) {
      EXPECT_EQ(compose(s.map(e.f), word_evaluate(s, e.u)), compose(s.map(e.g), word_evaluate(s, e.v)));
      EXPECT_NE(uf.find(e.f), uf.find(e.g));
      uf.unite(e.f, e.g);
    }
  }
}

TEST(Certificate, RefusalReasons) {
  const auto proj = one_ended_certificate(load_fixture("ex14_projections"), 6);
  ASSERT_TRUE(std::holds_alternative<CertificateRefusal>(proj));
  EXPECT_EQ(std::get<CertificateRefusal>(proj).reason, CertificateRefusal::Reason::IdempotentFound);

  const auto koch2 = one_ended_certificate(load_fixture("koch2"), 6);
  ASSERT_TRUE(std::holds_alternative<CertificateRefusal>(koch2));
  const auto& r = std::get<CertificateRefusal>(koch2);
  EXPECT_EQ(r.reason, CertificateRefusal::Reason::LinkGraphDisconnected);
  EXPECT_EQ(r.partition, (std::vector<std::vector<std::uint32_t>>{{0}, {1}}));
}

TEST(Certificate, BallOverloadAgreesWithStandalone) {
  const IfsSystem s = load_fixture("sierpinski5");
  const CayleyBall ball = build_ball(s, 5);
  const auto a = one_ended_certificate(s, ball, 5, certify_no_idempotents(s));
  const auto b = one_ended_certificate(s, 5);
  ASSERT_TRUE(std::holds_alternative<OneEndCertificate>(a));
  ASSERT_TRUE(std::holds_alternative<OneEndCertificate>(b));
  EXPECT_EQ(std::get<OneEndCertificate>(a).link_depth, std::get<OneEndCertificate>(b).link_depth);
  EXPECT_EQ(std::get<OneEndCertificate>(a).spanning_tree, std::get<OneEndCertificate>(b).spanning_tree);
}

TEST(Dot, LinkGraphLabelsShowTheWitness) {
  const IfsSystem s = load_fixture("koch3");
  const std::string dot = to_dot(build_link_graph(s, 2), s);
  EXPECT_EQ(dot.rfind("graph link {", 0), 0u);
  EXPECT_NE(dot.find("g0 -- g2 [label=\"a·ab = c·a\"]"), std::string::npos);
  EXPECT_NE(dot.find("g1 -- g2 [label=\"b·ba = c·b\"]"), std::string::npos);
}
