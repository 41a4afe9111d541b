#pragma once

// Full analysis pipeline and its JSON report: ball, idempotents, link graph,
// ends, certificate, point cloud, epsilon-components and the set C, plus the
// cross-checks between the algebraic and the topological side.

#include "ifsends/attractor.hpp"
#include "ifsends/dsl.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ifsends {

struct AnalysisParams {
  int ball_depth = 10;
  int link_depth = 6;
  int k_max = 6;
  int margin = 3;
  int cloud_length = 10;
  std::optional<double> epsilon;
  int resolution = 512;
  std::size_t vertex_cap = kDefaultVertexCap;
  std::size_t cloud_cap = kDefaultCloudCap;
  double degeneracy_factor = 10.0;
};

class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RelationCheck {
  Relation relation;
  bool holds = false;
  AffineMap lhs_value;
  AffineMap rhs_value;
};

struct Verdicts {
  /// nondegenerate components <= ends; empty unless the ends are Exactly(n).
  std::optional<bool> thm3_bound;
  bool thm10_containment = true;
  bool thm13_consistency = true;
  bool dead_end_equivalence = true;
  bool relations = true;
};

struct AnalysisReport {
  IfsDocument document;
  AnalysisParams params;
  double epsilon = 0.0;

  CayleyBall ball;
  IdempotentEvidence evidence;
  std::vector<Idempotent> idempotents;
  std::size_t dead_end_checked = 0;
  std::vector<std::uint32_t> dead_end_violations;

  LinkGraph link;
  EndsEstimate ends;
  CertificateResult certificate;

  PointCloud cloud;
  ComponentReport components;
  std::vector<std::uint32_t> isolated;
  IdempotentImageSet C;
  std::vector<std::uint32_t> isolated_outside_C;

  std::vector<RelationCheck> relations;
  Verdicts verdicts;
  std::vector<std::string> anomalies;

  const IfsSystem& system() const { return document.system; }
  bool certificate_issued() const { return std::holds_alternative<OneEndCertificate>(certificate); }
};

inline const char* to_string(CertificateRefusal::Reason r) {
  switch (r) {
    case CertificateRefusal::Reason::IdempotentFound:
      return "IdempotentFound";
    case CertificateRefusal::Reason::IdempotentsUnknown:
      return "IdempotentsUnknown";
    case CertificateRefusal::Reason::LinkGraphDisconnected:
      return "LinkGraphDisconnected";
  }
  return "?";
}

inline std::vector<RelationCheck> check_relations(const IfsDocument& doc) {
  std::vector<RelationCheck> out;
  for (const auto& rel : doc.relations) {
    RelationCheck c;
    c.relation = rel;
    c.lhs_value = word_evaluate(doc.system, rel.lhs);
    c.rhs_value = word_evaluate(doc.system, rel.rhs);
    c.holds = c.lhs_value == c.rhs_value;
    out.push_back(std::move(c));
  }
  return out;
}

inline std::string format_map(const AffineMap& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.dim(); ++i) {
    if (i) s += "; ";
    for (std::size_t j = 0; j < f.dim(); ++j) s += (j ? ", " : "") + f.linear(i, j).to_string();
  }
  return s + "] + " + f.translation.to_string();
}

inline std::string relation_text(const IfsSystem& system, const Relation& rel) {
  return format_word(system, rel.lhs) + " = " + format_word(system, rel.rhs);
}

/// Vertices (not on the frontier) where constant, idempotent and dead-end
/// disagree.
inline std::vector<std::uint32_t> dead_end_violations(const CayleyBall& ball, std::size_t* checked = nullptr) {
  std::vector<std::uint32_t> bad;
  std::size_t n = 0;
  for (const auto& e : ball.elements()) {
    if (ball.is_frontier(e.id)) continue;
    ++n;
    const bool c = is_constant(e.map);
    const bool i = compose(e.map, e.map) == e.map;
    const bool d = is_dead_end(ball, e.id);
    if (c != i || c != d) bad.push_back(e.id);
  }
  if (checked) *checked = n;
  return bad;
}

/// max(2 * error radius, diameter / 512) with the cloud's diameter bound;
/// 1/512 for a one-point attractor.
inline double default_epsilon(const PointCloud& cloud) {
  const double eps = std::max(2.0 * cloud.error_radius, cloud.diameter_bound / 512.0);
  return eps > 0.0 ? eps : 1.0 / 512.0;
}

inline AnalysisReport analyze(const IfsDocument& doc, const AnalysisParams& params) {
  if (params.ball_depth < 1 || params.link_depth < 1 || params.cloud_length < 0)
    throw std::invalid_argument("depths must be positive");
  AnalysisReport rep;
  rep.document = doc;
  rep.params = params;
  const IfsSystem& sys = doc.system;

  rep.relations = check_relations(doc);
  for (const auto& c : rep.relations) {
    if (c.holds) continue;
    rep.verdicts.relations = false;
    rep.anomalies.push_back("relation '" + relation_text(sys, c.relation) + "' (line " +
                            std::to_string(c.relation.line) + ") fails: lhs " + format_map(c.lhs_value) +
                            ", rhs " + format_map(c.rhs_value));
  }

  const int radius = std::max({params.ball_depth, params.k_max + params.margin, params.link_depth});
  try {
    rep.ball = CayleyBall(sys, params.vertex_cap);
    rep.ball.grow_to(radius);
  } catch (const TruncationError& e) {
    throw AnalysisError("ball", e.what());
  }

  rep.evidence = certify_no_idempotents(sys, radius, params.vertex_cap);
  rep.idempotents = find_idempotents(rep.ball);
  rep.dead_end_violations = dead_end_violations(rep.ball, &rep.dead_end_checked);
  if (!rep.dead_end_violations.empty()) {
    rep.verdicts.dead_end_equivalence = false;
    for (auto v : rep.dead_end_violations)
      rep.anomalies.push_back("vertex " + format_word(sys, rep.ball[v].word) +
                              " breaks constant/idempotent/dead-end equivalence");
  }

  // Deepen only until the link graph connects; deeper witnesses add nothing.
  for (int d = 1; d <= params.link_depth; ++d) {
    rep.link = build_link_graph(sys, rep.ball, d);
    if (link_graph_connected(rep.link)) break;
  }

  try {
    rep.ends = classify_ends(rep.ball, params.k_max, params.margin);
  } catch (const std::exception& e) {
    throw AnalysisError("ends", e.what());
  }

  try {
    rep.certificate = one_ended_certificate(sys, rep.ball, params.link_depth, rep.evidence);
  } catch (const std::exception& e) {
    throw AnalysisError("certificate", e.what());
  }
  rep.verdicts.thm13_consistency = !rep.certificate_issued() || rep.ends.is_exactly(1);
  if (!rep.verdicts.thm13_consistency)
    rep.anomalies.push_back("certificate issued but ends estimate is " + to_string(rep.ends));

  try {
    CloudOptions opts;
    opts.cap = params.cloud_cap;
    rep.cloud = sample_cloud(sys, params.cloud_length, opts);
  } catch (const std::exception& e) {
    throw AnalysisError("cloud", e.what());
  }
  rep.epsilon = params.epsilon ? *params.epsilon : default_epsilon(rep.cloud);
  try {
    rep.components = count_components(rep.cloud, rep.epsilon, params.degeneracy_factor);
    rep.isolated = isolated_candidates(rep.cloud, rep.epsilon);
  } catch (const std::exception& e) {
    throw AnalysisError("components", e.what());
  }

  rep.C = idempotent_images(rep.ball);
  for (auto i : rep.isolated)
    if (!rep.C.contains(rep.cloud.points[i])) rep.isolated_outside_C.push_back(i);
  rep.verdicts.thm10_containment = rep.isolated_outside_C.empty();
  if (!rep.verdicts.thm10_containment)
    rep.anomalies.push_back(std::to_string(rep.isolated_outside_C.size()) +
                            " isolated candidates lie outside C at depth " + std::to_string(rep.C.depth));

  if (rep.ends.kind == EndsEstimate::Kind::Exactly) {
    rep.verdicts.thm3_bound = rep.components.nondegenerate_count <= static_cast<std::size_t>(rep.ends.count);
    if (!*rep.verdicts.thm3_bound)
      rep.anomalies.push_back(std::to_string(rep.components.nondegenerate_count) +
                              " nondegenerate components exceed " + to_string(rep.ends));
  }
  return rep;
}

namespace detail {

using Json = nlohmann::ordered_json;

inline Json words_json(const IfsSystem& s, const Word& w) { return format_word(s, w); }

inline Json point_json(const Point& p) {
  Json a = Json::array();
  for (const auto& x : p) a.push_back(x.to_string());
  return a;
}

inline Json float_point_json(const FloatPoint& p, std::size_t dim) {
  Json a = Json::array();
  for (std::size_t i = 0; i < dim; ++i) a.push_back(p[i]);
  return a;
}

inline Json map_json(const AffineMap& f) {
  Json m = Json::array();
  for (std::size_t i = 0; i < f.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < f.dim(); ++j) row.push_back(f.linear(i, j).to_string());
    m.push_back(row);
  }
  return Json{{"linear", m}, {"translation", point_json(f.translation)}};
}

inline Json evidence_json(const IfsSystem& s, const IdempotentEvidence& ev) {
  Json j{{"kind", to_string(ev.kind)}, {"depth", ev.depth}};
  j["witness"] = ev.witness.empty() ? Json(nullptr) : words_json(s, ev.witness);
  return j;
}

inline Json link_edge_json(const IfsSystem& s, const LinkEdge& e) {
  return Json{{"f", s.name(e.f)}, {"g", s.name(e.g)}, {"u", words_json(s, e.u)}, {"v", words_json(s, e.v)}};
}

inline Json partition_json(const IfsSystem& s, const std::vector<std::vector<std::uint32_t>>& parts) {
  Json out = Json::array();
  for (const auto& comp : parts) {
    Json c = Json::array();
    for (auto f : comp) c.push_back(s.name(f));
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const AnalysisReport& rep) {
  using detail::Json;
  const IfsSystem& s = rep.system();
  Json j;

  Json gens = Json::array();
  for (const auto& g : s.generators()) {
    Json gj{{"name", g.name}};
    gj.update(detail::map_json(g.map));
    gj["contraction_bound"] = contraction_bound(g.map);
    gj["constant"] = is_constant(g.map);
    gens.push_back(gj);
  }
  j["system"] = Json{{"dim", s.dim()},
                     {"radicand", s.radicand()},
                     {"generators", gens},
                     {"lambda", s.lambda()},
                     {"diameter_bound", s.diameter_bound()}};

  Json idem_words = Json::array();
  for (const auto& idem : rep.idempotents) {
    idem_words.push_back(
        Json{{"word", detail::words_json(s, rep.ball[idem.vertex].word)}, {"value", detail::point_json(idem.value)}});
  }
  j["idempotents"] = Json{{"evidence", detail::evidence_json(s, rep.evidence)},
                          {"ball_depth", rep.ball.radius()},
                          {"ball_size", rep.ball.size()},
                          {"ball_closed", rep.ball.closed()},
                          {"count", rep.idempotents.size()},
                          {"constants", idem_words}};

  Json samples = Json::array();
  for (const auto& smp : rep.ends.samples) samples.push_back(Json{{"k", smp.k}, {"n", smp.n}, {"count", smp.count}});
  j["ends"] = Json{{"classification", to_string(rep.ends)},
                   {"count", rep.ends.kind == EndsEstimate::Kind::Exactly ? Json(rep.ends.count) : Json(nullptr)},
                   {"k_max", rep.params.k_max},
                   {"margin", rep.params.margin},
                   {"samples", samples}};

  Json edges = Json::array();
  for (const auto& e : rep.link.edges) edges.push_back(detail::link_edge_json(s, e));
  j["link_graph"] = Json{{"depth", rep.link.depth},
                         {"depth_limited", rep.link.depth_limited},
                         {"connected", link_graph_connected(rep.link)},
                         {"edges", edges},
                         {"components", detail::partition_json(s, link_components(rep.link))}};

  if (const auto* cert = std::get_if<OneEndCertificate>(&rep.certificate)) {
    Json tree = Json::array();
    for (const auto& e : cert->spanning_tree) tree.push_back(detail::link_edge_json(s, e));
    j["certificate"] = Json{{"idempotents", detail::evidence_json(s, cert->evidence)},
                            {"link_depth", cert->link_depth},
                            {"spanning_tree", tree}};
  } else {
    j["certificate"] = nullptr;
  }

  Json comps = Json::array();
  for (const auto& c : rep.components.components) {
    comps.push_back(Json{{"size", c.size},
                         {"diameter", c.diameter},
                         {"bbox_min", detail::float_point_json(c.bbox_min, s.dim())},
                         {"bbox_max", detail::float_point_json(c.bbox_max, s.dim())}});
  }
  Json isolated = Json::array();
  for (auto i : rep.isolated)
    isolated.push_back(Json{{"point", detail::point_json(rep.cloud.points[i])},
                            {"word", detail::words_json(s, rep.cloud.word_of(i))},
                            {"in_C", rep.C.contains(rep.cloud.points[i])}});
  j["components"] = Json{{"cloud_length", rep.cloud.word_length},
                         {"cloud_size", rep.cloud.size()},
                         {"error_radius", rep.cloud.error_radius},
                         {"nominal_error_radius", rep.cloud.nominal_error_radius},
                         {"epsilon", rep.components.epsilon},
                         {"degeneracy_threshold", rep.components.degeneracy_threshold},
                         {"component_count", rep.components.component_count},
                         {"nondegenerate_count", rep.components.nondegenerate_count},
                         {"single_point", rep.components.single_point},
                         {"components", comps},
                         {"isolated_candidates", isolated}};

  Json cvals = Json::array();
  for (const auto& p : rep.C.values) cvals.push_back(detail::point_json(p));
  j["C"] = Json{{"depth", rep.C.depth}, {"values", cvals}};

  Json rels = Json::array();
  for (const auto& c : rep.relations)
    rels.push_back(Json{{"relation", relation_text(s, c.relation)}, {"holds", c.holds}});
  Json verdicts;
  verdicts["thm3_bound"] = Json{
      {"holds", rep.verdicts.thm3_bound ? Json(*rep.verdicts.thm3_bound) : Json(nullptr)},
      {"nondegenerate_count", rep.components.nondegenerate_count},
      {"ends", to_string(rep.ends)},
      {"cloud_length", rep.cloud.word_length},
      {"epsilon", rep.epsilon},
      {"ball_depth", rep.ball.radius()}};
  verdicts["thm10_containment"] = Json{{"holds", rep.verdicts.thm10_containment},
                                       {"isolated_candidates", rep.isolated.size()},
                                       {"outside_C", rep.isolated_outside_C.size()},
                                       {"C_depth", rep.C.depth},
                                       {"cloud_length", rep.cloud.word_length},
                                       {"epsilon", rep.epsilon}};
  Json consistency{{"holds", rep.verdicts.thm13_consistency},
             {"certificate_issued", rep.certificate_issued()},
             {"ends", to_string(rep.ends)},
             {"link_depth", rep.params.link_depth}};
  if (const auto* refusal = std::get_if<CertificateRefusal>(&rep.certificate)) {
    consistency["refusal"] = to_string(refusal->reason);
    consistency["refusal_partition"] = detail::partition_json(s, refusal->partition);
  }
  verdicts["thm13_consistency"] = consistency;
  verdicts["dead_end_equivalence"] = Json{{"holds", rep.verdicts.dead_end_equivalence},
                                          {"vertices_checked", rep.dead_end_checked},
                                          {"violations", rep.dead_end_violations.size()},
                                          {"ball_depth", rep.ball.radius()}};
  verdicts["relations"] = Json{{"holds", rep.verdicts.relations}, {"checks", rels}};
  j["verdicts"] = verdicts;

  j["anomalies"] = rep.anomalies;

  const auto& p = rep.params;
  j["params"] = Json{{"ball_depth", p.ball_depth},   {"link_depth", p.link_depth},
                     {"k_max", p.k_max},             {"margin", p.margin},
                     {"cloud_length", p.cloud_length}, {"epsilon", rep.epsilon},
                     {"epsilon_given", p.epsilon.has_value()}, {"resolution", p.resolution},
                     {"vertex_cap", p.vertex_cap},   {"cloud_cap", p.cloud_cap},
                     {"degeneracy_factor", p.degeneracy_factor}};
  return j;
}

enum class EmitFormat { Json, DotCayley, DotLink, Pgm, Csv };

inline std::optional<EmitFormat> parse_format(const std::string& s) {
  if (s == "json") return EmitFormat::Json;
  if (s == "dot_cayley") return EmitFormat::DotCayley;
  if (s == "dot_link") return EmitFormat::DotLink;
  if (s == "pgm") return EmitFormat::Pgm;
  if (s == "csv") return EmitFormat::Csv;
  return std::nullopt;
}

inline std::string emit(const AnalysisReport& rep, EmitFormat format) {
  switch (format) {
    case EmitFormat::Json:
      return to_json(rep).dump(2) + "\n";
    case EmitFormat::DotCayley:
      return to_dot(rep.ball, rep.system());
    case EmitFormat::DotLink:
      return to_dot(rep.link, rep.system());
    case EmitFormat::Pgm:
      if (rep.system().dim() > 2) throw std::invalid_argument("pgm output needs dimension <= 2");
      return to_pgm(render_raster(rep.cloud, rep.params.resolution));
    case EmitFormat::Csv:
      return to_csv(rep.cloud);
  }
  throw std::invalid_argument("unknown format");
}

}  // namespace ifsends
