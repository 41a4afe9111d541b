// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Tolerances and limits are fixed below.

#include "ifsends/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace ifsends;

namespace {

constexpr double kRelationSeconds = 1.0;
constexpr double kCertificateSeconds = 10.0;
constexpr int kCertificateLinkDepth = 6;
constexpr double kEndsSeconds = 30.0;
constexpr int kEndsMaxBallDepth = 10;
constexpr int kHalfConstLinkDepth = 8;
constexpr int kIsoDepth = 8;
constexpr int kIsoCloudLength = 12;
constexpr double kIsoHausdorffFloor = 0.15;
constexpr int kCDepth = 4;
constexpr double kAugmentTarget = 1.0 / 256;
constexpr double kAugmentSeconds = 60.0;
constexpr int kKochCloudLength = 11;
constexpr int kSierpinskiCloudLength = 9;
constexpr int kDeadEndDepth = 8;
constexpr int kRayPairs = 20;
constexpr std::uint32_t kRaySeed = 20240611;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    note(why);
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

std::string strip_spaces(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

struct TimedReport {
  AnalysisReport report;
  double seconds;
};

const TimedReport& report(const std::string& name) {
  static std::map<std::string, TimedReport> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    const Fixture& f = fixture(name);
    const auto t0 = Clock::now();
    AnalysisReport rep = analyze(parse(f.source), f.params);
    it = cache.emplace(name, TimedReport{std::move(rep), seconds_since(t0)}).first;
  }
  return it->second;
}

Outcome relation_gate() {
  Outcome o;
  const std::vector<std::pair<std::string, std::vector<std::string>>> expected = {
      {"koch3", {"aab = ca", "cb = bba"}},
      {"sierpinski5", {"abd = dad", "dbd = bad", "bce = ebe", "ece = cbe"}},
      {"carpet10",
       {"a1e = a2w", "a2e = a3w", "a7e = a8w", "a8e = a9w", "a4w = wa4", "a6e = ea6", "wa1a4 = a1a7w",
        "wa7a4 = a7a1w", "ea1a4 = a3a9e"}}};
  for (const auto& [name, rels] : expected) {
    const auto t0 = Clock::now();
    const IfsDocument doc = parse(fixture(name).source);
    const auto checks = check_relations(doc);
    const double t = seconds_since(t0);
    std::size_t held = 0;
    for (const auto& c : checks) {
      if (c.holds) {
        ++held;
        continue;
      }
      o.fail(name + " transcription anomaly '" + relation_text(doc.system, c.relation) +
             "': lhs " + format_map(c.lhs_value) + ", rhs " + format_map(c.rhs_value));
    }
    if (checks.size() != rels.size()) o.fail(name + " has " + std::to_string(checks.size()) + " relations");
    for (std::size_t i = 0; i < std::min(checks.size(), rels.size()); ++i) {
      if (strip_spaces(relation_text(doc.system, checks[i].relation)) != strip_spaces(rels[i]))
        o.fail(name + " relation " + std::to_string(i + 1) + " is '" + relation_text(doc.system, checks[i].relation) +
               "', expected '" + rels[i] + "'");
    }
    if (t >= kRelationSeconds) o.fail(name + " took " + fmt(t) + " s");
    o.note(name + " " + std::to_string(held) + "/" + std::to_string(checks.size()) + " exact in " + fmt(t) + " s");
  }
  return o;
}

Outcome certificates() {
  Outcome o;
  for (const char* name : {"koch3", "sierpinski5", "carpet10"}) {
    const IfsSystem s = parse(fixture(name).source).system;
    const auto t0 = Clock::now();
    const CertificateResult res = one_ended_certificate(s, kCertificateLinkDepth);
    const double t = seconds_since(t0);
    if (const auto* cert = std::get_if<OneEndCertificate>(&res)) {
      if (cert->evidence.kind != IdempotentEvidence::Kind::CertifiedNone) o.fail(std::string(name) + " evidence not CertifiedNone");
      if (cert->spanning_tree.size() + 1 != s.size()) o.fail(std::string(name) + " spanning tree incomplete");
      o.note(std::string(name) + " issued at link depth " + std::to_string(cert->link_depth) + " in " + fmt(t) + " s");
    } else {
      o.fail(std::string(name) + " refused: " + to_string(std::get<CertificateRefusal>(res).reason));
    }
    if (t >= kCertificateSeconds) o.fail(std::string(name) + " took " + fmt(t) + " s");
  }
  return o;
}

Outcome ends_classifications() {
  Outcome o;
  struct Case {
    const char* name;
    EndsEstimate::Kind kind;
    int count;
  };
  using K = EndsEstimate::Kind;
  for (const Case& c : {Case{"ex14_projections", K::Exactly, 2}, Case{"ex14_halfconst", K::Exactly, 1},
                        Case{"ex21", K::Exactly, 2}, Case{"koch2", K::GrowingUnbounded, 0},
                        Case{"crooked_koch4", K::GrowingUnbounded, 0}}) {
    const TimedReport& tr = report(c.name);
    const AnalysisReport& rep = tr.report;
    const bool ok = rep.ends.kind == c.kind && (c.kind != K::Exactly || rep.ends.count == c.count);
    if (!ok) o.fail(std::string(c.name) + " classified " + to_string(rep.ends));
    if (rep.ball.radius() > kEndsMaxBallDepth) o.fail(std::string(c.name) + " used ball depth " + std::to_string(rep.ball.radius()));
    if (tr.seconds >= kEndsSeconds) o.fail(std::string(c.name) + " took " + fmt(tr.seconds) + " s");
    o.note(std::string(c.name) + " " + to_string(rep.ends) + " in " + fmt(tr.seconds) + " s");
  }
  if (!link_graph_connected(report("ex14_projections").report.link)) o.fail("ex14_projections link graph disconnected");
  const LinkGraph half = build_link_graph(parse(fixture("ex14_halfconst").source).system, kHalfConstLinkDepth);
  if (!half.edges.empty()) o.fail("ex14_halfconst link graph has edges at depth 8");
  o.note("ex14_projections linked, ex14_halfconst edgeless at depth 8");
  return o;
}

Outcome isomorphic_balls() {
  Outcome o;
  const IfsSystem abc = parse(fixture("ex19_abc").source).system;
  const IfsSystem abd = parse(fixture("ex19_abd").source).system;
  const bool iso = balls_isomorphic(build_ball(abc, kIsoDepth + 1), build_ball(abd, kIsoDepth + 1), kIsoDepth);
  if (!iso) o.fail("balls not isomorphic at depth 8");
  const PointCloud ca = sample_cloud(abc, kIsoCloudLength);
  const PointCloud cd = sample_cloud(abd, kIsoCloudLength);
  const double h = hausdorff_upper(ca, cd);
  if (!(h > kIsoHausdorffFloor)) o.fail("hausdorff_upper " + fmt(h) + " <= 0.15");
  o.note(std::string("isomorphic ") + (iso ? "true" : "false") + ", hausdorff_upper " + fmt(h) + " (errors " +
         fmt(ca.error_radius) + ", " + fmt(cd.error_radius) + ")");
  return o;
}

Outcome isolated_containment() {
  Outcome o;
  for (const char* name : {"ex19_abd", "ex21"}) {
    const AnalysisReport& rep = report(name).report;
    if (!rep.isolated_outside_C.empty())
      o.fail(std::string(name) + " " + std::to_string(rep.isolated_outside_C.size()) + " isolated candidates outside C");
    o.note(std::string(name) + " " + std::to_string(rep.isolated.size()) + " isolated candidates, all in C at depth " +
           std::to_string(rep.C.depth));
  }
  const IdempotentImageSet c = idempotent_images(build_ball(parse(fixture("ex19_abd").source).system, kCDepth));
  for (long den : {2L, 4L, 8L}) {
    const Point p{QuadScalar(mpq_class(den - 1, den), mpq_class(1, den), 2)};
    if (!c.contains(p)) o.fail("C at depth 4 misses " + p[0].to_string());
  }
  o.note("C at depth 4 has " + std::to_string(c.values.size()) + " values including (1+r)/2, (3+r)/4, (7+r)/8");
  return o;
}

Outcome component_bound() {
  Outcome o;
  for (const auto& f : fixtures()) {
    const AnalysisReport& rep = report(f.name).report;
    if (rep.ends.kind != EndsEstimate::Kind::Exactly) continue;
    const auto n = static_cast<std::size_t>(rep.ends.count);
    const std::size_t nd = rep.components.nondegenerate_count;
    if (nd > n) o.fail(f.name + " " + std::to_string(nd) + " > " + std::to_string(n));
    o.note(f.name + " " + std::to_string(nd) + " <= " + std::to_string(n));
  }
  return o;
}

Outcome augmentation(std::map<std::string, PointCloud>& clouds) {
  Outcome o;
  const auto t0 = Clock::now();
  struct Case {
    const char* base;
    const char* augmented;
    int length;
  };
  for (const Case& c : {Case{"koch2", "koch3", kKochCloudLength}, Case{"sierpinski3", "sierpinski5", kSierpinskiCloudLength}}) {
    const IfsSystem a = parse(fixture(c.base).source).system;
    const IfsSystem b = parse(fixture(c.augmented).source).system;
    clouds[c.base] = sample_cloud(a, c.length);
    clouds[c.augmented] = sample_cloud(b, c.length);
    const PointCloud& ca = clouds[c.base];
    const PointCloud& cb = clouds[c.augmented];
    const double err = std::max(ca.error_radius, cb.error_radius);
    if (!(err < kAugmentTarget)) o.fail(std::string(c.base) + " error radius " + fmt(err) + " >= 1/256 at L = " + std::to_string(c.length));
    const double h = hausdorff_upper(ca, cb);
    if (!(h <= 2 * err)) o.fail(std::string(c.base) + "/" + c.augmented + " hausdorff_upper " + fmt(h) + " > " + fmt(2 * err));
    o.note(std::string(c.base) + "/" + c.augmented + " L=" + std::to_string(c.length) + " hausdorff_upper " + fmt(h) +
           " <= " + fmt(2 * err) + " (nominal lambda^L D " +
           fmt(std::max(ca.nominal_error_radius, cb.nominal_error_radius)) + ")");
  }
  const double t = seconds_since(t0);
  if (t >= kAugmentSeconds) o.fail("took " + fmt(t) + " s");
  o.note(fmt(t) + " s");
  return o;
}

Outcome dead_end_equivalence() {
  Outcome o;
  for (const auto& f : fixtures()) {
    const auto t0 = Clock::now();
    const DeadEndSurvey survey = survey_dead_ends(parse(f.source).system, kDeadEndDepth);
    if (!survey.violations.empty()) o.fail(f.name + " " + std::to_string(survey.violations.size()) + " exceptions");
    o.note(f.name + " " + std::to_string(survey.checked) + " vertices in " + fmt(seconds_since(t0)) + " s");
  }
  return o;
}

Outcome ray_pairs(const std::map<std::string, PointCloud>& clouds) {
  Outcome o;
  const IfsSystem s = parse(fixture("koch3").source).system;
  const PointCloud& cloud = clouds.at("koch3");
  const double eps = default_epsilon(cloud);
  const ComponentReport comps = count_components(cloud, eps);
  std::mt19937 rng(kRaySeed);
  std::uniform_int_distribution<std::uint32_t> letter(0, static_cast<std::uint32_t>(s.size() - 1));
  std::uniform_int_distribution<int> pre_len(0, 4), period_len(1, 3);
  auto random_walk = [&] {
    WalkSpec w;
    for (int i = pre_len(rng); i > 0; --i) w.preperiod.push_back(letter(rng));
    for (int i = period_len(rng); i > 0; --i) w.period.push_back(letter(rng));
    return w;
  };
  // Component of the nearest cloud point; every attractor point is within
  // the error radius of the cloud.
  auto component_of = [&](const FloatPoint& p) -> std::optional<std::uint32_t> {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double d = distance(p, cloud.coords[i]);
      if (d < best) {
        best = d;
        arg = i;
      }
    }
    if (best > cloud.error_radius) return std::nullopt;
    return comps.labels[arg];
  };
  int same = 0;
  for (int k = 0; k < kRayPairs; ++k) {
    const WalkSpec w1 = random_walk();
    const WalkSpec w2 = random_walk();
    if (!is_ray(s, w1) || !is_ray(s, w2)) {
      o.fail("pair " + std::to_string(k) + " is not a pair of rays");
      continue;
    }
    const auto c1 = component_of(to_float_point(encode_walk(s, w1)));
    const auto c2 = component_of(to_float_point(encode_walk(s, w2)));
    if (!c1 || !c2) {
      o.fail("pair " + std::to_string(k) + " encodes a point farther than the error radius from the cloud");
    } else if (*c1 != *c2) {
      o.fail("pair " + std::to_string(k) + " lies in components " + std::to_string(*c1) + " and " + std::to_string(*c2));
    } else {
      ++same;
    }
  }
  o.note(std::to_string(same) + "/" + std::to_string(kRayPairs) + " pairs share an epsilon-component (epsilon " + fmt(eps) +
         ", " + std::to_string(comps.component_count) + " components)");
  return o;
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("ifsends_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string outputs[2], jsons[2];
  int codes[2];
  for (int i = 0; i < 2; ++i) {
    const std::string path = (dir / ("verify" + std::to_string(i) + ".json")).string();
    std::ostringstream out, err;
    codes[i] = cli::run({"verify", "--out", path}, out, err);
    outputs[i] = out.str();
    jsons[i] = cli::read_file(path);
  }
  fs::remove_all(dir);
  if (jsons[0] != jsons[1]) o.fail("JSON outputs differ");
  if (outputs[0] != outputs[1]) o.fail("PASS/FAIL listings differ");
  if (jsons[0].empty()) o.fail("empty JSON output");
  o.note(std::to_string(jsons[0].size()) + " identical bytes, exit codes " + std::to_string(codes[0]) + " and " +
         std::to_string(codes[1]));
  return o;
}

}  // namespace

int main() {
  std::map<std::string, PointCloud> clouds;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"relation gate", relation_gate},
      {"one-end certificates", certificates},
      {"ends classifications", ends_classifications},
      {"isomorphic balls, distinct attractors", isomorphic_balls},
      {"isolated candidates within C", isolated_containment},
      {"nondegenerate components bounded by ends", component_bound},
      {"augmentation preserves the attractor", [&] { return augmentation(clouds); }},
      {"constant, idempotent and dead-end agree", dead_end_equivalence},
      {"ray pairs share a component", [&] { return ray_pairs(clouds); }},
      {"verify output is deterministic", determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << (i + 1) << " " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
