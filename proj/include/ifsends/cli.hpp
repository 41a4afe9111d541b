#pragma once

// Command-line front end. run() takes the arguments after the program name
// and writes data to `out`, diagnostics to `err`.

#include "ifsends/fixtures.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace ifsends::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAnomalies = 2;
inline constexpr int kExitUsage = 64;

struct Source {
  std::string file;
  std::string fixture;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_output(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << data;
  if (!f) throw std::runtime_error("error writing '" + path + "'");
}

/// Parsed document plus the parameters to start from: a fixture's own
/// parameters, or the defaults for files.
inline std::pair<IfsDocument, AnalysisParams> load(const Source& src) {
  if (!src.fixture.empty()) {
    const Fixture& f = fixture(src.fixture);
    return {parse(f.source), f.params};
  }
  try {
    return {parse(read_file(src.file)), AnalysisParams{}};
  } catch (const ParseError& e) {
    throw std::runtime_error(src.file + ":" + e.what());
  }
}

inline void add_source(CLI::App* cmd, Source& src) {
  auto* file = cmd->add_option("file", src.file, "IFS description file");
  auto* fix = cmd->add_option("--fixture", src.fixture, "built-in fixture name");
  file->excludes(fix);
  fix->excludes(file);
}

inline void require_source(const Source& src) {
  if (src.file.empty() && src.fixture.empty()) throw CLI::RequiredError("FILE or --fixture");
}

struct Overrides {
  std::optional<int> ball_depth, link_depth, k_max, margin, cloud_length, resolution;
  std::optional<double> epsilon;

  void apply(AnalysisParams& p) const {
    if (ball_depth) p.ball_depth = *ball_depth;
    if (link_depth) p.link_depth = *link_depth;
    if (k_max) p.k_max = *k_max;
    if (margin) p.margin = *margin;
    if (cloud_length) p.cloud_length = *cloud_length;
    if (resolution) p.resolution = *resolution;
    if (epsilon) p.epsilon = *epsilon;
  }
};

/// Checks a report against a fixture's expected outcome; returns the
/// mismatches.
inline std::vector<std::string> check_expected(const Fixture& f, const AnalysisReport& rep) {
  std::vector<std::string> bad;
  const ExpectedOutcome& ex = f.expected;
  if (ex.ends) {
    EndsEstimate want;
    want.kind = *ex.ends;
    want.count = static_cast<int>(ex.ends_count);
    const bool ok = rep.ends.kind == want.kind && (want.kind != EndsEstimate::Kind::Exactly || rep.ends.count == want.count);
    if (!ok) bad.push_back("ends " + to_string(rep.ends) + ", expected " + to_string(want));
  }
  if (ex.certificate && rep.certificate_issued() != *ex.certificate)
    bad.push_back(std::string("certificate ") + (rep.certificate_issued() ? "issued" : "refused"));
  if (ex.link_connected && link_graph_connected(rep.link) != *ex.link_connected)
    bad.push_back(std::string("link graph ") + (*ex.link_connected ? "disconnected" : "connected"));
  if (ex.link_edgeless && rep.link.edges.empty() != *ex.link_edgeless)
    bad.push_back("link graph has " + std::to_string(rep.link.edges.size()) + " edges");
  if (ex.has_idempotents && rep.idempotents.empty() == *ex.has_idempotents)
    bad.push_back(std::to_string(rep.idempotents.size()) + " idempotents in the ball");
  for (const auto& a : rep.anomalies) bad.push_back("anomaly: " + a);
  return bad;
}

inline std::string summary_line(const AnalysisReport& rep) {
  std::ostringstream os;
  os << "ends " << to_string(rep.ends) << ", certificate " << (rep.certificate_issued() ? "issued" : "refused")
     << ", link " << (link_graph_connected(rep.link) ? "connected" : "disconnected") << ", idempotents "
     << rep.idempotents.size() << ", components " << rep.components.component_count << " ("
     << rep.components.nondegenerate_count << " nondegenerate), relations " << rep.relations.size();
  return os.str();
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cayley graphs, ends and attractors of affine iterated function systems", "ifsends"};
  app.require_subcommand(1);

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "parse a description file and check admissibility");
  validate->add_option("file", validate_file, "IFS description file")->required();

  Source analyze_src;
  Overrides ov;
  std::string analyze_out;
  auto* analyze_cmd = app.add_subcommand("analyze", "run the full analysis and write the JSON report");
  add_source(analyze_cmd, analyze_src);
  analyze_cmd->add_option("--ball-depth", ov.ball_depth, "Cayley ball radius (default 10)")->check(CLI::Range(1, 64));
  analyze_cmd->add_option("--link-depth", ov.link_depth, "link graph depth (default 6)")->check(CLI::Range(1, 64));
  analyze_cmd->add_option("--k-max", ov.k_max, "largest deleted ball for the ends estimate (default 6)")
      ->check(CLI::Range(2, 64));
  analyze_cmd->add_option("--margin", ov.margin, "horizon beyond k for the ends estimate (default 3)")
      ->check(CLI::Range(2, 64));
  analyze_cmd->add_option("--cloud-length", ov.cloud_length, "word length of the point cloud (default 10)")
      ->check(CLI::Range(0, 64));
  analyze_cmd->add_option("--epsilon", ov.epsilon, "component resolution")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--out", analyze_out, "output file (default stdout)");

  Source render_src;
  std::optional<int> render_length;
  int resolution = 512;
  std::string render_out;
  auto* render = app.add_subcommand("render", "rasterize the point cloud as a binary PGM");
  add_source(render, render_src);
  render->add_option("--cloud-length", render_length, "word length of the point cloud")->check(CLI::Range(0, 64));
  render->add_option("--resolution", resolution, "pixels per unit length (default 512)")
      ->check(CLI::Range(1, 1 << 16));
  render->add_option("--out", render_out, "output PGM file")->required();

  Source graph_src;
  std::string graph_kind;
  std::optional<int> graph_depth;
  std::string graph_out;
  auto* graph = app.add_subcommand("graph", "export the Cayley ball or the link graph as DOT");
  graph->add_option("kind", graph_kind, "cayley or link")->required()->check(CLI::IsMember({"cayley", "link"}));
  add_source(graph, graph_src);
  graph->add_option("--depth", graph_depth, "ball radius (default 4) or link depth (default 6)")
      ->check(CLI::Range(1, 64));
  graph->add_option("--out", graph_out, "output DOT file")->required();

  app.add_subcommand("fixtures", "list the built-in fixtures");

  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "analyze every fixture and check its expected outcome");
  verify->add_option("--out", verify_out, "write all reports as one JSON array");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (analyze_cmd->parsed()) require_source(analyze_src);
    if (render->parsed()) require_source(render_src);
    if (graph->parsed()) require_source(graph_src);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (validate->parsed()) {
      IfsDocument doc;
      try {
        doc = parse(read_file(validate_file));
      } catch (const ParseError& e) {
        err << validate_file << ":" << e.what() << "\n";
        return kExitError;
      }
      out << validate_file << ": ok (dim " << doc.system.dim() << ", radicand " << doc.system.radicand() << ", "
          << doc.system.size() << " maps, " << doc.relations.size() << " relations)\n";
      return kExitOk;
    }

    if (analyze_cmd->parsed()) {
      auto [doc, params] = load(analyze_src);
      ov.apply(params);
      const AnalysisReport rep = analyze(doc, params);
      write_output(analyze_out, emit(rep, EmitFormat::Json), out);
      for (const auto& a : rep.anomalies) err << "anomaly: " << a << "\n";
      return rep.anomalies.empty() ? kExitOk : kExitAnomalies;
    }

    if (render->parsed()) {
      auto [doc, params] = load(render_src);
      if (render_length) params.cloud_length = *render_length;
      if (doc.system.dim() > 2) throw std::invalid_argument("render needs dimension <= 2");
      CloudOptions opts;
      opts.cap = params.cloud_cap;
      const PointCloud cloud = sample_cloud(doc.system, params.cloud_length, opts);
      write_output(render_out, to_pgm(render_raster(cloud, resolution)), out);
      return kExitOk;
    }

    if (graph->parsed()) {
      auto [doc, params] = load(graph_src);
      if (graph_kind == "cayley") {
        const CayleyBall ball = build_ball(doc.system, graph_depth.value_or(4), params.vertex_cap);
        write_output(graph_out, to_dot(ball, doc.system), out);
      } else {
        const LinkGraph lg = build_link_graph(doc.system, graph_depth.value_or(params.link_depth), params.vertex_cap);
        write_output(graph_out, to_dot(lg, doc.system), out);
      }
      return kExitOk;
    }

    if (app.got_subcommand("fixtures")) {
      for (const auto& f : fixtures()) out << f.name << "  " << f.description << "\n";
      return kExitOk;
    }

    if (verify->parsed()) {
      bool all_ok = true;
      nlohmann::ordered_json reports = nlohmann::ordered_json::array();
      for (const auto& f : fixtures()) {
        const AnalysisReport rep = analyze(parse(f.source), f.params);
        const auto bad = check_expected(f, rep);
        if (bad.empty()) {
          out << "PASS " << f.name << ": " << summary_line(rep) << "\n";
        } else {
          all_ok = false;
          out << "FAIL " << f.name << ":";
          for (const auto& b : bad) out << " " << b << ";";
          out << "\n";
        }
        if (!verify_out.empty()) {
          nlohmann::ordered_json entry;
          entry["fixture"] = f.name;
          entry["report"] = to_json(rep);
          reports.push_back(std::move(entry));
        }
      }
      if (!verify_out.empty()) write_output(verify_out, reports.dump(2) + "\n", out);
      return all_ok ? kExitOk : kExitError;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace ifsends::cli
