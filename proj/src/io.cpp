#include "gldlmom/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "gldlmom/error.hpp"
#include "json.hpp"

namespace gldlmom::io {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double get_num(const json& j, const char* key) {
  if (!j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>());
  parse_error(std::string("field '") + key + "' is not a number");
}

json envelope(std::string_view kind) {
  return json{{"format", "gldlmom/" + std::string(kind)}, {"version", kFormatVersion}};
}

json open_document(std::string_view text, std::string_view kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
  const std::string want = "gldlmom/" + std::string(kind);
  if (!j.is_object() || !j.contains("format") || j["format"] != want) {
    parse_error("expected a " + want + " document");
  }
  if (!j.contains("version") || j["version"] != kFormatVersion) parse_error("unsupported format version");
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json params_json(const GldParams& p) {
  return {{"lambda1", num(p.lambda1)}, {"lambda2", num(p.lambda2)}, {"lambda3", num(p.lambda3)},
          {"lambda4", num(p.lambda4)}};
}
GldParams params_from(const json& j) {
  return {get_num(j, "lambda1"), get_num(j, "lambda2"), get_num(j, "lambda3"), get_num(j, "lambda4")};
}

json shape_json(ShapePair s) { return {{"lambda3", num(s.lambda3)}, {"lambda4", num(s.lambda4)}}; }
ShapePair shape_from(const json& j) { return {get_num(j, "lambda3"), get_num(j, "lambda4")}; }

json tau_json(TauPair t) { return {{"tau3", num(t.tau3)}, {"tau4", num(t.tau4)}}; }
TauPair tau_from(const json& j) { return {get_num(j, "tau3"), get_num(j, "tau4")}; }

Region region_from(const json& j) {
  if (!j.contains("region") || !j["region"].is_string()) parse_error("missing field 'region'");
  try {
    return parse_region(j["region"].get<std::string>());
  } catch (const Error& e) {
    parse_error(e.what());
  }
}

json fit_json(const FitResult& r) {
  json j = {{"params", params_json(r.params)},
            {"region", to_string(r.region)},
            {"objective", num(r.objective)},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"start", shape_json(r.start_point)}};
  j["ks_statistic"] = r.ks_statistic ? num(*r.ks_statistic) : json(nullptr);
  return j;
}
FitResult fit_from(const json& j) {
  FitResult r;
  r.params = params_from(j.at("params"));
  r.region = region_from(j);
  r.objective = get_num(j, "objective");
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.start_point = shape_from(j.at("start"));
  if (j.contains("ks_statistic") && !j["ks_statistic"].is_null()) r.ks_statistic = get_num(j, "ks_statistic");
  return r;
}

json census_json(const CensusSolution& c) {
  return {{"shape", shape_json(c.shape)},     {"region", to_string(c.region)},
          {"objective", num(c.objective)},    {"achieved", tau_json(c.achieved)},
          {"standardized", params_json(c.standardized)}};
}
CensusSolution census_from(const json& j) {
  CensusSolution c;
  c.shape = shape_from(j.at("shape"));
  c.region = region_from(j);
  c.objective = get_num(j, "objective");
  c.achieved = tau_from(j.at("achieved"));
  c.standardized = params_from(j.at("standardized"));
  return c;
}

json summary_json(const Summary& s) { return {{"mean", num(s.mean)}, {"std_error", num(s.std_error)}}; }
Summary summary_from(const json& j) { return {get_num(j, "mean"), get_num(j, "std_error")}; }

std::string_view statistic_name(Statistic s) { return s == Statistic::Tau3 ? "tau3" : "tau4"; }
Statistic statistic_from(const std::string& s) {
  if (s == "tau3") return Statistic::Tau3;
  if (s == "tau4") return Statistic::Tau4;
  parse_error("unknown statistic '" + s + "'");
}

// Wraps a parse so that nlohmann type errors surface as ParseError.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    parse_error(std::string("bad document: ") + e.what());
  }
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  if (text == "table") return Format::Table;
  parse_error("unknown format '" + std::string(text) + "' (expected csv, json or table)");
}

std::string number(double v, const NumberFormat& nf) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = nf.digits > 0 ? std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, nf.digits)
                                 : std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    parse_error("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    out.push_back(parse_number(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

namespace {
bool is_number(const std::string& tok) {
  try {
    parse_number(tok);
    return true;
  } catch (const Error&) {
    return false;
  }
}
}  // namespace

std::vector<double> read_numbers(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',' || c == '\t' || c == '\r') c = ' ';
    std::istringstream tokens(line);
    std::vector<std::string> toks;
    for (std::string tok; tokens >> tok;) toks.push_back(tok);
    if (toks.empty()) continue;
    // A column header (e.g. the "x" line of sample's csv) may precede the data.
    if (!seen_data && std::none_of(toks.begin(), toks.end(), [](const std::string& t) { return is_number(t); })) {
      seen_data = true;
      continue;
    }
    seen_data = true;
    for (const auto& tok : toks) {
      if (!is_number(tok)) parse_error("line " + std::to_string(lineno) + ": not a number: '" + tok + "'");
      out.push_back(parse_number(tok));
    }
  }
  return out;
}

// ---- JSON -------------------------------------------------------------------

std::string to_json(const GldParams& p) {
  json j = envelope("gld_params");
  j.update(params_json(p));
  return dump(j);
}
template <>
GldParams from_json<GldParams>(std::string_view text) {
  return guarded([&] { return params_from(open_document(text, "gld_params")); });
}

std::string to_json(const LMomentSet& m) {
  json j = envelope("lmoments");
  j["L1"] = num(m.l1);
  j["L2"] = num(m.l2);
  for (int r = 3; r <= m.max_order(); ++r) j["tau" + std::to_string(r)] = num(m.ratio(r));
  return dump(j);
}
template <>
LMomentSet from_json<LMomentSet>(std::string_view text) {
  return guarded([&] {
    const json j = open_document(text, "lmoments");
    LMomentSet m;
    m.l1 = get_num(j, "L1");
    m.l2 = get_num(j, "L2");
    for (int r = 3; j.contains("tau" + std::to_string(r)); ++r) m.tau.push_back(get_num(j, ("tau" + std::to_string(r)).c_str()));
    return m;
  });
}

std::string to_json(const SymmetricSolution& s) {
  json j = envelope("symmetric_solution");
  j["tau4"] = num(s.tau4);
  j["roots"] = json::array();
  for (double r : s.roots) j["roots"].push_back(num(r));
  return dump(j);
}
template <>
SymmetricSolution from_json<SymmetricSolution>(std::string_view text) {
  return guarded([&] {
    const json j = open_document(text, "symmetric_solution");
    SymmetricSolution s;
    s.tau4 = get_num(j, "tau4");
    for (const auto& r : j.at("roots")) {
      json wrap = {{"v", r}};
      s.roots.push_back(get_num(wrap, "v"));
    }
    return s;
  });
}

std::string to_json(const FitResult& r) {
  json j = envelope("fit_result");
  j.update(fit_json(r));
  return dump(j);
}
template <>
FitResult from_json<FitResult>(std::string_view text) {
  return guarded([&] { return fit_from(open_document(text, "fit_result")); });
}

std::string to_json(const std::vector<FitResult>& rs) {
  json j = envelope("fit_results");
  j["results"] = json::array();
  for (const auto& r : rs) j["results"].push_back(fit_json(r));
  return dump(j);
}
template <>
std::vector<FitResult> from_json<std::vector<FitResult>>(std::string_view text) {
  return guarded([&] {
    const json j = open_document(text, "fit_results");
    std::vector<FitResult> out;
    for (const auto& r : j.at("results")) out.push_back(fit_from(r));
    return out;
  });
}

std::string to_json(const BoundaryPolygon& b) {
  json j = envelope("boundary");
  j["region"] = to_string(b.region);
  j["mode"] = b.mode == AssemblyMode::CandidateChain ? "candidate_chain" : "full_mesh";
  j["vertices"] = json::array();
  for (const auto& v : b.vertices) j["vertices"].push_back(tau_json(v));
  return dump(j);
}
template <>
BoundaryPolygon from_json<BoundaryPolygon>(std::string_view text) {
  return guarded([&] {
    const json j = open_document(text, "boundary");
    BoundaryPolygon b;
    b.region = region_from(j);
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "candidate_chain") b.mode = AssemblyMode::CandidateChain;
    else if (mode == "full_mesh") b.mode = AssemblyMode::FullMesh;
    else parse_error("unknown assembly mode '" + mode + "'");
    for (const auto& v : j.at("vertices")) b.vertices.push_back(tau_from(v));
    return b;
  });
}

std::string to_json(const ContourSet& c) {
  json j = envelope("contours");
  j["region"] = to_string(c.region);
  j["statistic"] = statistic_name(c.statistic);
  j["levels"] = json::array();
  for (std::size_t k = 0; k < c.levels.size(); ++k) {
    json level = {{"level", num(c.levels[k])}, {"polylines", json::array()}};
    for (const auto& line : c.polylines[k]) {
      json pts = json::array();
      for (const auto& p : line) pts.push_back(shape_json(p));
      level["polylines"].push_back(pts);
    }
    j["levels"].push_back(level);
  }
  return dump(j);
}
template <>
ContourSet from_json<ContourSet>(std::string_view text) {
  return guarded([&] {
    const json j = open_document(text, "contours");
    ContourSet c;
    c.region = region_from(j);
    c.statistic = statistic_from(j.at("statistic").get<std::string>());
    for (const auto& level : j.at("levels")) {
      c.levels.push_back(get_num(level, "level"));
      std::vector<Polyline> lines;
      for (const auto& pts : level.at("polylines")) {
        Polyline line;
        for (const auto& p : pts) line.push_back(shape_from(p));
        lines.push_back(std::move(line));
      }
      c.polylines.push_back(std::move(lines));
    }
    return c;
  });
}

std::string to_json(const std::vector<CensusSolution>& cs) {
  json j = envelope("census");
  j["solutions"] = json::array();
  for (const auto& c : cs) j["solutions"].push_back(census_json(c));
  return dump(j);
}
template <>
std::vector<CensusSolution> from_json<std::vector<CensusSolution>>(std::string_view text) {
  return guarded([&] {
    const json j = open_document(text, "census");
    std::vector<CensusSolution> out;
    for (const auto& c : j.at("solutions")) out.push_back(census_from(c));
    return out;
  });
}

std::string to_json(const SimReport& r) {
  json j = envelope("sim_report");
  j["config"] = {{"generator", params_json(r.config.generator)},
                 {"sample_size", r.config.sample_size},
                 {"replications", r.config.replications},
                 {"seed", r.config.seed},
                 {"report_smaller_start", r.config.report_smaller_start}};
  j["replications"] = r.replications;
  j["completed"] = r.completed;
  j["failed"] = r.failed;
  j["lambda1"] = summary_json(r.lambda1);
  j["lambda2"] = summary_json(r.lambda2);
  j["lambda3"] = summary_json(r.lambda3);
  j["lambda4"] = summary_json(r.lambda4);
  j["time_seconds"] = summary_json(r.time_seconds);
  j["e_ks"] = summary_json(r.e_ks);
  return dump(j);
}
template <>
SimReport from_json<SimReport>(std::string_view text) {
  return guarded([&] {
    const json j = open_document(text, "sim_report");
    SimReport r;
    const json& c = j.at("config");
    r.config.generator = params_from(c.at("generator"));
    r.config.sample_size = c.at("sample_size").get<std::size_t>();
    r.config.replications = c.at("replications").get<std::size_t>();
    r.config.seed = c.at("seed").get<std::uint64_t>();
    r.config.report_smaller_start = c.at("report_smaller_start").get<bool>();
    r.replications = j.at("replications").get<std::size_t>();
    r.completed = j.at("completed").get<std::size_t>();
    r.failed = j.at("failed").get<std::size_t>();
    r.lambda1 = summary_from(j.at("lambda1"));
    r.lambda2 = summary_from(j.at("lambda2"));
    r.lambda3 = summary_from(j.at("lambda3"));
    r.lambda4 = summary_from(j.at("lambda4"));
    r.time_seconds = summary_from(j.at("time_seconds"));
    r.e_ks = summary_from(j.at("e_ks"));
    return r;
  });
}

std::string atlas_json(const LambdaGrid& g, const TauGrid& t) {
  json j = envelope("atlas");
  j["region"] = to_string(g.region);
  j["n3"] = t.n3;
  j["n4"] = t.n4;
  j["points"] = json::array();
  for (std::size_t i = 0; i < t.n3; ++i)
    for (std::size_t k = 0; k < t.n4; ++k) {
      if (!t.valid(i, k)) continue;
      const TauPair p = t.at(i, k);
      j["points"].push_back({{"lambda3", num(g.lambda3_axis[i])}, {"lambda4", num(g.lambda4_axis[k])},
                             {"tau3", num(p.tau3)}, {"tau4", num(p.tau4)}});
    }
  return dump(j);
}

// ---- CSV --------------------------------------------------------------------

std::string to_csv(const GldParams& p, const NumberFormat& nf) {
  return "lambda1,lambda2,lambda3,lambda4\n" + number(p.lambda1, nf) + ',' + number(p.lambda2, nf) + ',' +
         number(p.lambda3, nf) + ',' + number(p.lambda4, nf) + '\n';
}

std::string to_csv(const LMomentSet& m, const NumberFormat& nf) {
  std::string head = "L1,L2", row = number(m.l1, nf) + ',' + number(m.l2, nf);
  for (int r = 3; r <= m.max_order(); ++r) {
    head += ",tau" + std::to_string(r);
    row += ',' + number(m.ratio(r), nf);
  }
  return head + '\n' + row + '\n';
}

std::string to_csv(const SymmetricSolution& s, const NumberFormat& nf) {
  std::string out = "tau4,root\n";
  for (double r : s.roots) out += number(s.tau4, nf) + ',' + number(r, nf) + '\n';
  return out;
}

std::string to_csv(const std::vector<FitResult>& rs, const NumberFormat& nf) {
  std::string out =
      "rank,lambda1,lambda2,lambda3,lambda4,region,objective,iterations,converged,ks_statistic,start_lambda3,"
      "start_lambda4\n";
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const FitResult& r = rs[k];
    out += std::to_string(k + 1) + ',' + number(r.params.lambda1, nf) + ',' + number(r.params.lambda2, nf) + ',' +
           number(r.params.lambda3, nf) + ',' + number(r.params.lambda4, nf) + ',' + std::string(to_string(r.region)) +
           ',' + number(r.objective, nf) + ',' + std::to_string(r.iterations) + ',' + (r.converged ? "true" : "false") +
           ',' + (r.ks_statistic ? number(*r.ks_statistic, nf) : std::string()) + ',' +
           number(r.start_point.lambda3, nf) + ',' + number(r.start_point.lambda4, nf) + '\n';
  }
  return out;
}

std::string to_csv(const BoundaryPolygon& b, const NumberFormat& nf) {
  std::string out = "region,tau3,tau4\n";
  const std::string region(to_string(b.region));
  for (const auto& v : b.vertices) out += region + ',' + number(v.tau3, nf) + ',' + number(v.tau4, nf) + '\n';
  return out;
}

std::string to_csv(const ContourSet& c, const NumberFormat& nf) {
  std::string out = "region,statistic,level,polyline,lambda3,lambda4,tau3,tau4\n";
  const std::string prefix = std::string(to_string(c.region)) + ',' + std::string(statistic_name(c.statistic)) + ',';
  for (std::size_t k = 0; k < c.levels.size(); ++k) {
    for (std::size_t l = 0; l < c.polylines[k].size(); ++l) {
      for (const auto& p : c.polylines[k][l]) {
        const TauPair t = shape_ratios(p);
        out += prefix + number(c.levels[k], nf) + ',' + std::to_string(l) + ',' + number(p.lambda3, nf) + ',' +
               number(p.lambda4, nf) + ',' + number(t.tau3, nf) + ',' + number(t.tau4, nf) + '\n';
      }
    }
  }
  return out;
}

std::string to_csv(const std::vector<CensusSolution>& cs, const NumberFormat& nf) {
  std::string out = "region,lambda1,lambda2,lambda3,lambda4,tau3,tau4,tau5,tau6,objective\n";
  for (const auto& c : cs) {
    const LMomentSet m = gld_lmoments(c.standardized, 6);
    out += std::string(to_string(c.region)) + ',' + number(c.standardized.lambda1, nf) + ',' +
           number(c.standardized.lambda2, nf) + ',' + number(c.shape.lambda3, nf) + ',' +
           number(c.shape.lambda4, nf) + ',' + number(c.achieved.tau3, nf) + ',' + number(c.achieved.tau4, nf) + ',' +
           number(m.ratio(5), nf) + ',' + number(m.ratio(6), nf) + ',' + number(c.objective, nf) + '\n';
  }
  return out;
}

std::string atlas_csv(const LambdaGrid& g, const TauGrid& t, const NumberFormat& nf) {
  std::string out = "region,lambda3,lambda4,tau3,tau4\n";
  const std::string region(to_string(g.region));
  for (std::size_t i = 0; i < t.n3; ++i)
    for (std::size_t k = 0; k < t.n4; ++k) {
      if (!t.valid(i, k)) continue;
      const TauPair p = t.at(i, k);
      out += region + ',' + number(g.lambda3_axis[i], nf) + ',' + number(g.lambda4_axis[k], nf) + ',' +
             number(p.tau3, nf) + ',' + number(p.tau4, nf) + '\n';
    }
  return out;
}

}  // namespace gldlmom::io
