#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "gldlmom/atlas.hpp"
#include "gldlmom/error.hpp"
#include "gldlmom/fitting.hpp"
#include "gldlmom/gld.hpp"
#include "gldlmom/io.hpp"
#include "gldlmom/lmoments.hpp"
#include "gldlmom/simbench.hpp"
#include "json.hpp"

namespace gldlmom::cli {

namespace {

using nlohmann::json;

json num(double v) {
  if (std::isfinite(v)) return v;
  return io::number(v);
}

GldParams parse_params(const std::string& text) {
  const auto v = io::parse_list(text);
  if (v.size() != 4) throw Error(ErrorKind::ParseError, "--lambda needs four comma-separated values l1,l2,l3,l4");
  return {v[0], v[1], v[2], v[3]};
}

ShapePair parse_shape(const std::string& text) {
  const auto v = io::parse_list(text);
  if (v.size() != 2) throw Error(ErrorKind::ParseError, "--start needs two comma-separated values l3,l4");
  return {v[0], v[1]};
}

std::string envelope_dump(const char* kind, json body) {
  json j{{"format", std::string("gldlmom/") + kind}, {"version", io::kFormatVersion}};
  j.update(body);
  return j.dump(2) + "\n";
}

// Aligns CSV columns for the table format.
std::string as_table(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::size_t> width;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (width.size() < cells.size()) width.resize(cells.size(), 0);
    for (std::size_t c = 0; c < cells.size(); ++c) width[c] = std::max(width[c], cells[c].size());
    rows.push_back(std::move(cells));
  }
  std::string out;
  for (const auto& cells : rows) {
    std::string text;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      text += cells[c];
      if (c + 1 < cells.size()) text += std::string(width[c] - cells[c].size() + 2, ' ');
    }
    out += text + '\n';
  }
  return out;
}

struct Rendered {
  std::string json;
  std::string csv;
  std::optional<std::string> table;  // defaults to the aligned CSV
};

struct Globals {
  std::string format;
  int digits = -1;
  std::string output;
};

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"L-moments of the generalized lambda distribution", "gldlmom"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  if (const char* env = std::getenv("GLDLMOM_FORMAT")) g.format = env;
  if (g.format.empty()) g.format = "json";
  app.add_option("--format", g.format, "csv, json or table (default from GLDLMOM_FORMAT, else json)");
  app.add_option("--digits", g.digits, "significant digits in csv/table output (default: shortest exact)")
      ->check(CLI::Range(1, 17));
  app.add_option("--output,-o", g.output, "write to this file instead of standard output");

  std::function<Rendered()> action;
  std::string lambda, u_list, x_list, region_text, levels_text, statistic = "tau3", data_path;
  std::string sim_lambda = "0,0.19,0.14,0.14";
  std::vector<std::string> starts;
  int order = 4;
  double tau3 = 0.0, tau4 = 0.0;
  std::size_t resolution = 512, raster = 2048, seed_resolution = 96, n = 0, sim_n = 1000, reps = 1000;
  std::uint64_t seed = 1;
  bool boundary = false, no_symmetric = false, best_objective = false, serial = false;
  int max_iter = 2000;
  double tol = 1e-10;

  auto* eval = app.add_subcommand("eval", "quantile function, or cdf and density");
  eval->add_option("--lambda", lambda, "l1,l2,l3,l4")->required();
  eval->add_option("--u", u_list, "probabilities, comma-separated: emit Q(u) and q(u)");
  eval->add_option("--x", x_list, "points, comma-separated: emit F(x) and f(x)");
  eval->callback([&] {
    action = [&] {
      if (u_list.empty() == x_list.empty()) throw Error(ErrorKind::ParseError, "eval needs exactly one of --u or --x");
      const GldParams p = parse_params(lambda);
      require_valid(p);
      const bool by_u = !u_list.empty();
      const auto pts = io::parse_list(by_u ? u_list : x_list);
      const io::NumberFormat nf{g.digits};
      Rendered r;
      json rows = json::array();
      r.csv = by_u ? "u,quantile,quantile_density\n" : "x,cdf,pdf\n";
      for (double v : pts) {
        double a, b;
        if (by_u) {
          if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::DomainError, "--u values must lie in [0, 1]");
          a = quantile(p, v);
          b = quantile_density(p, v);
          rows.push_back({{"u", num(v)}, {"quantile", num(a)}, {"quantile_density", num(b)}});
        } else {
          a = cdf(p, v);
          b = pdf(p, v);
          rows.push_back({{"x", num(v)}, {"cdf", num(a)}, {"pdf", num(b)}});
        }
        r.csv += io::number(v, nf) + ',' + io::number(a, nf) + ',' + io::number(b, nf) + '\n';
      }
      r.json = envelope_dump("eval", {{"rows", rows}});
      return r;
    };
  });

  auto* lmom = app.add_subcommand("lmom", "closed-form L-moments");
  lmom->add_option("--lambda", lambda, "l1,l2,l3,l4")->required();
  lmom->add_option("--order", order, "highest order (2..)")->check(CLI::Range(2, 60));
  lmom->callback([&] {
    action = [&] {
      const LMomentSet m = gld_lmoments(parse_params(lambda), order);
      return Rendered{io::to_json(m), io::to_csv(m, {g.digits}), {}};
    };
  });

  auto* sym = app.add_subcommand("solve-symmetric", "lambda3 = lambda4 values with a given tau4");
  sym->add_option("--tau4", tau4, "target L-kurtosis")->required();
  sym->callback([&] {
    action = [&] {
      const SymmetricSolution s = solve_symmetric(tau4);
      return Rendered{io::to_json(s), io::to_csv(s, {g.digits}), {}};
    };
  });

  auto* validate_cmd = app.add_subcommand("validate", "check that parameters define a distribution");
  validate_cmd->add_option("--lambda", lambda, "l1,l2,l3,l4")->required();
  validate_cmd->callback([&] {
    action = [&] {
      const GldParams p = parse_params(lambda);
      require_valid(p);
      const RegionTag tag = classify_region(p);
      const std::string region(to_string(tag.region));
      const char* exist = tag.lmoments_exist ? "true" : "false";
      return Rendered{
          envelope_dump("validation", {{"valid", true}, {"region", region}, {"lmoments_exist", tag.lmoments_exist}}),
          "valid,region,lmoments_exist\ntrue," + region + ',' + exist + '\n',
          {}};
    };
  });

  auto* atlas = app.add_subcommand("atlas", "(tau3, tau4) images of a region's lambda grid");
  atlas->add_option("--region", region_text, "R3, R4, R5 or R6")->required();
  atlas->add_option("--resolution", resolution, "nodes per axis")->check(CLI::Range(16, 8192));
  atlas->add_flag("--boundary", boundary, "emit the boundary polygon instead of the points");
  atlas->add_option("--raster", raster, "raster size for boundary assembly")->check(CLI::Range(64, 16384));
  atlas->callback([&] {
    action = [&] {
      const LambdaGrid grid = build_grid(parse_region(region_text), {resolution, resolution});
      const TauGrid t = map_grid(grid);
      if (!boundary) return Rendered{io::atlas_json(grid, t), io::atlas_csv(grid, t, {g.digits}), {}};
      const auto cands = potential_boundary_points(t);
      const BoundaryPolygon b = assemble_boundary(cands, t, {raster});
      return Rendered{io::to_json(b), io::to_csv(b, {g.digits}), {}};
    };
  });

  auto* contour = app.add_subcommand("contour", "level curves of tau3 or tau4 in the lambda plane");
  contour->add_option("--region", region_text, "R3, R4, R5 or R6")->required();
  contour->add_option("--statistic", statistic, "tau3 or tau4")->check(CLI::IsMember({"tau3", "tau4"}));
  contour->add_option("--levels", levels_text, "comma-separated levels")->required();
  contour->add_option("--resolution", resolution, "nodes per axis")->check(CLI::Range(16, 8192));
  contour->callback([&] {
    action = [&] {
      const LambdaGrid grid = build_grid(parse_region(region_text), {resolution, resolution});
      const auto levels = io::parse_list(levels_text);
      const ContourSet c = contours(grid, statistic == "tau3" ? Statistic::Tau3 : Statistic::Tau4, levels);
      return Rendered{io::to_json(c), io::to_csv(c, {g.digits}), {}};
    };
  });

  auto* census = app.add_subcommand("census", "every shape pair with the given (tau3, tau4)");
  census->add_option("--tau3", tau3, "L-skewness")->required();
  census->add_option("--tau4", tau4, "L-kurtosis")->required();
  census->add_option("--seed-resolution", seed_resolution, "coarse grid per axis")->check(CLI::Range(16, 1024));
  census->callback([&] {
    action = [&] {
      CensusOptions opt;
      opt.seed_resolution = seed_resolution;
      const auto sols = solution_census(tau3, tau4, opt);
      return Rendered{io::to_json(sols), io::to_csv(sols, {g.digits}), {}};
    };
  });

  auto* fit_cmd = app.add_subcommand("fit", "method-of-L-moments fit to a data file");
  fit_cmd->add_option("--data", data_path, "file with one number per line, or - for standard input")->required();
  fit_cmd->add_option("--start", starts, "extra start l3,l4 (repeatable)");
  fit_cmd->add_flag("--no-symmetric", no_symmetric, "skip the symmetric-root starts");
  fit_cmd->add_option("--max-iter", max_iter, "Nelder-Mead iteration limit")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--tol", tol, "Nelder-Mead stopping tolerance")->check(CLI::PositiveNumber);
  fit_cmd->callback([&] {
    action = [&] {
      std::vector<double> data;
      if (data_path == "-") {
        data = io::read_numbers(in);
      } else {
        std::ifstream file(data_path);
        if (!file) throw Error(ErrorKind::ParseError, "cannot open data file '" + data_path + "'");
        data = io::read_numbers(file);
      }
      FitStrategy s;
      s.symmetric_starts = !no_symmetric;
      for (const auto& text : starts) s.extra_starts.push_back(parse_shape(text));
      s.nelder_mead.max_iter = max_iter;
      s.nelder_mead.tol = tol;
      const auto results = fit(data, s);
      if (results.empty()) throw Error(ErrorKind::NoConvergence, "no start produced a valid fit");
      return Rendered{io::to_json(results), io::to_csv(results, {g.digits}), {}};
    };
  });

  auto* sample_cmd = app.add_subcommand("sample", "inverse-transform sample");
  sample_cmd->add_option("--lambda", lambda, "l1,l2,l3,l4")->required();
  sample_cmd->add_option("--n", n, "sample size")->required()->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  sample_cmd->add_option("--seed", seed, "64-bit seed");
  sample_cmd->callback([&] {
    action = [&] {
      const auto xs = sample(parse_params(lambda), n, seed);
      Rendered r;
      json values = json::array();
      r.csv = "x\n";
      for (double x : xs) {
        values.push_back(num(x));
        r.csv += io::number(x, {g.digits}) + '\n';
      }
      r.json = envelope_dump("sample", {{"seed", seed}, {"values", values}});
      return r;
    };
  });

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo study of the L-moment estimator");
  simulate->add_option("--lambda", sim_lambda, "generator l1,l2,l3,l4 (default 0,0.19,0.14,0.14)");
  simulate->add_option("--n", sim_n, "observations per replication")->check(CLI::Range(10, 100000000));
  simulate->add_option("--replications", reps, "number of data sets")->check(CLI::Range(2, 100000000));
  simulate->add_option("--seed", seed, "64-bit seed");
  simulate->add_flag("--best-objective", best_objective, "keep the lowest-objective fit, not the smaller start");
  simulate->add_flag("--serial", serial, "run replications on one thread");
  simulate->callback([&] {
    action = [&] {
      SimConfig c;
      c.generator = parse_params(sim_lambda);
      c.sample_size = sim_n;
      c.replications = reps;
      c.seed = seed;
      c.report_smaller_start = !best_objective;
      const SimReport r = serial ? run_simulation_serial(c) : run_simulation(c);
      return Rendered{format_report(r, ReportLayout::Json), format_report(r, ReportLayout::Csv, g.digits),
                      format_report(r, ReportLayout::Table2, g.digits)};
    };
  });

  std::vector<const char*> argv{"gldlmom"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const io::Format format = io::parse_format(g.format);
    const Rendered r = action();
    const std::string text = format == io::Format::Json  ? r.json
                             : format == io::Format::Csv ? r.csv
                                                         : r.table.value_or(as_table(r.csv));
    if (g.output.empty()) {
      out << text;
    } else {
      std::ofstream file(g.output);
      if (!file || !(file << text)) throw Error(ErrorKind::ParseError, "cannot write '" + g.output + "'");
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_numerical() ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace gldlmom::cli
