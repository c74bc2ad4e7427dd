#pragma once

// voidgeom command-line front end. `run` is the whole program behind main(),
// taking its streams as parameters so the test suite can drive it in-process.
//
// Exit statuses: 0 success, 2 parse/usage, 3 degenerate data, 4 CV out of
// range, 5 geodesic failure.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "voidgeom/voidgeom.hpp"

namespace voidgeom::cli {

enum ExitStatus : int {
  kOk = 0,
  kUsage = 2,
  kDegenerate = 3,
  kOutOfRange = 4,
  kGeodesic = 5,
};

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Writes `text` to `path`, or to `fallback` when path is empty.
inline void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ParseError("cannot write " + path, 0);
  file << text;
}

struct FitArgs {
  std::string input;
  std::string format;
  std::string method;
  double unit_scale = 1.0;
  std::uint64_t seed = 0;
  std::string output;
};

struct PdfTableArgs {
  double mu = 1.0;
  double beta = 1.0;
  std::string variable = "volume";
  std::vector<double> range;
  int points = 0;
  std::string output;
};

struct GeometryArgs {
  std::string query;
  std::vector<double> values;
  std::string output;
};

struct SampleArgs {
  double mu = 1.0;
  double beta = 1.0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::string format = "volumes";
  std::string output;
};

inline int run_fit(const FitArgs& args, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, io::InputFormat> formats = {
      {"diameters", io::InputFormat::raw_diameters},
      {"volumes", io::InputFormat::raw_volumes},
      {"histogram", io::InputFormat::histogram}};
  const auto format = formats.at(args.format);
  std::string method = args.method;
  if (method.empty()) method = format == io::InputFormat::raw_volumes ? "mle" : "cv";
  if (method == "mle" && format != io::InputFormat::raw_volumes) {
    err << "fit: --method mle requires --format volumes\n";
    return kUsage;
  }
  if (method == "cv" && format == io::InputFormat::raw_volumes) {
    err << "fit: --method cv requires --format diameters or histogram\n";
    return kUsage;
  }

  const auto loaded = io::load_input({args.input, format, args.unit_scale});
  for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";

  FitReport fit;
  if (const auto* volumes = std::get_if<VolumeSample>(&loaded.data)) {
    fit = mle_fit(*volumes);
  } else if (const auto* diameters = std::get_if<DiameterSample>(&loaded.data)) {
    fit = fit_diameter_data(*diameters);
  } else {
    fit = fit_diameter_data(std::get<HistogramData>(loaded.data));
  }

  out << "method:          " << (method == "mle" ? "maximum likelihood (volumes)"
                                                 : "coefficient of variation (diameters)")
      << "\n"
      << "observations:    " << fit.sample_count << "\n"
      << "sample mean:     " << format_real(fit.sample_mean) << "\n"
      << "sample cv:       " << format_real(fit.sample_cv) << "\n"
      << "mu:              " << format_real(fit.params.mu) << "\n"
      << "beta:            " << format_real(fit.params.beta) << "\n"
      << "entropy:         " << format_real(fit.entropy) << "\n"
      << "entropy deficit: " << format_real(fit.entropy_deficit) << "\n"
      << "label:           " << to_string(fit.label) << "\n";

  io::ReportContext ctx{args.input, format, args.unit_scale, method, args.seed, utc_timestamp()};
  emit(args.output, io::serialize(io::make_report(fit, ctx)), out);
  return kOk;
}

inline int run_pdf_table(const PdfTableArgs& args, std::ostream& out, std::ostream& err) {
  if (args.range.size() != 2 || !(args.range[0] > 0.0) || !(args.range[1] > args.range[0])) {
    err << "pdf-table: --range requires 0 < LO < HI\n";
    return kUsage;
  }
  if (args.points < 2) {
    err << "pdf-table: --points must be at least 2\n";
    return kUsage;
  }
  const GammaParams params{args.mu, args.beta};
  const bool diameter = args.variable == "diameter";
  std::string table = "x,density\n";
  const double lo = args.range[0];
  const double hi = args.range[1];
  for (int i = 0; i < args.points; ++i) {
    const double x = i + 1 == args.points ? hi : lo + (hi - lo) * i / (args.points - 1);
    const double y = diameter ? diameter_pdf(x, params) : gamma_pdf(x, params);
    table += format_real(x) + "," + format_real(y) + "\n";
  }
  emit(args.output, table, out);
  return kOk;
}

inline int run_geometry(const GeometryArgs& args, std::ostream& out, std::ostream& err) {
  using namespace geometry;
  const auto& v = args.values;
  const auto need = [&](std::size_t lo, std::size_t hi) {
    if (v.size() < lo || v.size() > hi) {
      err << "geometry " << args.query << ": expected " << lo
          << (lo == hi ? "" : "-" + std::to_string(hi)) << " numeric arguments, got " << v.size()
          << "\n";
      return false;
    }
    return true;
  };

  if (args.query == "curvature") {
    if (!need(1, 1)) return kUsage;
    emit(args.output, format_real(gaussian_curvature(v[0])) + "\n", out);
    return kOk;
  }
  if (args.query == "entropy") {
    if (!need(2, 2)) return kUsage;
    emit(args.output, format_real(shannon_entropy({v[0], v[1]})) + "\n", out);
    return kOk;
  }
  if (args.query == "distance") {
    if (!need(4, 4)) return kUsage;
    const ManifoldPoint p{v[0], v[1]};
    const ManifoldPoint q{v[2], v[3]};
    require_in_chart(p, "distance");
    require_in_chart(q, "distance");
    try {
      emit(args.output, format_real(geodesic_distance(p, q)) + "\n", out);
    } catch (const NoConvergenceError& e) {
      err << e.what() << "\n";
      out << "upper_bound," << format_real(e.upper_bound()) << "\n";
      return kGeodesic;
    }
    return kOk;
  }
  if (args.query == "shoot") {
    // mu beta d_mu d_beta t_end [steps]
    if (!need(5, 6)) return kUsage;
    const int steps = v.size() == 6 ? static_cast<int>(v[5]) : 1000;
    GeodesicPath path;
    try {
      path = geodesic_shoot({v[0], v[1]}, {v[2], v[3]}, v[4], steps);
    } catch (const BoundaryError& e) {
      err << e.what() << " (last valid t = " << format_real(e.last_valid().t) << ")\n";
      return kGeodesic;
    }
    std::string table = "t,mu,beta\n";
    for (const auto& s : path.samples) {
      table += format_real(s.t) + "," + format_real(s.point.mu) + "," + format_real(s.point.beta) +
               "\n";
    }
    emit(args.output, table, out);
    err << "length " << format_real(path.length) << ", energy " << format_real(path.energy) << "\n";
    return kOk;
  }
  err << "geometry: unknown query '" << args.query << "'\n";
  return kUsage;
}

inline int run_sample(const SampleArgs& args, std::ostream& out, std::ostream&) {
  const auto sample = sample_gamma({args.mu, args.beta}, args.count, args.seed);
  const bool diameters = args.format == "diameters";
  std::string text = diameters ? "diameter\n" : "volume\n";
  for (double x : sample.values()) {
    text += format_real(diameters ? volume_to_diameter(x) : x) + "\n";
  }
  emit(args.output, text, out);
  return kOk;
}

inline int run(std::vector<std::string> argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gamma-family void statistics and information geometry", "voidgeom"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the gamma void model to catalogue data");
  fit_cmd->add_option("--input", fit.input, "CSV input file")->required();
  fit_cmd->add_option("--format", fit.format, "Input layout")
      ->required()
      ->check(CLI::IsMember({"diameters", "volumes", "histogram"}));
  fit_cmd->add_option("--method", fit.method, "mle (volumes) or cv (diameters, histogram)")
      ->check(CLI::IsMember({"mle", "cv"}));
  fit_cmd->add_option("--unit-scale", fit.unit_scale, "Multiplier applied to lengths on ingest")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--seed", fit.seed, "Recorded in the report");
  fit_cmd->add_option("--output", fit.output, "Report path (default: standard output)");

  PdfTableArgs table;
  auto* table_cmd = app.add_subcommand("pdf-table", "Tabulate the volume or diameter density");
  table_cmd->add_option("--mu", table.mu)->required();
  table_cmd->add_option("--beta", table.beta)->required();
  table_cmd->add_option("--variable", table.variable)
      ->check(CLI::IsMember({"volume", "diameter"}));
  table_cmd->add_option("--range", table.range, "LO HI")->required()->expected(2);
  table_cmd->add_option("--points", table.points)->required();
  table_cmd->add_option("--output", table.output);

  GeometryArgs geo;
  auto* geo_cmd = app.add_subcommand(
      "geometry",
      "curvature BETA | entropy MU BETA | distance MU1 BETA1 MU2 BETA2 | "
      "shoot MU BETA DMU DBETA T_END [STEPS]");
  geo_cmd->add_option("query", geo.query)
      ->required()
      ->check(CLI::IsMember({"curvature", "entropy", "distance", "shoot"}));
  geo_cmd->add_option("values", geo.values);
  geo_cmd->add_option("--output", geo.output);

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw seeded synthetic void volumes or diameters");
  sample_cmd->add_option("--mu", sample.mu)->required();
  sample_cmd->add_option("--beta", sample.beta)->required();
  sample_cmd->add_option("--count", sample.count)->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", sample.seed);
  sample_cmd->add_option("--format", sample.format)->check(CLI::IsMember({"volumes", "diameters"}));
  sample_cmd->add_option("--output", sample.output);

  try {
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*fit_cmd) return run_fit(fit, out, err);
    if (*table_cmd) return run_pdf_table(table, out, err);
    if (*geo_cmd) return run_geometry(geo, out, err);
    if (*sample_cmd) return run_sample(sample, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DegenerateSampleError& e) {
    err << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const InconsistencyError& e) {
    err << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const OutOfRangeError& e) {
    err << "error: " << e.what() << "\n";
    return kOutOfRange;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace voidgeom::cli
