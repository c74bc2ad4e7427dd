#pragma once

// CSV ingestion for void catalogues and the flat JSON fit report.
//
// Dialect: comma-separated, '#' comment lines and blank lines ignored, and an
// optional header row recognised by a non-numeric first token on the first
// data row.

#include <charconv>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "voidgeom/errors.hpp"
#include "voidgeom/gamma_model.hpp"
#include "voidgeom/void_diameter.hpp"

namespace voidgeom::io {

enum class InputFormat { raw_diameters, raw_volumes, histogram };

inline std::string_view to_string(InputFormat f) {
  switch (f) {
    case InputFormat::raw_diameters:
      return "diameters";
    case InputFormat::raw_volumes:
      return "volumes";
    case InputFormat::histogram:
      return "histogram";
  }
  return "unknown";
}

struct InputSpec {
  std::string path;
  InputFormat format = InputFormat::raw_diameters;
  /// Multiplier on lengths; volumes scale by its cube.
  double unit_scale = 1.0;
};

/// A parsed data row with its 1-based source line.
struct CsvRow {
  std::size_t line = 0;
  std::vector<double> fields;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline bool parse_double(std::string_view token, double& out) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                     : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

/// Reads every data row, requiring at least `min_columns` numeric fields.
/// Extra columns are kept. Throws ParseError naming the offending line.
inline std::vector<CsvRow> read_csv(std::istream& in, std::size_t min_columns,
                                    const std::string& source = "input") {
  std::vector<CsvRow> rows;
  std::string raw;
  std::size_t line_no = 0;
  bool first_data_row = true;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto tokens = detail::split(line);
    double probe = 0.0;
    if (first_data_row && !detail::parse_double(tokens.front(), probe)) {
      first_data_row = false;  // header
      continue;
    }
    first_data_row = false;
    if (tokens.size() < min_columns) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": expected " +
                           std::to_string(min_columns) + " column(s), found " +
                           std::to_string(tokens.size()),
                       line_no);
    }
    CsvRow row{line_no, {}};
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      double v = 0.0;
      if (!detail::parse_double(tokens[i], v)) {
        if (i >= min_columns && detail::trim(tokens[i]).empty()) continue;
        throw ParseError(source + ":" + std::to_string(line_no) + ": field " +
                             std::to_string(i + 1) + " is not a finite number: '" +
                             std::string(detail::trim(tokens[i])) + "'",
                         line_no);
      }
      row.fields.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(source + ": no data rows", 0);
  return rows;
}

using Dataset = std::variant<VolumeSample, DiameterSample, HistogramData>;

struct LoadedInput {
  Dataset data;
  std::vector<std::string> warnings;
};

inline constexpr double kFractionSumWarning = 1e-6;

/// Parses a dataset of the given format from a stream, applying unit_scale.
inline LoadedInput parse_input(std::istream& in, InputFormat format, double unit_scale,
                               const std::string& source = "input") {
  if (!(unit_scale > 0.0) || !std::isfinite(unit_scale)) {
    throw ParseError("unit scale must be positive", 0);
  }
  const auto positive = [&](const CsvRow& row, double v, const char* what) {
    if (!(v > 0.0)) {
      throw ParseError(source + ":" + std::to_string(row.line) + ": " + what + " must be positive",
                       row.line);
    }
  };

  LoadedInput out;
  if (format == InputFormat::histogram) {
    const auto rows = read_csv(in, 2, source);
    std::vector<double> centers;
    std::vector<double> fractions;
    for (const auto& row : rows) {
      positive(row, row.fields[0], "class centre");
      if (row.fields[1] < 0.0) {
        throw ParseError(source + ":" + std::to_string(row.line) + ": fraction must be non-negative",
                         row.line);
      }
      if (!centers.empty() && !(row.fields[0] * unit_scale > centers.back()) &&
          row.fields[0] * unit_scale != centers.front()) {
        throw ParseError(source + ":" + std::to_string(row.line) +
                             ": class centres must be strictly increasing",
                         row.line);
      }
      centers.push_back(row.fields[0] * unit_scale);
      fractions.push_back(row.fields[1]);
    }
    HistogramData hist(std::move(centers), std::move(fractions));
    if (std::abs(hist.raw_sum() - 1.0) > kFractionSumWarning) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "fractions sum to " << hist.raw_sum() << "; rescaled to 1";
      out.warnings.push_back(msg.str());
    }
    out.data = std::move(hist);
    return out;
  }

  const auto rows = read_csv(in, 1, source);
  std::vector<double> values;
  values.reserve(rows.size());
  const double factor = format == InputFormat::raw_volumes
                            ? unit_scale * unit_scale * unit_scale
                            : unit_scale;
  for (const auto& row : rows) {
    positive(row, row.fields[0], format == InputFormat::raw_volumes ? "volume" : "diameter");
    values.push_back(row.fields[0] * factor);
  }
  if (format == InputFormat::raw_volumes) {
    out.data = VolumeSample(std::move(values));
  } else {
    out.data = DiameterSample(std::move(values));
  }
  return out;
}

inline LoadedInput load_input(const InputSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw ParseError("cannot open " + spec.path, 0);
  return parse_input(in, spec.format, spec.unit_scale, spec.path);
}

using ReportDocument = nlohmann::ordered_json;

inline constexpr std::string_view kToolName = "voidgeom";
inline constexpr std::string_view kToolVersion = "1.0.0";

struct ReportContext {
  std::string input_path;
  InputFormat format = InputFormat::raw_diameters;
  double unit_scale = 1.0;
  std::string method;
  std::uint64_t seed = 0;
  std::string timestamp;
};

/// Flat key-value document of a fit; key order is fixed.
inline ReportDocument make_report(const FitReport& fit, const ReportContext& ctx) {
  ReportDocument doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["generated_at"] = ctx.timestamp;
  doc["input_path"] = ctx.input_path;
  doc["input_format"] = to_string(ctx.format);
  doc["unit_scale"] = ctx.unit_scale;
  doc["method"] = ctx.method;
  doc["seed"] = ctx.seed;
  doc["mu"] = fit.params.mu;
  doc["beta"] = fit.params.beta;
  doc["label"] = to_string(fit.label);
  doc["entropy"] = fit.entropy;
  doc["entropy_deficit"] = fit.entropy_deficit;
  doc["log_likelihood"] = fit.log_likelihood;
  doc["solver_residual"] = fit.solver_residual;
  doc["iterations"] = fit.iterations;
  doc["sample_count"] = fit.sample_count;
  doc["sample_mean"] = fit.sample_mean;
  doc["sample_cv"] = fit.sample_cv;
  return doc;
}

inline std::string serialize(const ReportDocument& doc) { return doc.dump(2) + "\n"; }

inline ReportDocument parse_report(std::string_view text) {
  return ReportDocument::parse(text.begin(), text.end());
}

}  // namespace voidgeom::io
