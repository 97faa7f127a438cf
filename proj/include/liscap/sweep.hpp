#pragma once

/// Sweep grids, per-point report rows and their CSV/JSON rendering.
///
/// Output is deterministic: doubles are printed with 12 significant digits
/// via the C locale ("%.12g"), column order is fixed, and identical inputs
/// render byte-identical text.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "liscap/analysis.hpp"
#include "liscap/core_model.hpp"
#include "liscap/hwi_noise.hpp"

namespace liscap {

enum class SweepVariable { half_length, area, tau, m_units };
enum class SweepScale { linear, logarithmic };

struct SweepSpec {
  SweepVariable variable;
  double lo;
  double hi;
  int steps;
  SweepScale scale = SweepScale::linear;

  void validate() const {
    if (!(lo < hi)) throw std::invalid_argument("sweep: lo must be < hi");
    if (steps < 2) throw std::invalid_argument("sweep: steps must be >= 2");
    if (variable != SweepVariable::m_units && !(lo > 0.0))
      throw std::invalid_argument("sweep: geometric variables must be > 0");
    if (scale == SweepScale::logarithmic && !(lo > 0.0))
      throw std::invalid_argument("sweep: log scale needs lo > 0");
    if (variable == SweepVariable::m_units) {
      if (scale == SweepScale::logarithmic)
        throw std::invalid_argument("sweep: m_units sweeps are linear");
      for (double v : points())
        if (v != static_cast<long long>(v) || v < 1.0)
          throw std::invalid_argument("sweep: m_units grid must hit positive integers");
    }
  }

  std::vector<double> points() const {
    std::vector<double> pts(static_cast<std::size_t>(steps));
    if (scale == SweepScale::logarithmic) {
      const double ratio = hi / lo;
      for (int i = 0; i < steps; ++i)
        pts[static_cast<std::size_t>(i)] =
            lo * std::pow(ratio, static_cast<double>(i) / (steps - 1));
      pts.back() = hi;
    } else {
      const double step = (hi - lo) / (steps - 1);
      for (int i = 0; i < steps; ++i)
        pts[static_cast<std::size_t>(i)] = lo + step * i;
      pts.back() = hi;
    }
    return pts;
  }
};

/// One sweep point. m_units is only meaningful for split sweeps.
struct OutputRow {
  double a;
  double tau;
  double area;
  double zeta;
  double n_eff;
  double sigma;
  double sigma_db;
  double capacity_nat;
  double utility;
  double gamma0;
  std::optional<int> m_units;
};

inline OutputRow row_from_report(const SurfaceGeometry& geom,
                                 const CapacityReport& report,
                                 std::optional<int> m_units = std::nullopt) {
  OutputRow row{};
  row.a = geom.half_length_a;
  row.tau = geom.tau;
  row.area = geom.area;
  row.zeta = report.zeta;
  row.n_eff = report.noise.total;
  row.sigma = report.sigma;
  row.sigma_db = 10.0 * std::log10(report.sigma);
  row.capacity_nat = report.capacity_nat;
  row.utility = report.utility;
  row.gamma0 = report.utility_upper_bound;
  row.m_units = m_units;
  return row;
}

/// Rows over a geometric sweep variable (half_length, area or tau).
inline std::vector<OutputRow> sweep_rows(const SystemConfig& cfg,
                                         const HwiModel& model,
                                         NoiseMethod method,
                                         const SweepSpec& spec,
                                         const QuadratureSettings& quad = {}) {
  spec.validate();
  if (spec.variable == SweepVariable::m_units)
    throw std::invalid_argument("sweep_rows: m_units sweeps go through split_rows");
  std::vector<OutputRow> rows;
  rows.reserve(static_cast<std::size_t>(spec.steps));
  for (double v : spec.points()) {
    SurfaceGeometry geom =
        spec.variable == SweepVariable::half_length
            ? SurfaceGeometry::from_half_length(v, cfg.z0)
            : (spec.variable == SweepVariable::area
                   ? SurfaceGeometry::from_area(v, cfg.z0)
                   : SurfaceGeometry::from_tau(v, cfg.z0));
    rows.push_back(row_from_report(geom, capacity(cfg, geom, model, method, quad)));
  }
  return rows;
}

/// Rows over the number of LIS-Units at fixed parent geometry.
inline std::vector<OutputRow> split_rows(const SystemConfig& cfg,
                                         const HwiModel& model,
                                         const SurfaceGeometry& parent,
                                         const SweepSpec& spec) {
  spec.validate();
  if (spec.variable != SweepVariable::m_units)
    throw std::invalid_argument("split_rows: sweep variable must be m_units");
  std::vector<OutputRow> rows;
  rows.reserve(static_cast<std::size_t>(spec.steps));
  for (double v : spec.points()) {
    const int m = static_cast<int>(v);
    const SplitConfig split{m, parent};
    rows.push_back(row_from_report(parent, split_capacity(cfg, split, model), m));
  }
  return rows;
}

enum class OutputFormat { csv, json };

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline void append_json_number(std::string& out, double v) {
  if (std::isinf(v)) {
    out += v > 0 ? "\"inf\"" : "\"-inf\"";
  } else {
    out += format_double(v);
  }
}

}  // namespace detail

inline std::string render_csv(const std::vector<OutputRow>& rows,
                              const std::string& capacity_header = "capacity_nat") {
  const bool with_m = !rows.empty() && rows.front().m_units.has_value();
  std::string out = "A,tau,area,zeta,n_eff,sigma,sigma_db," + capacity_header +
                    ",utility,gamma0";
  if (with_m) out += ",m_units";
  out += '\n';
  for (const OutputRow& r : rows) {
    out += detail::format_double(r.a);
    out += ',';
    out += detail::format_double(r.tau);
    out += ',';
    out += detail::format_double(r.area);
    out += ',';
    out += detail::format_double(r.zeta);
    out += ',';
    out += detail::format_double(r.n_eff);
    out += ',';
    out += detail::format_double(r.sigma);
    out += ',';
    out += detail::format_double(r.sigma_db);
    out += ',';
    out += detail::format_double(r.capacity_nat);
    out += ',';
    out += detail::format_double(r.utility);
    out += ',';
    out += detail::format_double(r.gamma0);
    if (with_m) {
      out += ',';
      out += std::to_string(*r.m_units);
    }
    out += '\n';
  }
  return out;
}

inline std::string render_json(const std::vector<OutputRow>& rows,
                               const std::string& capacity_header = "capacity_nat") {
  std::string out = "[";
  bool first = true;
  for (const OutputRow& r : rows) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "  {\"A\": ";
    detail::append_json_number(out, r.a);
    out += ", \"tau\": ";
    detail::append_json_number(out, r.tau);
    out += ", \"area\": ";
    detail::append_json_number(out, r.area);
    out += ", \"zeta\": ";
    detail::append_json_number(out, r.zeta);
    out += ", \"n_eff\": ";
    detail::append_json_number(out, r.n_eff);
    out += ", \"sigma\": ";
    detail::append_json_number(out, r.sigma);
    out += ", \"sigma_db\": ";
    detail::append_json_number(out, r.sigma_db);
    out += ", \"" + capacity_header + "\": ";
    detail::append_json_number(out, r.capacity_nat);
    out += ", \"utility\": ";
    detail::append_json_number(out, r.utility);
    out += ", \"gamma0\": ";
    detail::append_json_number(out, r.gamma0);
    if (r.m_units) {
      out += ", \"m_units\": ";
      out += std::to_string(*r.m_units);
    }
    out += "}";
  }
  out += "\n]\n";
  return out;
}

inline std::string render_rows(const std::vector<OutputRow>& rows,
                               OutputFormat format,
                               const std::string& capacity_header = "capacity_nat") {
  return format == OutputFormat::csv ? render_csv(rows, capacity_header)
                                     : render_json(rows, capacity_header);
}

/// Presentation-only conversion of the capacity column to bit/s/Hz.
inline std::vector<OutputRow> capacity_in_bits(std::vector<OutputRow> rows) {
  for (OutputRow& r : rows) r.capacity_nat /= std::numbers::ln2;
  return rows;
}

}  // namespace liscap
