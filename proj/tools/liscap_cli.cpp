/// liscap command line: deterministic sweeps and reports for capacity,
/// utility, SNR loss, turning points, LIS-Unit splitting and the
/// Monte-Carlo matched-filter check.

#include <cctype>
#include <clocale>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "liscap/analysis.hpp"
#include "liscap/core_model.hpp"
#include "liscap/errors.hpp"
#include "liscap/hwi_noise.hpp"
#include "liscap/mc_oracle.hpp"
#include "liscap/sweep.hpp"

namespace {

using liscap::detail::format_double;

struct CommonOpts {
  double z0 = 4.0;
  double n0 = 1.0;
  double power_db = 30.0;
  double alpha = 0.0;
  double beta = 0.0;
  double wavelength = 0.1;
  std::string method = "disk";
  std::string format;  // empty = command default
  std::string out;
  double quad_tol = 1e-8;
  std::uint64_t seed = 12345;
  std::int64_t trials = 10000;
  int resolution = 256;
};

struct PointOpts {
  std::optional<double> half_length;
  std::optional<double> area;
  std::optional<double> tau;
};

struct SweepOpts {
  std::string variable = "area";
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
  bool log_scale = false;
  bool bits = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--z0", o.z0, "User distance z0 [m]");
  cmd->add_option("--n0", o.n0, "Noise PSD N0");
  cmd->add_option("--power-db", o.power_db, "Transmit power [dB]");
  cmd->add_option("--alpha", o.alpha, "HWI variance scale");
  cmd->add_option("--beta", o.beta, "HWI radial exponent");
  cmd->add_option("--wavelength", o.wavelength, "Wavelength [m] (MC only)");
  cmd->add_option("--method", o.method, "Noise method: exact|small-area|disk")
      ->check(CLI::IsMember({"exact", "small-area", "disk"}));
  cmd->add_option("--format", o.format, "Output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "Output path (default stdout)");
  cmd->add_option("--quad-tol", o.quad_tol, "Quadrature relative tolerance");
  cmd->add_option("--seed", o.seed, "RNG seed (MC)");
  cmd->add_option("--trials", o.trials, "MC trials");
  cmd->add_option("--resolution", o.resolution, "MC grid points per axis");
}

void add_point(CLI::App* cmd, PointOpts& p) {
  auto* a = cmd->add_option("--half-length", p.half_length, "Half-length A [m]");
  auto* ar = cmd->add_option("--area", p.area, "Surface-area [m^2]");
  auto* t = cmd->add_option("--tau", p.tau, "Normalized length A/z0");
  a->excludes(ar)->excludes(t);
  ar->excludes(t);
}

void add_sweep(CLI::App* cmd, SweepOpts& s) {
  cmd->add_option("--var", s.variable, "Sweep variable: half-length|area|tau")
      ->check(CLI::IsMember({"half-length", "area", "tau"}));
  cmd->add_option("--lo", s.lo, "Sweep lower bound")->required();
  cmd->add_option("--hi", s.hi, "Sweep upper bound")->required();
  cmd->add_option("--steps", s.steps, "Number of sweep points")->required();
  cmd->add_flag("--log", s.log_scale, "Logarithmic grid");
  cmd->add_flag("--bits", s.bits, "Report capacity in bit/s/Hz instead of nat/s/Hz");
}

liscap::SystemConfig make_config(const CommonOpts& o) {
  return liscap::SystemConfig(liscap::db_to_linear(o.power_db), o.n0, o.z0,
                              o.wavelength);
}

liscap::HwiModel make_model(const CommonOpts& o) {
  return liscap::HwiModel(o.alpha, o.beta);
}

liscap::NoiseMethod parse_method(const std::string& name) {
  if (name == "exact") return liscap::NoiseMethod::exact_quadrature;
  if (name == "small-area") return liscap::NoiseMethod::small_area;
  return liscap::NoiseMethod::disk_closed_form;
}

liscap::QuadratureSettings make_quad(const CommonOpts& o) {
  liscap::QuadratureSettings q;
  q.rel_tol = o.quad_tol;
  q.abs_tol = o.quad_tol * 1e-2;
  return q;
}

liscap::SurfaceGeometry make_geometry(const PointOpts& p, double z0) {
  const int given = static_cast<int>(p.half_length.has_value()) +
                    static_cast<int>(p.area.has_value()) +
                    static_cast<int>(p.tau.has_value());
  if (given != 1)
    throw std::invalid_argument(
        "exactly one of --half-length, --area, --tau is required");
  if (p.half_length) return liscap::SurfaceGeometry::from_half_length(*p.half_length, z0);
  if (p.area) return liscap::SurfaceGeometry::from_area(*p.area, z0);
  return liscap::SurfaceGeometry::from_tau(*p.tau, z0);
}

liscap::SweepSpec make_sweep_spec(const SweepOpts& s) {
  liscap::SweepSpec spec{};
  spec.variable = s.variable == "half-length" ? liscap::SweepVariable::half_length
                  : s.variable == "tau"       ? liscap::SweepVariable::tau
                                              : liscap::SweepVariable::area;
  spec.lo = s.lo;
  spec.hi = s.hi;
  spec.steps = s.steps;
  spec.scale = s.log_scale ? liscap::SweepScale::logarithmic
                           : liscap::SweepScale::linear;
  spec.validate();
  return spec;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file: " + path);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
}

liscap::OutputFormat resolve_format(const CommonOpts& o,
                                    liscap::OutputFormat fallback) {
  if (o.format == "csv") return liscap::OutputFormat::csv;
  if (o.format == "json") return liscap::OutputFormat::json;
  return fallback;
}

// Key/value report rendered as a one-row CSV or a JSON object, preserving
// insertion order. Values arrive pre-formatted.
struct Report {
  std::vector<std::pair<std::string, std::string>> fields;

  void add(const std::string& key, double v) {
    if (std::isinf(v)) {
      fields.emplace_back(key, v > 0 ? "inf" : "-inf");
    } else {
      fields.emplace_back(key, format_double(v));
    }
  }
  void add(const std::string& key, const std::string& v) { fields.emplace_back(key, v); }
  void add(const std::string& key, bool v) { fields.emplace_back(key, v ? "true" : "false"); }
  void add(const std::string& key, std::int64_t v) { fields.emplace_back(key, std::to_string(v)); }

  std::string render(liscap::OutputFormat format) const {
    std::string out;
    if (format == liscap::OutputFormat::csv) {
      for (std::size_t i = 0; i < fields.size(); ++i)
        out += fields[i].first + (i + 1 < fields.size() ? "," : "\n");
      for (std::size_t i = 0; i < fields.size(); ++i)
        out += fields[i].second + (i + 1 < fields.size() ? "," : "\n");
    } else {
      out += "{";
      for (std::size_t i = 0; i < fields.size(); ++i) {
        out += "\n  \"" + fields[i].first + "\": ";
        const std::string& v = fields[i].second;
        const bool quote = !v.empty() && (v == "inf" || v == "-inf" ||
                                          (!std::isdigit(v.front()) && v.front() != '-' &&
                                           v != "true" && v != "false"));
        out += quote ? "\"" + v + "\"" : v;
        out += i + 1 < fields.size() ? "," : "";
      }
      out += "\n}\n";
    }
    return out;
  }
};

int run_sweep_command(const CommonOpts& common, const SweepOpts& sweep) {
  const auto cfg = make_config(common);
  const auto model = make_model(common);
  auto rows = liscap::sweep_rows(cfg, model, parse_method(common.method),
                                 make_sweep_spec(sweep), make_quad(common));
  if (sweep.bits) rows = liscap::capacity_in_bits(std::move(rows));
  write_output(liscap::render_rows(rows, resolve_format(common, liscap::OutputFormat::csv),
                                   sweep.bits ? "capacity_bits" : "capacity_nat"),
               common.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");  // fixed '.' decimal separator in output

  CLI::App app{"Capacity and surface-area utility of a LIS under hardware impairments"};
  app.require_subcommand(1);

  CommonOpts common;
  PointOpts point;
  SweepOpts sweep;
  double bracket_lo = 0.05;
  double bracket_hi = 5.0;
  SweepOpts split_sweep;
  split_sweep.lo = 1;
  split_sweep.hi = 11;
  split_sweep.steps = 11;

  auto* cmd_zeta = app.add_subcommand("zeta", "Array gain: closed form vs quadrature");
  add_common(cmd_zeta, common);
  add_point(cmd_zeta, point);

  auto* cmd_noise = app.add_subcommand("noise", "Effective noise density at one point");
  add_common(cmd_noise, common);
  add_point(cmd_noise, point);

  auto* cmd_cap = app.add_subcommand("capacity-sweep", "Capacity over a geometry sweep");
  add_common(cmd_cap, common);
  add_sweep(cmd_cap, sweep);

  auto* cmd_util = app.add_subcommand("utility-sweep", "Utility over a geometry sweep");
  add_common(cmd_util, common);
  add_sweep(cmd_util, sweep);

  auto* cmd_snr = app.add_subcommand("snr-loss-sweep", "SNR loss over a geometry sweep");
  add_common(cmd_snr, common);
  add_sweep(cmd_snr, sweep);

  auto* cmd_turn = app.add_subcommand("turning-point", "Root of utility = 0 in tau");
  add_common(cmd_turn, common);
  cmd_turn->add_option("--bracket-lo", bracket_lo, "Bracket lower tau");
  cmd_turn->add_option("--bracket-hi", bracket_hi, "Bracket upper tau");

  auto* cmd_split = app.add_subcommand("split", "LIS-Unit splitting sweep over M");
  add_common(cmd_split, common);
  add_point(cmd_split, point);
  cmd_split->add_option("--lo", split_sweep.lo, "Smallest M");
  cmd_split->add_option("--hi", split_sweep.hi, "Largest M");
  cmd_split->add_option("--steps", split_sweep.steps, "Number of M points");

  auto* cmd_mc = app.add_subcommand("validate-mc", "Monte-Carlo check of the noise density");
  add_common(cmd_mc, common);
  add_point(cmd_mc, point);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (*cmd_cap) return run_sweep_command(common, sweep);
    if (*cmd_util) return run_sweep_command(common, sweep);
    if (*cmd_snr) return run_sweep_command(common, sweep);

    const auto cfg = make_config(common);
    const auto model = make_model(common);
    const auto quad = make_quad(common);

    if (*cmd_zeta) {
      const auto geom = make_geometry(point, cfg.z0);
      const double closed = liscap::array_gain_closed(geom.tau);
      const double via_quad = liscap::array_gain_quadrature(
          geom, liscap::UserPosition{0.0, 0.0, cfg.z0}, quad);
      Report rep;
      rep.add("A", geom.half_length_a);
      rep.add("tau", geom.tau);
      rep.add("area", geom.area);
      rep.add("zeta_closed", closed);
      rep.add("zeta_quadrature", via_quad);
      rep.add("abs_gap", std::abs(closed - via_quad));
      write_output(rep.render(resolve_format(common, liscap::OutputFormat::csv)),
                   common.out);
      return 0;
    }

    if (*cmd_noise) {
      const auto geom = make_geometry(point, cfg.z0);
      const auto method = parse_method(common.method);
      const auto breakdown = liscap::effective_noise(cfg, geom, model, method, quad);
      Report rep;
      rep.add("A", geom.half_length_a);
      rep.add("tau", geom.tau);
      rep.add("area", geom.area);
      rep.add("n0", breakdown.n0);
      rep.add("hwi_term", breakdown.hwi_term);
      rep.add("n_eff", breakdown.total);
      rep.add("method", std::string(liscap::to_string(method)));
      write_output(rep.render(resolve_format(common, liscap::OutputFormat::csv)),
                   common.out);
      return 0;
    }

    if (*cmd_turn) {
      const auto method = parse_method(common.method);
      const auto tp = liscap::turning_point(cfg, model, method,
                                            {bracket_lo, bracket_hi}, quad);
      Report rep;
      rep.add("method", std::string(liscap::to_string(method)));
      rep.add("tau_star", tp.tau_star);
      rep.add("area_star", tp.area_star);
      rep.add("converged", tp.converged);
      rep.add("bracket_lo", tp.bracket_lo);
      rep.add("bracket_hi", tp.bracket_hi);
      write_output(rep.render(resolve_format(common, liscap::OutputFormat::json)),
                   common.out);
      return 0;
    }

    if (*cmd_split) {
      const auto geom = make_geometry(point, cfg.z0);
      liscap::SweepSpec spec{};
      spec.variable = liscap::SweepVariable::m_units;
      spec.lo = split_sweep.lo;
      spec.hi = split_sweep.hi;
      spec.steps = split_sweep.steps;
      spec.scale = liscap::SweepScale::linear;
      const auto rows = liscap::split_rows(cfg, model, geom, spec);
      write_output(liscap::render_rows(rows, resolve_format(common, liscap::OutputFormat::csv)),
                   common.out);
      return 0;
    }

    if (*cmd_mc) {
      const auto geom = make_geometry(point, cfg.z0);
      liscap::McSettings settings{common.trials, common.seed, common.resolution};
      const auto est = liscap::estimate_effective_noise(cfg, geom, model, settings);
      const double analytic =
          liscap::effective_noise_exact(cfg, geom, model, quad).total;
      const double gap = std::abs(est.noise_density_estimate - analytic);
      const double tolerance = std::max(3.0 * est.standard_error, 0.01 * analytic);
      const bool ok = gap <= tolerance;
      Report rep;
      rep.add("seed", static_cast<std::int64_t>(settings.seed));
      rep.add("trials", settings.trials);
      rep.add("resolution", static_cast<std::int64_t>(settings.resolution));
      rep.add("estimate", est.noise_density_estimate);
      rep.add("standard_error", est.standard_error);
      rep.add("signal_power_estimate", est.signal_power_estimate);
      rep.add("analytic_exact", analytic);
      rep.add("abs_gap", gap);
      rep.add("tolerance", tolerance);
      rep.add("within_tolerance", ok);
      write_output(rep.render(resolve_format(common, liscap::OutputFormat::json)),
                   common.out);
      return ok ? 0 : 2;
    }
  } catch (const liscap::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what()
              << " (achieved error " << e.achieved_error() << ")\n";
    return 2;
  } catch (const liscap::bracket_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 1;
  }

  return 1;
}
