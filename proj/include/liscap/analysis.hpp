#pragma once

/// Capacity, surface-area utility, the utility upper bound, negative-utility
/// conditions, turning-point root finding and LIS-Unit splitting.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "liscap/core_model.hpp"
#include "liscap/errors.hpp"
#include "liscap/hwi_noise.hpp"
#include "liscap/quadrature.hpp"

namespace liscap {

/// One operating point. capacity_nat = ln(1 + zeta P / N_total), utility is
/// its derivative with respect to surface-area, utility_upper_bound the
/// HWI-free high-SNR bound gamma0.
struct CapacityReport {
  double zeta;
  NoiseBreakdown noise;
  double sigma;  // N_total / n0; +inf when n0 = 0
  double capacity_nat;
  double utility;
  double utility_upper_bound;
};

struct SplitConfig {
  int m_units;
  SurfaceGeometry geometry;  // parent surface

  SplitConfig(int m, SurfaceGeometry parent) : m_units(m), geometry(parent) {
    if (m_units < 1) throw std::invalid_argument("SplitConfig: m_units must be >= 1");
  }
};

struct TurningPoint {
  double tau_star;
  double area_star;
  NoiseMethod method;
  bool converged;
  double bracket_lo;
  double bracket_hi;
};

/// Relative tau tolerance of the turning-point bisection.
inline constexpr double kTurningPointTolerance = 1e-4;

/// Relative step of the central finite difference used for dN/dA under the
/// quadrature-backed noise methods.
inline constexpr double kNoiseDerivativeStep = 1e-5;

/// dN/dA under the chosen method: analytic for the disk form, central finite
/// difference (step A * 1e-5) for the quadrature-backed methods.
inline double dnoise_dA(const SystemConfig& cfg, const SurfaceGeometry& geom,
                        const HwiModel& model, NoiseMethod method,
                        const QuadratureSettings& quad = {}) {
  if (method == NoiseMethod::disk_closed_form) return dN_dA(cfg, geom, model);
  if (model.alpha == 0.0) return 0.0;
  const double a = geom.half_length_a;
  const double h = a * kNoiseDerivativeStep;
  const auto at = [&](double half_length) {
    return effective_noise(cfg, SurfaceGeometry::from_half_length(half_length, cfg.z0),
                           model, method, quad)
        .total;
  };
  return (at(a + h) - at(a - h)) / (2.0 * h);
}

/// gamma0 = 1 / (4 z0^2 arctan(tau^2 / sqrt(2 tau^2 + 1))
///              sqrt(2 tau^2 + 1) (tau^2 + 1)).
/// The bound diverges as tau -> 0; tau = 0 returns +inf rather than throwing.
inline double utility_upper_bound(double tau, double z0) {
  if (!(tau >= 0.0)) throw std::invalid_argument("utility_upper_bound: tau must be >= 0");
  if (!(z0 > 0.0)) throw std::invalid_argument("utility_upper_bound: z0 must be > 0");
  if (tau == 0.0) return std::numeric_limits<double>::infinity();
  const double root = std::sqrt(2.0 * tau * tau + 1.0);
  return 1.0 / (4.0 * z0 * z0) / std::atan(tau * tau / root) /
         (root * (tau * tau + 1.0));
}

/// Utility gamma = P / (8 A (N + zeta P)) * (dzeta/dA - (zeta / N) dN/dA).
inline double utility(const SystemConfig& cfg, const SurfaceGeometry& geom,
                      const HwiModel& model, NoiseMethod method,
                      const QuadratureSettings& quad = {}) {
  const double zeta = array_gain_closed(geom.tau);
  const double n_total = effective_noise(cfg, geom, model, method, quad).total;
  const double dz = dzeta_dA(geom.tau, cfg.z0);
  const double dn = dnoise_dA(cfg, geom, model, method, quad);
  return cfg.power_p / (8.0 * geom.half_length_a * (n_total + zeta * cfg.power_p)) *
         (dz - zeta / n_total * dn);
}

/// Full report at one operating point. zeta always comes from the closed
/// form (CPL user); the noise density from the chosen method.
inline CapacityReport capacity(const SystemConfig& cfg,
                               const SurfaceGeometry& geom,
                               const HwiModel& model, NoiseMethod method,
                               const QuadratureSettings& quad = {}) {
  CapacityReport report{};
  report.zeta = array_gain_closed(geom.tau);
  report.noise = effective_noise(cfg, geom, model, method, quad);
  report.sigma = cfg.n0 > 0.0 ? report.noise.total / cfg.n0
                              : std::numeric_limits<double>::infinity();
  report.capacity_nat = std::log1p(report.zeta * cfg.power_p / report.noise.total);
  report.utility = utility(cfg, geom, model, method, quad);
  report.utility_upper_bound = utility_upper_bound(geom.tau, cfg.z0);
  return report;
}

/// Negative-utility condition under the disk noise form, written exactly as
/// the tau-form inequality; true means enlarging the surface reduces
/// capacity. Agrees with sign(utility) < 0 under disk_closed_form.
inline bool negative_utility_condition(const SystemConfig& cfg,
                                       const SurfaceGeometry& geom,
                                       const HwiModel& model) {
  const double tau = geom.tau;
  const double z0 = cfg.z0;
  const double beta = model.beta;
  const double zeta = array_gain_closed(tau);
  const double lhs =
      1.0 / (kPi * z0 * std::sqrt(2.0 * tau * tau + 1.0) * (tau * tau + 1.0));
  const double four_pow = std::pow(4.0, beta - 1.0);
  const double rhs_num = zeta * beta * four_pow * cfg.power_p * model.alpha *
                         std::pow(tau, 2.0 * beta - 2.0) *
                         std::pow(z0, 2.0 * beta - 3.0);
  const double rhs_den = (beta + 1.0) * std::pow(kPi, beta + 1.0) * cfg.n0 +
                         four_pow * cfg.power_p * model.alpha *
                             std::pow(tau, 2.0 * beta) *
                             std::pow(z0, 2.0 * beta - 2.0);
  return lhs < rhs_num / rhs_den;
}

/// High-SNR (N0 -> 0) limit of the negative-utility condition:
/// beta > tau^2 / (sqrt(2 tau^2 + 1) (tau^2 + 1) arctan(tau^2 / sqrt(...))).
/// The r.h.s. tends to 1 as tau -> 0 and to 0 as tau -> infinity.
inline bool negative_utility_condition_high_snr(double tau, double beta) {
  if (!(tau >= 0.0))
    throw std::invalid_argument("negative_utility_condition_high_snr: tau must be >= 0");
  if (tau == 0.0) return beta > 1.0;
  const double root = std::sqrt(2.0 * tau * tau + 1.0);
  const double rhs = tau * tau /
                     (root * (tau * tau + 1.0) * std::atan(tau * tau / root));
  return beta > rhs;
}

/// Bracketed bisection for the tau where utility crosses zero, to relative
/// tolerance kTurningPointTolerance. Throws bracket_error when utility has
/// the same sign at both ends.
inline TurningPoint turning_point(const SystemConfig& cfg, const HwiModel& model,
                                  NoiseMethod method,
                                  std::pair<double, double> bracket,
                                  const QuadratureSettings& quad = {}) {
  double lo = bracket.first;
  double hi = bracket.second;
  if (!(lo > 0.0) || !(hi > lo))
    throw std::invalid_argument("turning_point: need 0 < tau_lo < tau_hi");

  const auto gamma_at = [&](double tau) {
    return utility(cfg, SurfaceGeometry::from_tau(tau, cfg.z0), model, method, quad);
  };

  double g_lo = gamma_at(lo);
  double g_hi = gamma_at(hi);
  if (g_lo == 0.0) hi = lo;
  if (g_hi == 0.0) lo = hi;
  if (lo < hi && std::signbit(g_lo) == std::signbit(g_hi))
    throw bracket_error("turning_point: no sign change of utility on bracket");

  bool converged = true;
  int iterations = 0;
  while (hi - lo > kTurningPointTolerance * 0.5 * (hi + lo)) {
    if (++iterations > 200) {
      converged = false;
      break;
    }
    const double mid = 0.5 * (lo + hi);
    const double g_mid = gamma_at(mid);
    if (g_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if (std::signbit(g_mid) == std::signbit(g_lo)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }

  const double tau_star = 0.5 * (lo + hi);
  const double a_star = tau_star * cfg.z0;
  return TurningPoint{tau_star,      4.0 * a_star * a_star, method,
                      converged,     bracket.first,         bracket.second};
}

/// Noise-density upper bound after splitting the surface into M LIS-Units,
/// each treated as a disk-form unit of half-length A/M with the user on its
/// CPL: N0 + M^(-2 beta) * hwi_disk(A). The CPL assumption makes this a
/// bound, not an equality.
inline NoiseBreakdown split_noise_bound(const SystemConfig& cfg,
                                        const SplitConfig& split,
                                        const HwiModel& model) {
  const SurfaceGeometry unit = SurfaceGeometry::from_half_length(
      split.geometry.half_length_a / split.m_units, cfg.z0);
  const NoiseBreakdown per_unit = effective_noise_disk(cfg, unit, model);
  return NoiseBreakdown{cfg.n0, per_unit.hwi_term, cfg.n0 + per_unit.hwi_term,
                        NoiseMethod::disk_closed_form};
}

/// Capacity of the split deployment: received power (and therefore zeta) is
/// that of the unsplit surface, the noise density the split bound. utility
/// differentiates at fixed M, so dN/dA picks up the same M^(-2 beta) factor.
inline CapacityReport split_capacity(const SystemConfig& cfg,
                                     const SplitConfig& split,
                                     const HwiModel& model) {
  const SurfaceGeometry& geom = split.geometry;
  CapacityReport report{};
  report.zeta = array_gain_closed(geom.tau);
  report.noise = split_noise_bound(cfg, split, model);
  report.sigma = cfg.n0 > 0.0 ? report.noise.total / cfg.n0
                              : std::numeric_limits<double>::infinity();
  report.capacity_nat = std::log1p(report.zeta * cfg.power_p / report.noise.total);
  const double dn = std::pow(static_cast<double>(split.m_units), -2.0 * model.beta) *
                    dN_dA(cfg, geom, model);
  report.utility = cfg.power_p /
                   (8.0 * geom.half_length_a *
                    (report.noise.total + report.zeta * cfg.power_p)) *
                   (dzeta_dA(geom.tau, cfg.z0) - report.zeta / report.noise.total * dn);
  report.utility_upper_bound = utility_upper_bound(geom.tau, cfg.z0);
  return report;
}

}  // namespace liscap
