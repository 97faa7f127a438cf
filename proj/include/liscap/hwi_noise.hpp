#pragma once

/// Hardware-impairment variance profile f(r) = alpha r^(2 beta) and the
/// effective noise density it induces at the matched-filter output, in three
/// evaluations: the exact integral ratio, the small-area simplification and
/// the equal-area disk closed form.

#include <cmath>
#include <stdexcept>

#include "liscap/core_model.hpp"
#include "liscap/errors.hpp"
#include "liscap/quadrature.hpp"

namespace liscap {

struct HwiModel {
  double alpha;  // variance scale
  double beta;   // radial exponent

  HwiModel(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("HwiModel: alpha must be >= 0");
    if (!(beta >= 0.0)) throw std::invalid_argument("HwiModel: beta must be >= 0");
  }

  static HwiModel none() { return HwiModel{0.0, 0.0}; }
};

enum class NoiseMethod {
  exact_quadrature,  // integral ratio over the surface
  small_area,        // A << z0 simplification
  disk_closed_form,  // equal-area disk substitution
};

inline const char* to_string(NoiseMethod method) {
  switch (method) {
    case NoiseMethod::exact_quadrature: return "exact";
    case NoiseMethod::small_area: return "small-area";
    case NoiseMethod::disk_closed_form: return "disk";
  }
  return "?";
}

struct NoiseBreakdown {
  double n0;
  double hwi_term;
  double total;  // n0 + hwi_term
  NoiseMethod method;
};

/// Impairment variance at distance r from the surface center.
inline double variance_profile(double r, const HwiModel& model) {
  if (!(r >= 0.0)) throw std::invalid_argument("variance_profile: r must be >= 0");
  return model.alpha * std::pow(r, 2.0 * model.beta);
}

/// Exact effective noise density for a CPL user:
/// N0 + (P z0 alpha / 4 pi) * (integral of r^(2b) eta^-3) / (integral of
/// eta^-3/2), both integrals over the quadrant [0, A]^2. The ratio is
/// identical on the full square by symmetry, which the quadrant keeps 4x
/// cheaper.
inline NoiseBreakdown effective_noise_exact(const SystemConfig& cfg,
                                            const SurfaceGeometry& geom,
                                            const HwiModel& model,
                                            const QuadratureSettings& quad = {}) {
  if (model.alpha == 0.0)
    return NoiseBreakdown{cfg.n0, 0.0, cfg.n0, NoiseMethod::exact_quadrature};

  const double a = geom.half_length_a;
  const double z0sq = cfg.z0 * cfg.z0;
  const auto numerator = [&](double x, double y) {
    const double r_sq = x * x + y * y;
    const double e = r_sq + z0sq;
    return std::pow(r_sq, model.beta) / (e * e * e);
  };
  const auto denominator = [&](double x, double y) {
    return std::pow(x * x + y * y + z0sq, -1.5);
  };

  const QuadratureResult num = integrate_rect(numerator, 0.0, a, 0.0, a, quad);
  if (!num.converged)
    throw numerical_error("effective_noise_exact: numerator quadrature did not converge",
                          num.error_estimate);
  const QuadratureResult den = integrate_rect(denominator, 0.0, a, 0.0, a, quad);
  if (!den.converged)
    throw numerical_error("effective_noise_exact: denominator quadrature did not converge",
                          den.error_estimate);

  const double hwi = cfg.power_p * cfg.z0 * model.alpha / (4.0 * kPi) *
                     (num.value / den.value);
  return NoiseBreakdown{cfg.n0, hwi, cfg.n0 + hwi, NoiseMethod::exact_quadrature};
}

/// Small-area (A << z0) noise density:
/// N0 + P alpha / (4 pi z0^2 A^2) * integral of (x^2+y^2)^beta over [0, A]^2.
/// The regime is not enforced; the method tag lets callers judge validity.
inline NoiseBreakdown effective_noise_small_area(const SystemConfig& cfg,
                                                 const SurfaceGeometry& geom,
                                                 const HwiModel& model,
                                                 const QuadratureSettings& quad = {}) {
  if (model.alpha == 0.0)
    return NoiseBreakdown{cfg.n0, 0.0, cfg.n0, NoiseMethod::small_area};

  const double a = geom.half_length_a;
  const auto integrand = [&](double x, double y) {
    return std::pow(x * x + y * y, model.beta);
  };
  const QuadratureResult inner = integrate_rect(integrand, 0.0, a, 0.0, a, quad);
  if (!inner.converged)
    throw numerical_error("effective_noise_small_area: quadrature did not converge",
                          inner.error_estimate);

  const double hwi = cfg.power_p * model.alpha /
                     (4.0 * kPi * cfg.z0 * cfg.z0 * a * a) * inner.value;
  return NoiseBreakdown{cfg.n0, hwi, cfg.n0 + hwi, NoiseMethod::small_area};
}

/// Disk-substitution closed form:
/// N0 + 4^(beta-1) P alpha A^(2 beta) / ((beta+1) z0^2 pi^(beta+1)).
inline NoiseBreakdown effective_noise_disk(const SystemConfig& cfg,
                                           const SurfaceGeometry& geom,
                                           const HwiModel& model) {
  const double a = geom.half_length_a;
  const double hwi = std::pow(4.0, model.beta - 1.0) * cfg.power_p *
                     model.alpha * std::pow(a, 2.0 * model.beta) /
                     ((model.beta + 1.0) * cfg.z0 * cfg.z0 *
                      std::pow(kPi, model.beta + 1.0));
  return NoiseBreakdown{cfg.n0, hwi, cfg.n0 + hwi, NoiseMethod::disk_closed_form};
}

/// Dispatch on the evaluation method.
inline NoiseBreakdown effective_noise(const SystemConfig& cfg,
                                      const SurfaceGeometry& geom,
                                      const HwiModel& model, NoiseMethod method,
                                      const QuadratureSettings& quad = {}) {
  switch (method) {
    case NoiseMethod::exact_quadrature:
      return effective_noise_exact(cfg, geom, model, quad);
    case NoiseMethod::small_area:
      return effective_noise_small_area(cfg, geom, model, quad);
    case NoiseMethod::disk_closed_form:
      return effective_noise_disk(cfg, geom, model);
  }
  throw std::invalid_argument("effective_noise: unknown method");
}

/// SNR loss sigma = N_total / N0 (>= 1) under the chosen method.
inline double snr_loss(const SystemConfig& cfg, const SurfaceGeometry& geom,
                       const HwiModel& model, NoiseMethod method,
                       const QuadratureSettings& quad = {}) {
  if (!(cfg.n0 > 0.0))
    throw std::domain_error("snr_loss: sigma is undefined for n0 = 0");
  return effective_noise(cfg, geom, model, method, quad).total / cfg.n0;
}

/// beta << 1 shortcut sigma ~= 1 + P alpha A^(2 beta) / (4 pi z0^2 N0);
/// exact at beta = 0 (where it coincides with the disk form).
inline double snr_loss_small_beta(const SystemConfig& cfg,
                                  const SurfaceGeometry& geom,
                                  const HwiModel& model) {
  if (!(cfg.n0 > 0.0))
    throw std::domain_error("snr_loss_small_beta: sigma is undefined for n0 = 0");
  return 1.0 + cfg.power_p * model.alpha *
                   std::pow(geom.half_length_a, 2.0 * model.beta) /
                   (4.0 * kPi * cfg.z0 * cfg.z0 * cfg.n0);
}

/// Derivative of the disk-form noise density with respect to A:
/// beta 4^(beta-1/2) P alpha A^(2 beta - 1) / ((beta+1) z0^2 pi^(beta+1)).
/// The beta prefactor annihilates the term at beta = 0, so no A^-1
/// singularity can surface.
inline double dN_dA(const SystemConfig& cfg, const SurfaceGeometry& geom,
                    const HwiModel& model) {
  if (model.beta == 0.0 || model.alpha == 0.0) return 0.0;
  const double a = geom.half_length_a;
  return model.beta * std::pow(4.0, model.beta - 0.5) * cfg.power_p *
         model.alpha * std::pow(a, 2.0 * model.beta - 1.0) /
         ((model.beta + 1.0) * cfg.z0 * cfg.z0 *
          std::pow(kPi, model.beta + 1.0));
}

}  // namespace liscap
