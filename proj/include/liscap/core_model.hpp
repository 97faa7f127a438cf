#pragma once

/// Geometry and line-of-sight channel model of a square LIS deployed on the
/// z = 0 plane, plus the array gain in closed and exact-integral form.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "liscap/errors.hpp"
#include "liscap/quadrature.hpp"

namespace liscap {

inline constexpr double kPi = std::numbers::pi;

/// 10^(dB/10); power flags are accepted in dB and stored linear.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct SystemConfig {
  double power_p;    // linear transmit power
  double n0;         // spatial noise PSD
  double z0;         // perpendicular user distance [m]
  double wavelength; // [m], consumed by the phase term only

  SystemConfig(double power, double noise_psd, double distance,
               double lambda = 0.1)
      : power_p(power), n0(noise_psd), z0(distance), wavelength(lambda) {
    if (!(power_p > 0.0)) throw std::invalid_argument("SystemConfig: power_p must be > 0");
    if (!(n0 >= 0.0)) throw std::invalid_argument("SystemConfig: n0 must be >= 0");
    if (!(z0 > 0.0)) throw std::invalid_argument("SystemConfig: z0 must be > 0");
    if (!(wavelength > 0.0)) throw std::invalid_argument("SystemConfig: wavelength must be > 0");
  }
};

/// Square surface spanning [-A, A]^2. tau = A/z0, area = 4 A^2.
struct SurfaceGeometry {
  double half_length_a;
  double tau;
  double area;

  static SurfaceGeometry from_half_length(double a, double z0) {
    if (!(a > 0.0)) throw std::invalid_argument("SurfaceGeometry: half_length must be > 0");
    if (!(z0 > 0.0)) throw std::invalid_argument("SurfaceGeometry: z0 must be > 0");
    return SurfaceGeometry{a, a / z0, 4.0 * a * a};
  }

  static SurfaceGeometry from_tau(double tau, double z0) {
    return from_half_length(tau * z0, z0);
  }

  static SurfaceGeometry from_area(double area, double z0) {
    if (!(area > 0.0)) throw std::invalid_argument("SurfaceGeometry: area must be > 0");
    return from_half_length(0.5 * std::sqrt(area), z0);
  }
};

struct UserPosition {
  double x0;
  double y0;
  double z0;

  /// True when the user sits on the central perpendicular line. Closed-form
  /// analysis requires exactly x0 = y0 = 0; there is no tolerance band.
  bool on_cpl() const { return x0 == 0.0 && y0 == 0.0; }
};

struct ChannelSample {
  double amplitude;  // nonnegative
  double phase;      // radians, reduced to [0, 2*pi)
  double power;      // amplitude^2
};

/// Squared distance metric (x0-x)^2 + (y0-y)^2 + z0^2.
inline double eta(double point_x, double point_y, const UserPosition& user) {
  if (!(user.z0 > 0.0)) throw std::invalid_argument("eta: user must have z0 > 0");
  const double dx = user.x0 - point_x;
  const double dy = user.y0 - point_y;
  return dx * dx + dy * dy + user.z0 * user.z0;
}

/// Effective LoS channel at a surface point: amplitude (1/2) sqrt(z0/pi)
/// eta^(-3/4) and propagation phase -2 pi sqrt(eta) / lambda.
inline ChannelSample channel_gain(double point_x, double point_y,
                                  const UserPosition& user,
                                  const SystemConfig& cfg) {
  const double e = eta(point_x, point_y, user);
  const double amplitude =
      0.5 * std::sqrt(user.z0 / kPi) * std::pow(e, -0.75);
  double phase = std::fmod(-2.0 * kPi * std::sqrt(e) / cfg.wavelength, 2.0 * kPi);
  if (phase < 0.0) phase += 2.0 * kPi;
  if (phase >= 2.0 * kPi) phase = 0.0;  // fmod rounding at the seam
  return ChannelSample{amplitude, phase, amplitude * amplitude};
}

/// Array gain of the square LIS for a CPL user, closed form:
/// zeta = (1/pi) arctan(tau^2 / sqrt(2 tau^2 + 1)), in [0, 1/2).
inline double array_gain_closed(double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("array_gain_closed: tau must be >= 0");
  return std::atan(tau * tau / std::sqrt(2.0 * tau * tau + 1.0)) / kPi;
}

/// Array gain by direct integration of (z0 / 4 pi) eta^(-3/2) over the
/// square, valid for any user position. Throws numerical_error when the
/// quadrature does not converge.
inline double array_gain_quadrature(const SurfaceGeometry& geom,
                                    const UserPosition& user,
                                    const QuadratureSettings& quad = {}) {
  if (!(user.z0 > 0.0))
    throw std::invalid_argument("array_gain_quadrature: user must have z0 > 0");
  const double a = geom.half_length_a;
  const auto integrand = [&user](double x, double y) {
    return std::pow(eta(x, y, user), -1.5);
  };
  const QuadratureResult r = integrate_rect(integrand, -a, a, -a, a, quad);
  const double scale = user.z0 / (4.0 * kPi);
  if (!r.converged)
    throw numerical_error("array_gain_quadrature: quadrature did not converge",
                          scale * r.error_estimate);
  return scale * r.value;
}

/// d zeta / dA = 2 tau / (pi z0 sqrt(2 tau^2 + 1) (tau^2 + 1)).
inline double dzeta_dA(double tau, double z0) {
  if (!(tau >= 0.0)) throw std::invalid_argument("dzeta_dA: tau must be >= 0");
  if (!(z0 > 0.0)) throw std::invalid_argument("dzeta_dA: z0 must be > 0");
  return 2.0 * tau /
         (kPi * z0 * std::sqrt(2.0 * tau * tau + 1.0) * (tau * tau + 1.0));
}

}  // namespace liscap
