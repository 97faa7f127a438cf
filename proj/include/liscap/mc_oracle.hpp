#pragma once

/// Grid-sampled Monte-Carlo simulation of the matched-filter receiver with
/// HWI realizations. The surface is discretized into resolution^2 cells; the
/// white impairment and noise processes become per-cell complex Gaussians of
/// variance f(r_i)/cell_area and N0/cell_area, so the Riemann sums of the MF
/// integrals reproduce the continuous variances in the fine-grid limit.
///
/// Every trial draws its randomness from an engine seeded by
/// (seed, trial_index), so serial and parallel execution produce identical
/// estimates bit for bit.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "liscap/core_model.hpp"
#include "liscap/hwi_noise.hpp"

namespace liscap {

struct FieldGrid {
  int resolution;                          // points per axis
  double cell_area;                        // (2A / resolution)^2
  std::vector<std::complex<double>> samples;  // s at cell centers, row-major
  double half_length_a;
};

enum class PilotMode {
  fixed_unit,           // a = 1 every trial
  random_unit_modulus,  // a = exp(j 2 pi u), one draw per trial
};

struct McSettings {
  std::int64_t trials;
  std::uint64_t seed;
  int resolution;
  PilotMode pilot = PilotMode::fixed_unit;
};

struct McEstimate {
  double noise_density_estimate;
  double standard_error;
  double signal_power_estimate;  // P * zeta of the grid
};

struct MfTrialOutput {
  std::complex<double> signal;      // sqrt(P zeta_grid) * a
  std::complex<double> noise_hwi;   // MF-referred impairment term
  std::complex<double> noise_awgn;  // MF-referred thermal term

  std::complex<double> noise() const { return noise_hwi + noise_awgn; }
};

/// Samples the channel at the cell centers of a resolution x resolution grid
/// covering [-A, A]^2.
inline FieldGrid build_field_grid(const SystemConfig& cfg,
                                  const SurfaceGeometry& geom, int resolution) {
  if (resolution < 2)
    throw std::invalid_argument("build_field_grid: resolution must be >= 2");
  const double a = geom.half_length_a;
  const double step = 2.0 * a / resolution;
  FieldGrid grid;
  grid.resolution = resolution;
  grid.cell_area = step * step;
  grid.half_length_a = a;
  grid.samples.reserve(static_cast<std::size_t>(resolution) * resolution);
  const UserPosition user{0.0, 0.0, cfg.z0};
  for (int i = 0; i < resolution; ++i) {
    const double x = -a + (i + 0.5) * step;
    for (int j = 0; j < resolution; ++j) {
      const double y = -a + (j + 0.5) * step;
      const ChannelSample s = channel_gain(x, y, user, cfg);
      grid.samples.push_back(std::polar(s.amplitude, s.phase));
    }
  }
  return grid;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::mt19937_64 trial_engine(std::uint64_t seed, std::int64_t trial_index) {
  const std::uint64_t mixed =
      splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial_index)));
  return std::mt19937_64(mixed);
}

inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Marsaglia polar method; avoids the implementation-defined behaviour of
// std::normal_distribution so streams are reproducible across toolchains.
inline std::pair<double, double> normal_pair(std::mt19937_64& rng) {
  while (true) {
    const double u = 2.0 * uniform_unit(rng) - 1.0;
    const double v = 2.0 * uniform_unit(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      const double k = std::sqrt(-2.0 * std::log(s) / s);
      return {u * k, v * k};
    }
  }
}

// Per-grid constants of the MF trial: hwi_coeff[i] scales a standard complex
// Gaussian into h_i |s_i|^2 * cell_area, awgn_coeff[i] into s_i^* n_i *
// cell_area, and zeta_grid is the Riemann-sum array gain.
struct MfWorkspace {
  std::vector<double> hwi_coeff;
  std::vector<std::complex<double>> awgn_coeff;
  double zeta_grid;
  double sqrt_power;
  double inv_sqrt_zeta;
};

inline MfWorkspace make_workspace(const SystemConfig& cfg,
                                  const SurfaceGeometry& geom,
                                  const HwiModel& model, const FieldGrid& grid) {
  if (grid.half_length_a != geom.half_length_a)
    throw std::invalid_argument("mc_oracle: grid was built for a different surface");
  const int res = grid.resolution;
  const double a = grid.half_length_a;
  const double step = 2.0 * a / res;
  const double delta = grid.cell_area;

  MfWorkspace ws;
  ws.hwi_coeff.resize(grid.samples.size());
  ws.awgn_coeff.resize(grid.samples.size());
  double zeta_grid = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < res; ++i) {
    const double x = -a + (i + 0.5) * step;
    for (int j = 0; j < res; ++j, ++idx) {
      const double y = -a + (j + 0.5) * step;
      const std::complex<double> s = grid.samples[idx];
      const double s_sq = std::norm(s);
      zeta_grid += s_sq * delta;
      const double f = variance_profile(std::sqrt(x * x + y * y), model);
      ws.hwi_coeff[idx] = std::sqrt(f / (2.0 * delta)) * s_sq * delta;
      ws.awgn_coeff[idx] = std::conj(s) * std::sqrt(cfg.n0 / (2.0 * delta)) * delta;
    }
  }
  ws.zeta_grid = zeta_grid;
  ws.sqrt_power = std::sqrt(cfg.power_p);
  ws.inv_sqrt_zeta = 1.0 / std::sqrt(zeta_grid);
  return ws;
}

inline MfTrialOutput run_trial(const MfWorkspace& ws, PilotMode pilot,
                               std::mt19937_64& rng) {
  std::complex<double> a_sym{1.0, 0.0};
  if (pilot == PilotMode::random_unit_modulus)
    a_sym = std::polar(1.0, 2.0 * kPi * uniform_unit(rng));

  std::complex<double> acc_hwi{0.0, 0.0};
  std::complex<double> acc_awgn{0.0, 0.0};
  const std::size_t n = ws.hwi_coeff.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto [g1, g2] = normal_pair(rng);
    acc_hwi += ws.hwi_coeff[i] * std::complex<double>(g1, g2);
    const auto [g3, g4] = normal_pair(rng);
    acc_awgn += ws.awgn_coeff[i] * std::complex<double>(g3, g4);
  }

  MfTrialOutput out;
  out.signal = ws.sqrt_power * std::sqrt(ws.zeta_grid) * a_sym;
  out.noise_hwi = ws.sqrt_power * a_sym * acc_hwi * ws.inv_sqrt_zeta;
  out.noise_awgn = acc_awgn * ws.inv_sqrt_zeta;
  return out;
}

}  // namespace detail

/// One matched-filter transmission on the given grid. Returns the signal
/// component sqrt(P zeta_grid) a and the two MF-normalized noise components
/// separately (impairment and thermal).
inline MfTrialOutput simulate_mf_trial(const SystemConfig& cfg,
                                       const SurfaceGeometry& geom,
                                       const HwiModel& model,
                                       const FieldGrid& grid,
                                       std::mt19937_64& rng,
                                       PilotMode pilot = PilotMode::fixed_unit) {
  const detail::MfWorkspace ws = detail::make_workspace(cfg, geom, model, grid);
  return detail::run_trial(ws, pilot, rng);
}

/// Monte-Carlo estimate of the effective noise density: the mean of
/// |noise|^2 across trials (the noise is zero-mean by construction) with its
/// standard error taken from the sample variance of the squared magnitudes.
inline McEstimate estimate_effective_noise(const SystemConfig& cfg,
                                           const SurfaceGeometry& geom,
                                           const HwiModel& model,
                                           const McSettings& settings) {
  if (settings.trials < 1)
    throw std::invalid_argument("estimate_effective_noise: trials must be >= 1");
  const FieldGrid grid = build_field_grid(cfg, geom, settings.resolution);
  const detail::MfWorkspace ws = detail::make_workspace(cfg, geom, model, grid);

  const std::int64_t trials = settings.trials;
  std::vector<double> squared(static_cast<std::size_t>(trials));

  const auto run_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t t = begin; t < end; ++t) {
      std::mt19937_64 rng = detail::trial_engine(settings.seed, t);
      const MfTrialOutput out = detail::run_trial(ws, settings.pilot, rng);
      squared[static_cast<std::size_t>(t)] = std::norm(out.noise());
    }
  };

  const unsigned hw = std::thread::hardware_concurrency();
  const std::int64_t n_threads =
      std::max<std::int64_t>(1, std::min<std::int64_t>(hw ? hw : 1, trials));
  if (n_threads == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_threads));
    const std::int64_t chunk = (trials + n_threads - 1) / n_threads;
    for (std::int64_t k = 0; k < n_threads; ++k) {
      const std::int64_t begin = k * chunk;
      const std::int64_t end = std::min(trials, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(run_range, begin, end);
    }
    for (auto& w : workers) w.join();
  }

  // Serial reduction in trial order keeps the estimate independent of the
  // thread partition.
  double mean = 0.0;
  for (double v : squared) mean += v;
  mean /= static_cast<double>(trials);

  double var_of_sq = 0.0;
  if (trials > 1) {
    for (double v : squared) {
      const double d = v - mean;
      var_of_sq += d * d;
    }
    var_of_sq /= static_cast<double>(trials - 1);
  }

  McEstimate est;
  est.noise_density_estimate = mean;
  est.standard_error = std::sqrt(var_of_sq / static_cast<double>(trials));
  est.signal_power_estimate = cfg.power_p * ws.zeta_grid;
  return est;
}

}  // namespace liscap
