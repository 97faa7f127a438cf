#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "liscap/analysis.hpp"
#include "liscap/mc_oracle.hpp"

using namespace liscap;

namespace {
const SystemConfig kCfg{100.0, 1.0, 2.0};
const auto kGeom = SurfaceGeometry::from_half_length(0.8, kCfg.z0);
}

TEST_CASE("field grid construction", "[mc]") {
  const auto grid = build_field_grid(kCfg, kGeom, 16);
  REQUIRE(grid.resolution == 16);
  REQUIRE(grid.samples.size() == 256);
  REQUIRE(grid.cell_area * 16 * 16 == Catch::Approx(kGeom.area).epsilon(1e-14));
  REQUIRE_THROWS_AS(build_field_grid(kCfg, kGeom, 1), std::invalid_argument);
}

TEST_CASE("noise-free trial has a zero noise component", "[mc]") {
  const SystemConfig silent{100.0, 0.0, 2.0};
  const auto grid = build_field_grid(silent, kGeom, 16);
  std::mt19937_64 rng(7);
  const auto out = simulate_mf_trial(silent, kGeom, HwiModel::none(), grid, rng);
  REQUIRE(out.noise_hwi == std::complex<double>(0.0, 0.0));
  REQUIRE(out.noise_awgn == std::complex<double>(0.0, 0.0));
  REQUIRE(std::abs(out.noise()) == 0.0);
}

TEST_CASE("signal component carries the grid array gain", "[mc]") {
  const auto grid = build_field_grid(kCfg, kGeom, 32);
  std::mt19937_64 rng(5);
  const auto out = simulate_mf_trial(kCfg, kGeom, HwiModel{2.0, 3.0}, grid, rng);
  const McSettings settings{4, 11, 32};
  const auto est = estimate_effective_noise(kCfg, kGeom, HwiModel{2.0, 3.0}, settings);
  REQUIRE(std::norm(out.signal) ==
          Catch::Approx(est.signal_power_estimate).epsilon(1e-12));

  // The Riemann-sum array gain closes in on the true one as the grid refines.
  const double zeta_true = array_gain_closed(kGeom.tau);
  const McSettings coarse{1, 11, 16};
  const double zg_coarse =
      estimate_effective_noise(kCfg, kGeom, HwiModel::none(), coarse)
          .signal_power_estimate /
      kCfg.power_p;
  const double zg_fine = est.signal_power_estimate / kCfg.power_p;
  REQUIRE(std::abs(zg_fine - zeta_true) < std::abs(zg_coarse - zeta_true));
  REQUIRE(zg_fine == Catch::Approx(zeta_true).epsilon(1e-3));
}

TEST_CASE("awgn-only estimate recovers N0", "[mc]") {
  const McSettings settings{4000, 2024, 32};
  const auto est = estimate_effective_noise(kCfg, kGeom, HwiModel::none(), settings);
  REQUIRE(std::abs(est.noise_density_estimate - kCfg.n0) <=
          3.0 * est.standard_error);
  REQUIRE(est.standard_error > 0.0);
}

TEST_CASE("flat impairment on a tiny surface matches the closed form", "[mc]") {
  const SystemConfig cfg{100.0, 1.0, 2.0};
  const HwiModel flat{2.0, 0.0};
  const auto geom = SurfaceGeometry::from_half_length(cfg.z0 / 100.0, cfg.z0);
  const McSettings settings{4000, 31, 32};
  const auto est = estimate_effective_noise(cfg, geom, flat, settings);
  const double reference =
      cfg.n0 + cfg.power_p * flat.alpha / (4.0 * kPi * cfg.z0 * cfg.z0);
  REQUIRE(std::abs(est.noise_density_estimate - reference) <=
          3.0 * est.standard_error);
}

TEST_CASE("estimates are reproducible bit for bit", "[mc]") {
  const McSettings settings{500, 99, 24};
  const auto a = estimate_effective_noise(kCfg, kGeom, HwiModel{2.0, 3.0}, settings);
  const auto b = estimate_effective_noise(kCfg, kGeom, HwiModel{2.0, 3.0}, settings);
  REQUIRE(a.noise_density_estimate == b.noise_density_estimate);
  REQUIRE(a.standard_error == b.standard_error);
  REQUIRE(a.signal_power_estimate == b.signal_power_estimate);
}

TEST_CASE("noise statistics are invariant to the pilot mode", "[mc]") {
  McSettings fixed{3000, 17, 24};
  McSettings random = fixed;
  random.pilot = PilotMode::random_unit_modulus;
  const HwiModel model{2.0, 3.0};
  const auto est_fixed = estimate_effective_noise(kCfg, kGeom, model, fixed);
  const auto est_random = estimate_effective_noise(kCfg, kGeom, model, random);
  const double combined = std::hypot(est_fixed.standard_error,
                                     est_random.standard_error);
  REQUIRE(std::abs(est_fixed.noise_density_estimate -
                   est_random.noise_density_estimate) <= 3.0 * combined);
  // Same signal magnitude either way.
  REQUIRE(est_fixed.signal_power_estimate == est_random.signal_power_estimate);
}

TEST_CASE("impairment and thermal subterms are uncorrelated", "[mc]") {
  const HwiModel model{2.0, 3.0};
  const auto grid = build_field_grid(kCfg, kGeom, 24);
  const int trials = 3000;
  double cov_re = 0.0, cov_im = 0.0;
  std::vector<double> prod_re(trials), prod_im(trials);
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(1000003ull * static_cast<unsigned long long>(t) + 17);
    const auto out = simulate_mf_trial(kCfg, kGeom, model, grid, rng);
    const auto p = out.noise_hwi * std::conj(out.noise_awgn);
    prod_re[t] = p.real();
    prod_im[t] = p.imag();
    cov_re += p.real();
    cov_im += p.imag();
  }
  cov_re /= trials;
  cov_im /= trials;
  double var_re = 0.0, var_im = 0.0;
  for (int t = 0; t < trials; ++t) {
    var_re += (prod_re[t] - cov_re) * (prod_re[t] - cov_re);
    var_im += (prod_im[t] - cov_im) * (prod_im[t] - cov_im);
  }
  const double se_re = std::sqrt(var_re / (trials - 1) / trials);
  const double se_im = std::sqrt(var_im / (trials - 1) / trials);
  REQUIRE(std::abs(cov_re) <= 3.0 * se_re);
  REQUIRE(std::abs(cov_im) <= 3.0 * se_im);
}

TEST_CASE("estimate converges to the exact noise density", "[mc]") {
  const HwiModel model{2.0, 3.0};
  const double exact = effective_noise_exact(kCfg, kGeom, model).total;

  const McSettings coarse{1500, 4242, 24};
  const McSettings fine{6000, 4242, 48};
  const auto est_coarse = estimate_effective_noise(kCfg, kGeom, model, coarse);
  const auto est_fine = estimate_effective_noise(kCfg, kGeom, model, fine);

  REQUIRE(std::abs(est_fine.noise_density_estimate - exact) <
          std::abs(est_coarse.noise_density_estimate - exact));
  REQUIRE(std::abs(est_fine.noise_density_estimate - exact) <=
          3.0 * est_fine.standard_error);
}

TEST_CASE("settings are validated", "[mc]") {
  REQUIRE_THROWS_AS(
      estimate_effective_noise(kCfg, kGeom, HwiModel::none(), McSettings{0, 1, 16}),
      std::invalid_argument);
  const auto grid = build_field_grid(kCfg, kGeom, 8);
  const auto other = SurfaceGeometry::from_half_length(1.0, kCfg.z0);
  std::mt19937_64 rng(1);
  REQUIRE_THROWS_AS(simulate_mf_trial(kCfg, other, HwiModel::none(), grid, rng),
                    std::invalid_argument);
}
