#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "json.hpp"
#include "liscap/sweep.hpp"

using namespace liscap;

namespace {
const SystemConfig kCfg{1000.0, 1.0, 4.0};  // 30 dB
}

TEST_CASE("sweep spec validation", "[sweep]") {
  SweepSpec spec{SweepVariable::area, 0.01, 100.0, 200, SweepScale::logarithmic};
  REQUIRE_NOTHROW(spec.validate());

  spec.steps = 1;
  REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.steps = 10;
  spec.lo = 5.0;
  spec.hi = 5.0;
  REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.lo = -1.0;
  spec.hi = 5.0;
  REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);

  SweepSpec units{SweepVariable::m_units, 1, 11, 6, SweepScale::linear};
  REQUIRE_NOTHROW(units.validate());  // 1, 3, 5, 7, 9, 11
  units.steps = 4;                    // 1, 4.33.., 7.66.., 11
  REQUIRE_THROWS_AS(units.validate(), std::invalid_argument);
}

TEST_CASE("sweep grids hit both endpoints", "[sweep]") {
  SweepSpec lin{SweepVariable::tau, 0.5, 2.0, 7, SweepScale::linear};
  const auto lp = lin.points();
  REQUIRE(lp.size() == 7);
  REQUIRE(lp.front() == 0.5);
  REQUIRE(lp.back() == 2.0);

  SweepSpec log{SweepVariable::area, 0.01, 100.0, 9, SweepScale::logarithmic};
  const auto gp = log.points();
  REQUIRE(gp.front() == 0.01);
  REQUIRE(gp.back() == 100.0);
  for (std::size_t i = 1; i < gp.size(); ++i) {
    REQUIRE(gp[i] > gp[i - 1]);
    if (i > 1)
      REQUIRE(gp[i] / gp[i - 1] == Catch::Approx(gp[1] / gp[0]).epsilon(1e-9));
  }
}

TEST_CASE("impairment-free capacity column is monotone", "[sweep]") {
  SweepSpec spec{SweepVariable::area, 0.01, 100.0, 60, SweepScale::logarithmic};
  const auto rows = sweep_rows(kCfg, HwiModel::none(),
                               NoiseMethod::disk_closed_form, spec);
  REQUIRE(rows.size() == 60);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].capacity_nat > rows[i - 1].capacity_nat);
    REQUIRE(rows[i].area > rows[i - 1].area);
  }
  for (const auto& r : rows) {
    REQUIRE(r.utility <= r.gamma0);
    REQUIRE(r.sigma == 1.0);
    REQUIRE(r.sigma_db == 0.0);
  }
}

TEST_CASE("utility column crosses zero near the turning surface-area",
          "[sweep]") {
  const SystemConfig cfg{100.0, 1.0, 2.0};  // 20 dB
  SweepSpec spec{SweepVariable::area, 0.5, 8.0, 40, SweepScale::linear};
  const auto rows =
      sweep_rows(cfg, HwiModel{2.0, 3.0}, NoiseMethod::exact_quadrature, spec);
  int crossing = -1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].utility > 0.0 && rows[i].utility < 0.0) {
      crossing = static_cast<int>(i);
      break;
    }
  }
  REQUIRE(crossing > 0);
  REQUIRE(rows[crossing].area > 2.2);
  REQUIRE(rows[crossing - 1].area < 2.9);
}

TEST_CASE("csv rendering is stable and carries the fixed header", "[sweep]") {
  SweepSpec spec{SweepVariable::tau, 0.1, 1.0, 4, SweepScale::linear};
  const auto rows = sweep_rows(kCfg, HwiModel{1.0, 1.0},
                               NoiseMethod::disk_closed_form, spec);
  const std::string a = render_csv(rows);
  const std::string b = render_csv(rows);
  REQUIRE(a == b);
  REQUIRE(a.substr(0, a.find('\n')) ==
          "A,tau,area,zeta,n_eff,sigma,sigma_db,capacity_nat,utility,gamma0");
  REQUIRE(std::count(a.begin(), a.end(), '\n') == 5);  // header + 4 rows
}

TEST_CASE("twelve significant digits, C locale", "[sweep]") {
  REQUIRE(detail::format_double(1.0 / 3.0) == "0.333333333333");
  REQUIRE(detail::format_double(1000.0) == "1000");
  REQUIRE(detail::format_double(1.23456789012345e-7) == "1.23456789012e-07");
}

TEST_CASE("json rendering parses and mirrors the rows", "[sweep]") {
  SweepSpec spec{SweepVariable::tau, 0.1, 1.0, 3, SweepScale::linear};
  const auto rows = sweep_rows(kCfg, HwiModel{1.0, 1.0},
                               NoiseMethod::disk_closed_form, spec);
  const auto parsed = nlohmann::json::parse(render_json(rows));
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 3);
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    REQUIRE(parsed[i]["tau"].get<double>() ==
            Catch::Approx(rows[i].tau).epsilon(1e-11));
    REQUIRE(parsed[i]["capacity_nat"].get<double>() ==
            Catch::Approx(rows[i].capacity_nat).epsilon(1e-11));
    REQUIRE_FALSE(parsed[i].contains("m_units"));
  }
}

TEST_CASE("split rows carry the unit count and match the unsplit point",
          "[sweep]") {
  const SystemConfig cfg{100.0, 1.0, 4.0};
  const auto parent = SurfaceGeometry::from_area(16.0, cfg.z0);
  SweepSpec spec{SweepVariable::m_units, 1, 11, 11, SweepScale::linear};
  const auto rows = split_rows(cfg, HwiModel{1.0, 1.0}, parent, spec);
  REQUIRE(rows.size() == 11);
  REQUIRE(rows.front().m_units.has_value());
  REQUIRE(*rows.front().m_units == 1);
  REQUIRE(*rows.back().m_units == 11);

  // The M = 1 row equals the plain disk-method report.
  const auto point = row_from_report(
      parent, capacity(cfg, parent, HwiModel{1.0, 1.0},
                       NoiseMethod::disk_closed_form));
  REQUIRE(rows.front().n_eff == point.n_eff);
  REQUIRE(rows.front().capacity_nat == point.capacity_nat);

  // HWI decreases with M for beta >= 1, so n_eff is nonincreasing.
  for (std::size_t i = 1; i < rows.size(); ++i)
    REQUIRE(rows[i].n_eff <= rows[i - 1].n_eff);

  const std::string csv = render_csv(rows);
  REQUIRE(csv.substr(0, csv.find('\n')) ==
          "A,tau,area,zeta,n_eff,sigma,sigma_db,capacity_nat,utility,gamma0,m_units");

  const auto parsed = nlohmann::json::parse(render_json(rows));
  REQUIRE(parsed[0]["m_units"].get<int>() == 1);
}

TEST_CASE("bits conversion divides the capacity column by ln 2", "[sweep]") {
  SweepSpec spec{SweepVariable::tau, 0.1, 1.0, 3, SweepScale::linear};
  const auto rows = sweep_rows(kCfg, HwiModel::none(),
                               NoiseMethod::disk_closed_form, spec);
  const auto bits = capacity_in_bits(rows);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(bits[i].capacity_nat ==
            Catch::Approx(rows[i].capacity_nat / std::numbers::ln2).epsilon(1e-15));
    REQUIRE(bits[i].utility == rows[i].utility);  // capacity only
  }
  const std::string csv = render_csv(bits, "capacity_bits");
  REQUIRE(csv.find("capacity_bits") != std::string::npos);
  REQUIRE(csv.find("capacity_nat") == std::string::npos);
  const auto parsed = nlohmann::json::parse(render_json(bits, "capacity_bits"));
  REQUIRE(parsed[0].contains("capacity_bits"));
}

TEST_CASE("infinite gamma0 renders as the inf sentinel", "[sweep]") {
  OutputRow row{};
  row.gamma0 = std::numeric_limits<double>::infinity();
  const std::string csv = render_csv({row});
  REQUIRE(csv.find(",inf") != std::string::npos);
  const auto parsed = nlohmann::json::parse(render_json({row}));
  REQUIRE(parsed[0]["gamma0"].get<std::string>() == "inf");
}
