#pragma once

/// Adaptive 2-D integration over axis-aligned rectangles.
///
/// Each panel is estimated with a tensor-product Gauss(7)/Kronrod(15) pair;
/// the Gauss value reuses the Kronrod grid, so a panel costs 225 integrand
/// calls and the |K - G| difference serves as the local error estimate.
/// Refinement is globally adaptive: the panel with the largest error is
/// bisected along its wider axis until the summed error meets the tolerance,
/// every split being limited to `max_depth` generations. The whole procedure
/// is serial and tie-breaks on panel insertion order, so results are
/// bit-reproducible for fixed settings.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace liscap {

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 20;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod abscissae on [-1, 1] in descending order (QUADPACK dqk15);
// the 7-point Gauss rule lives on abscissae 1, 3, 5 and 0.
inline constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Gk15Line {
  double node[15];
  double wk[15];
  double wg[15];  // zero on pure-Kronrod abscissae
};

inline constexpr Gk15Line make_gk15_line() {
  Gk15Line line{};
  for (int i = 0; i < 7; ++i) {
    line.node[i] = -kKronrodX[i];
    line.node[14 - i] = kKronrodX[i];
    line.wk[i] = kKronrodW[i];
    line.wk[14 - i] = kKronrodW[i];
  }
  line.node[7] = 0.0;
  line.wk[7] = kKronrodW[7];
  for (int i = 0; i < 15; ++i) line.wg[i] = 0.0;
  for (int i = 0; i < 3; ++i) {
    line.wg[2 * i + 1] = kGaussW[i];
    line.wg[13 - 2 * i] = kGaussW[i];
  }
  line.wg[7] = kGaussW[3];
  return line;
}

inline constexpr Gk15Line kGk15 = make_gk15_line();

struct Panel {
  double x_lo, x_hi, y_lo, y_hi;
  double value;
  double error;
  int depth;
  std::uint64_t id;
};

struct PanelOrder {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.id > b.id;  // older panel wins ties
  }
};

template <class F>
inline void evaluate_panel(F&& f, Panel& p) {
  const double hx = 0.5 * (p.x_hi - p.x_lo);
  const double cx = 0.5 * (p.x_hi + p.x_lo);
  const double hy = 0.5 * (p.y_hi - p.y_lo);
  const double cy = 0.5 * (p.y_hi + p.y_lo);

  double kron = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double x = cx + hx * kGk15.node[i];
    double row_k = 0.0;
    double row_g = 0.0;
    for (int j = 0; j < 15; ++j) {
      const double fv = f(x, cy + hy * kGk15.node[j]);
      row_k += kGk15.wk[j] * fv;
      row_g += kGk15.wg[j] * fv;
    }
    kron += kGk15.wk[i] * row_k;
    gauss += kGk15.wg[i] * row_g;
  }
  p.value = hx * hy * kron;
  p.error = hx * hy * std::abs(kron - gauss);
  if (!std::isfinite(p.error)) p.error = std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Integrates f(x, y) over [x_lo, x_hi] x [y_lo, y_hi].
///
/// Does not throw on non-convergence: the result carries converged = false
/// and the achieved error estimate, and the caller decides how to react.
template <class F>
QuadratureResult integrate_rect(F&& f, double x_lo, double x_hi, double y_lo,
                                double y_hi,
                                const QuadratureSettings& settings = {}) {
  if (!(x_lo < x_hi) || !(y_lo < y_hi))
    throw std::invalid_argument("integrate_rect: empty or inverted rectangle");
  if (!(settings.abs_tol > 0.0) && !(settings.rel_tol > 0.0))
    throw std::invalid_argument("integrate_rect: need abs_tol > 0 or rel_tol > 0");
  if (settings.max_depth < 1)
    throw std::invalid_argument("integrate_rect: max_depth must be >= 1");

  const double abs_tol = settings.abs_tol > 0.0 ? settings.abs_tol : 0.0;
  const double rel_tol = settings.rel_tol > 0.0 ? settings.rel_tol : 0.0;
  const auto tolerance = [&](double total) {
    return std::max(abs_tol, rel_tol * std::abs(total));
  };

  std::uint64_t next_id = 0;
  std::int64_t evaluations = 0;

  detail::Panel root{x_lo, x_hi, y_lo, y_hi, 0.0, 0.0, 0, next_id++};
  detail::evaluate_panel(f, root);
  evaluations += 225;

  std::priority_queue<detail::Panel, std::vector<detail::Panel>,
                      detail::PanelOrder>
      active;
  std::vector<detail::Panel> exhausted;  // panels at max_depth
  active.push(root);

  double total_value = root.value;
  double total_error = root.error;

  while (!active.empty() && total_error > tolerance(total_value)) {
    detail::Panel parent = active.top();
    active.pop();
    if (parent.depth >= settings.max_depth) {
      exhausted.push_back(parent);
      continue;
    }

    detail::Panel a = parent;
    detail::Panel b = parent;
    if (parent.x_hi - parent.x_lo >= parent.y_hi - parent.y_lo) {
      const double mid = 0.5 * (parent.x_lo + parent.x_hi);
      a.x_hi = mid;
      b.x_lo = mid;
    } else {
      const double mid = 0.5 * (parent.y_lo + parent.y_hi);
      a.y_hi = mid;
      b.y_lo = mid;
    }
    a.depth = b.depth = parent.depth + 1;
    a.id = next_id++;
    b.id = next_id++;
    detail::evaluate_panel(f, a);
    detail::evaluate_panel(f, b);
    evaluations += 450;

    total_value += a.value + b.value - parent.value;
    total_error += a.error + b.error - parent.error;
    active.push(a);
    active.push(b);
  }

  // Clean final sums over all leaves in insertion order.
  std::vector<detail::Panel> leaves = std::move(exhausted);
  while (!active.empty()) {
    leaves.push_back(active.top());
    active.pop();
  }
  std::sort(leaves.begin(), leaves.end(),
            [](const detail::Panel& a, const detail::Panel& b) {
              return a.id < b.id;
            });

  QuadratureResult result;
  result.evaluations = evaluations;
  for (const auto& leaf : leaves) {
    result.value += leaf.value;
    result.error_estimate += leaf.error;
  }
  result.converged = result.error_estimate <= tolerance(result.value);
  return result;
}

}  // namespace liscap
