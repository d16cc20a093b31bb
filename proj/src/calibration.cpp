#include "fmfqkd/engine.hpp"

#include <cmath>
#include <limits>

#include "fmfqkd/error.hpp"

namespace fmfqkd {

std::vector<CalibrationTarget> reported_targets() {
  return {{preset("smf"), 63.0, 2300.0, 0.040},
          {preset("lp01in"), 65.0, 1200.0, 0.038},
          {preset("lp02in"), 86.0, 1300.0, 0.037}};
}

double calibration_objective(const std::vector<CalibrationTarget>& targets, double misalignment_error,
                             double ec_efficiency, double qber_scale) {
  double total = 0.0;
  for (const auto& t : targets) {
    const ResultRow row =
        evaluate_point(with_free_params(t.scenario, misalignment_error, ec_efficiency), t.distance_km);
    if (!(row.key_rate_bps > 0.0)) return std::numeric_limits<double>::infinity();
    const double log_term = std::log(row.key_rate_bps) - std::log(t.key_rate_bps);
    const double qber_term = (row.e_mu - t.qber) / qber_scale;
    total += log_term * log_term + qber_term * qber_term;
  }
  return total;
}

namespace {

// Minimizes g on [a, b]; returns the best abscissa seen (including the
// starting point x0 with value g0).
template <typename F>
std::pair<double, double> golden_section(F&& g, double a, double b, double x0, double g0) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double best_x = x0;
  double best_g = g0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int i = 0; i < 60 && (b - a) > 1e-10; ++i) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
    if (gc < best_g) best_x = c, best_g = gc;
    if (gd < best_g) best_x = d, best_g = gd;
  }
  return {best_x, best_g};
}

}  // namespace

CalibrationReport calibrate(const std::vector<CalibrationTarget>& targets, const CalibrationGrid& grid) {
  if (targets.empty()) throw DomainError("calibration needs at least one target");
  const auto objective = [&](double ed, double f) {
    return calibration_objective(targets, ed, f, grid.qber_scale);
  };

  const auto ed_n = static_cast<int>(std::round((grid.ed_max - grid.ed_min) / grid.ed_step));
  const auto f_n = static_cast<int>(std::round((grid.f_max - grid.f_min) / grid.f_step));
  double best_ed = grid.ed_min;
  double best_f = grid.f_min;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= ed_n; ++i) {
    for (int j = 0; j <= f_n; ++j) {
      const double ed = grid.ed_min + i * grid.ed_step;
      const double f = grid.f_min + j * grid.f_step;
      const double v = objective(ed, f);
      if (v < best) best = v, best_ed = ed, best_f = f;
    }
  }
  if (!std::isfinite(best)) {
    throw CalibrationError("calibration objective is non-finite on the whole (e_d, f) grid: "
                           "no target has a positive simulated key rate for any grid point");
  }

  // Coordinate-wise refinement inside one grid cell around the best node.
  for (int round = 0; round < 3; ++round) {
    auto [ed, v1] = golden_section([&](double x) { return objective(x, best_f); },
                                   std::max(grid.ed_min, best_ed - grid.ed_step),
                                   std::min(grid.ed_max, best_ed + grid.ed_step), best_ed, best);
    best_ed = ed;
    best = v1;
    auto [f, v2] = golden_section([&](double x) { return objective(best_ed, x); },
                                  std::max(grid.f_min, best_f - grid.f_step), std::min(grid.f_max, best_f + grid.f_step),
                                  best_f, best);
    best_f = f;
    best = v2;
  }

  CalibrationReport report{best_ed, best_f, best, {}};
  for (const auto& t : targets) {
    const ResultRow row = evaluate_point(with_free_params(t.scenario, best_ed, best_f), t.distance_km);
    report.residuals.push_back({t.scenario.name, t.distance_km, t.key_rate_bps, row.key_rate_bps, t.qber, row.e_mu});
  }
  return report;
}

}  // namespace fmfqkd
