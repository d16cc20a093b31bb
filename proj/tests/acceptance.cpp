// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Usage: acceptance <path-to-fmfqkd-cli> <scratch-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fmfqkd/engine.hpp"
#include "oracle/poisson_oracle.hpp"

using namespace fmfqkd;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("[%s] AC%d %s | %s | %.3f s (budget %.0f s)%s\n", ok ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), secs, budget_s, in_time ? "" : " OVER BUDGET");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <fmfqkd-cli> <scratch-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::filesystem::path scratch = argv[2];
  std::filesystem::create_directories(scratch);

  CalibrationReport calibration{};
  bool calibrated = false;

  criterion(1, "reported operating points after shared (e_d, f) calibration", 5.0, [&]() -> Outcome {
    calibration = calibrate(reported_targets());
    calibrated = true;
    bool ok = true;
    std::ostringstream d;
    d << "e_d=" << calibration.misalignment_error << " f=" << calibration.ec_efficiency << ";";
    for (const auto& r : calibration.residuals) {
      const bool rate_ok = std::abs(r.simulated_rate_bps - r.target_rate_bps) <= 0.30 * r.target_rate_bps;
      const bool qber_ok = std::abs(r.simulated_qber - r.target_qber) <= 0.005;
      ok = ok && rate_ok && qber_ok;
      d << " " << r.scenario << "@" << r.distance_km << "km rate " << fmt("%.0f", r.simulated_rate_bps) << "/"
        << fmt("%.0f", r.target_rate_bps) << (rate_ok ? "(ok)" : "(out)") << " qber "
        << fmt("%.2f%%", 100 * r.simulated_qber) << "/" << fmt("%.1f%%", 100 * r.target_qber)
        << (qber_ok ? "(ok)" : "(out)") << ";";
    }
    return {ok, d.str()};
  });

  criterion(2, "fig4-full max secure distance in [175, 195] km", 5.0, [&]() -> Outcome {
    Scenario s = preset("fig4-full");
    if (calibrated) s = with_free_params(s, calibration.misalignment_error, calibration.ec_efficiency);
    const auto r = max_distance(s, {0.0, 400.0});
    const bool ok = !r.at_boundary && r.distance_km >= 175.0 && r.distance_km <= 195.0;
    return {ok, fmt("max distance %.2f km", r.distance_km)};
  });

  criterion(3, "FMF Raman suppression", 1.0, [&]() -> Outcome {
    const auto smf = preset("smf"), lp01 = preset("lp01in"), lp02 = preset("lp02in");
    const auto alpha = [](const Scenario& s) {
      return s.link.fiber.attenuation_db_per_km(s.link.scheme.quantum_mode, Band::Quantum);
    };
    const auto rep = fmf_suppression({smf.raman, alpha(smf)}, {lp01.raman, alpha(lp01)}, {lp02.raman, alpha(lp02)},
                                     10.0, 80.0);
    const bool coeff_ok = std::abs(rep.coefficient_reduction - 0.781) <= 0.001;
    const bool detected_ok = rep.detected_reduction >= 0.78 && rep.detected_reduction <= 0.90;
    return {coeff_ok && detected_ok, fmt("coefficient %.2f%%", 100 * rep.coefficient_reduction) +
                                         fmt(", detected 10-80 km %.2f%%", 100 * rep.detected_reduction)};
  });

  criterion(4, "decoy bounds vs Poisson oracle, 1e4 random channels", 10.0, [&]() -> Outcome {
    const DecoyIntensities in;
    std::mt19937_64 rng(20210415);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0, defined_e1 = 0;
    for (int i = 0; i < 10000; ++i) {
      const oracle::PoissonChannel ch{std::pow(10.0, -6.0 * u(rng)), 1e-2 * u(rng), 0.1 * u(rng)};
      const double qmu = ch.gain(in.mu), qnu = ch.gain(in.nu), enu = ch.qber(in.nu);
      const double y1 = y1_lower_bound(qmu, qnu, in, ch.y0).value;
      if (y1 > ch.true_y1() * (1 + 1e-9)) ++violations;
      if (const auto e1 = e1_upper_bound(qnu, enu, in.nu, y1, ch.y0, 0.5)) {
        ++defined_e1;
        if (e1->value < ch.true_e1() * (1 - 1e-9)) ++violations;
      }
    }
    return {violations == 0, std::to_string(violations) + " violations (" + std::to_string(defined_e1) +
                                 " defined e1 bounds)"};
  });

  criterion(5, "analytic invariants", 1.0, [&]() -> Outcome {
    double worst_sym = 0.0;
    bool monotone = true;
    double prev = -1.0;
    for (int i = 0; i <= 10000; ++i) {
      const double x = i / 10000.0;
      worst_sym = std::max(worst_sym, std::abs(binary_entropy(x) - binary_entropy(1 - x)));
      if (x <= 0.5) {
        monotone = monotone && binary_entropy(x) > prev;
        prev = binary_entropy(x);
      }
    }
    const bool endpoints = binary_entropy(0.0) == 0.0 && binary_entropy(1.0) == 0.0 &&
                           std::abs(binary_entropy(0.5) - 1.0) <= 1e-12;

    bool linear = true;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const RamanCoefficient rho{1000 + 14000 * u(rng), SchemeName::Smf};
      const double p = 2 * u(rng), l = 150 * u(rng), a = 0.15 + 0.15 * u(rng);
      linear = linear && srs_noise_rate_cps(2 * p, rho, l, a) == 2 * srs_noise_rate_cps(p, rho, l, a);
    }

    // Locate the maximum of the noise curve by central differences on a
    // 0.01 km grid and compare with the closed form.
    double worst_peak = 0.0;
    for (double alpha : {0.165, 0.190, 0.226, 0.257}) {
      const RamanCoefficient rho{2655.0, SchemeName::Lp02In};
      const auto slope = [&](double d) {
        return srs_noise_rate_cps(0.55, rho, d + 1e-4, alpha) - srs_noise_rate_cps(0.55, rho, d - 1e-4, alpha);
      };
      double found = -1.0;
      for (double d = 1.0; d < 200.0; d += 0.01) {
        if (slope(d) > 0 && slope(d + 0.01) <= 0) {
          found = d + 0.005;
          break;
        }
      }
      worst_peak = std::max(worst_peak, std::abs(found - 10.0 / (alpha * std::log(10.0))));
    }
    const bool ok = worst_sym <= 1e-12 && monotone && endpoints && linear && worst_peak <= 0.1;
    return {ok, "H2 symmetry err " + fmt("%.1e", worst_sym) + (endpoints ? ", endpoints ok" : ", endpoints BAD") +
                    (monotone ? ", monotone" : ", NOT monotone") + (linear ? ", power-linear" : ", NOT linear") +
                    fmt(", peak err %.3f km", worst_peak)};
  });

  criterion(6, "fit and calibration round-trips", 30.0, [&]() -> Outcome {
    const RamanCoefficient truth{2637.0, SchemeName::Lp01In};
    std::vector<NoiseMeasurement> ms;
    for (double d : {10.0, 25.0, 50.0, 75.0, 100.0}) ms.push_back({d, 0.55, srs_noise_rate_cps(0.55, truth, d, 0.257)});
    const double rho = fit_raman_coefficient(ms, 0.257).rho_cps_per_mw_km;
    const double rel = std::abs(rho - 2637.0) / 2637.0;

    const double ed = 0.017, f = 1.31;
    std::vector<CalibrationTarget> targets;
    for (auto [name, km] : {std::pair{"smf", 63.0}, {"lp01in", 65.0}, {"lp02in", 86.0}}) {
      const Scenario s = preset(name);
      const auto row = evaluate_point(with_free_params(s, ed, f), km);
      targets.push_back({s, km, row.key_rate_bps, row.e_mu});
    }
    const auto rep = calibrate(targets);
    const double ed_err = std::abs(rep.misalignment_error - ed), f_err = std::abs(rep.ec_efficiency - f);
    const bool ok = rel <= 1e-9 && ed_err <= 0.001 && f_err <= 0.01;
    return {ok, fmt("rho rel err %.1e", rel) + fmt(", e_d err %.1e", ed_err) + fmt(", f err %.1e", f_err)};
  });

  criterion(7, "CLI sweep determinism", 30.0, [&]() -> Outcome {
    std::vector<std::string> outputs;
    for (int run = 0; run < 2; ++run) {
      const auto path = scratch / ("determinism_" + std::to_string(run) + ".csv");
      std::filesystem::remove(path);
      const std::string cmd = "\"" + cli + "\" sweep --preset lp02in --from-km 0 --to-km 100 --step-km 1 > \"" +
                              path.string() + "\"";
      if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
      outputs.push_back(slurp(path));
    }
    const bool same = outputs[0] == outputs[1] && !outputs[0].empty();
    const auto lines = std::count(outputs[0].begin(), outputs[0].end(), '\n');
    return {same, std::string(same ? "byte-identical" : "DIFFERENT") + ", " + std::to_string(lines) + " lines"};
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
