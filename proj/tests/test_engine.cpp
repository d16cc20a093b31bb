#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fmfqkd/engine.hpp"
#include "fmfqkd/error.hpp"

using namespace fmfqkd;

namespace {

std::string csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results(rows, OutputFormat::Csv, out);
  return out.str();
}

}  // namespace

TEST_CASE("sweep shape") {
  const auto rows = run_sweep(preset("smf"), {0, 100, 1});
  REQUIRE(rows.size() == 101);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].distance_km == static_cast<double>(i));
  CHECK(run_sweep(preset("smf"), {42, 42, 1}).size() == 1);
}

TEST_CASE("sweep rows are consistent with the model modules") {
  const Scenario s = preset("smf");
  const ResultRow r = evaluate_point(s, 63.0);
  CHECK(r.quantum_loss_db == doctest::Approx(12.82).epsilon(1e-12));
  CHECK(r.launch_power_dbm == -2.60);
  CHECK(r.srs_rate_cps ==
        doctest::Approx(dbm_to_mw(-2.60) * 12076.0 * 63.0 * std::pow(10.0, -0.190 * 63 / 10)).epsilon(1e-12));
  CHECK(r.y0 == doctest::Approx(2.4e-6 + r.srs_rate_cps / 625e6).epsilon(1e-12));
  CHECK(r.classical_feasible);
  CHECK(r.key_rate_bps > 0.0);
  for (double v : {r.y0, r.q_mu, r.e_mu, r.y1_lower, r.e1_upper}) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("pump-attenuation and gate-clock switches change the noise term") {
  Scenario s = preset("lp02in");
  const double base = srs_rate_at(s, 50);
  s.noise_attenuation = NoiseAttenuation::PumpPath;
  CHECK(srs_rate_at(s, 50) < base);  // LP02 attenuates more than LP01
  Scenario g = preset("lp02in");
  const double y0_pulse = channel_at(g, 50).y0;
  g.noise_clock = NoiseClock::GateClock;
  CHECK(channel_at(g, 50).y0 < y0_pulse);
}

TEST_CASE("sweep is deterministic and thread-count independent") {
  const Scenario s = preset("lp02in");
  const std::string a = csv(run_sweep(s, {0, 100, 1}));
  const std::string b = csv(run_sweep(s, {0, 100, 1}));
  const std::string c = csv(run_sweep(s, {0, 100, 1}, 4));
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("key rate does not revive after reaching zero") {
  for (const auto& name : preset_names()) {
    const auto rows = run_sweep(preset(name), {0, 260, 0.5});
    bool dead = false;
    for (const auto& r : rows) {
      if (dead) CHECK(r.key_rate_bps == 0.0);
      if (r.key_rate_bps == 0.0) dead = true;
    }
    CHECK(dead);
  }
}

TEST_CASE("improvement scenarios are ordered") {
  const SweepSpec sw{0, 250, 1};
  const auto base = run_sweep(preset("lp02in"), sw);
  const auto power = run_sweep(preset("fig4-power"), sw);
  const auto fmf = run_sweep(preset("fig4-power-fmf"), sw);
  const auto full = run_sweep(preset("fig4-full"), sw);
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i].key_rate_bps > 0 && power[i].key_rate_bps > 0 && fmf[i].key_rate_bps > 0 &&
        full[i].key_rate_bps > 0) {
      CHECK(full[i].key_rate_bps >= fmf[i].key_rate_bps);
      CHECK(fmf[i].key_rate_bps >= power[i].key_rate_bps);
      CHECK(power[i].key_rate_bps >= base[i].key_rate_bps);
    }
  }
}

TEST_CASE("adaptive launch power") {
  const Scenario s = preset("fig4-power");
  for (const auto& r : run_sweep(s, {0, 200, 1})) {
    const double needed = classical_min_launch_power_dbm(s.link.with_length(r.distance_km), s.receiver_sensitivity_dbm);
    CHECK(r.launch_power_dbm <= s.reference_power_dbm);
    if (needed <= s.reference_power_dbm) {
      CHECK(r.classical_feasible);
      CHECK(r.launch_power_dbm == needed);
    } else {
      // Cap binds: the reference power cannot reach the receiver.
      CHECK_FALSE(r.classical_feasible);
    }
  }
  // Fixed power loses feasibility once the link is too lossy.
  const auto far = evaluate_point(preset("lp02in"), 100.0);
  CHECK_FALSE(far.classical_feasible);
}

TEST_CASE("baseline LP02-in is secure at 86 km and has a finite cliff") {
  const Scenario s = preset("lp02in");
  CHECK(evaluate_point(s, 86).key_rate_bps > 0.0);
  const auto md = max_distance(s);
  CHECK_FALSE(md.at_boundary);
  CHECK(md.distance_km > 86.0);
  CHECK(evaluate_point(s, md.distance_km + 0.01).key_rate_bps == 0.0);
}

TEST_CASE("errors carry the distance") {
  try {
    evaluate_point(preset("smf"), -3.0);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("-3 km") != std::string::npos);
  }
}

TEST_CASE("calibration preconditions and failure") {
  CHECK_THROWS_AS(calibrate({}), DomainError);
  std::vector<CalibrationTarget> hopeless = {{preset("smf"), 500.0, 1000.0, 0.03}};
  CHECK_THROWS_AS(calibrate(hopeless), CalibrationError);
  CHECK(std::isinf(calibration_objective(hopeless, 0.01, 1.1)));
}

TEST_CASE("calibration recovers synthetic parameters") {
  const double ed = 0.021, f = 1.23;
  std::vector<CalibrationTarget> targets;
  for (auto [name, km] : {std::pair{"smf", 50.0}, {"lp01in", 40.0}, {"lp02in", 70.0}}) {
    const Scenario s = preset(name);
    const auto row = evaluate_point(with_free_params(s, ed, f), km);
    targets.push_back({s, km, row.key_rate_bps, row.e_mu});
  }
  const auto rep = calibrate(targets);
  CHECK(std::abs(rep.misalignment_error - ed) <= 0.001);
  CHECK(std::abs(rep.ec_efficiency - f) <= 0.01);
  CHECK(rep.objective < 1e-6);
  REQUIRE(rep.residuals.size() == 3);
  CHECK(rep.residuals[0].scenario == "smf");
}

TEST_CASE("calibration stays inside its box") {
  const auto rep = calibrate(reported_targets());
  CHECK(rep.misalignment_error >= 0.0);
  CHECK(rep.misalignment_error <= 0.05);
  CHECK(rep.ec_efficiency >= 1.0);
  CHECK(rep.ec_efficiency <= 1.5);
  CHECK(std::isfinite(rep.objective));
}

TEST_CASE("result emission") {
  CHECK(csv({}) == std::string(kResultCsvHeader) + "\n");

  const auto one = run_sweep(preset("lp02in"), {10, 10, 1});
  const std::string text = csv(one);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  const std::string data = text.substr(text.find('\n') + 1);
  CHECK(std::count(data.begin(), data.end(), ',') == 11);
}

TEST_CASE("CSV and JSON round-trip to full precision") {
  const auto rows = run_sweep(preset("fig4-power"), {0, 150, 7.5});
  for (OutputFormat fmt : {OutputFormat::Csv, OutputFormat::Json}) {
    std::stringstream buf;
    write_results(rows, fmt, buf);
    const auto back = fmt == OutputFormat::Csv ? read_results_csv(buf) : read_results_json(buf);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double a[] = {rows[i].distance_km, rows[i].launch_power_dbm, rows[i].quantum_loss_db,
                          rows[i].classical_loss_db, rows[i].srs_rate_cps, rows[i].y0, rows[i].q_mu, rows[i].e_mu,
                          rows[i].y1_lower, rows[i].e1_upper, rows[i].key_rate_bps};
      const double b[] = {back[i].distance_km, back[i].launch_power_dbm, back[i].quantum_loss_db,
                          back[i].classical_loss_db, back[i].srs_rate_cps, back[i].y0, back[i].q_mu, back[i].e_mu,
                          back[i].y1_lower, back[i].e1_upper, back[i].key_rate_bps};
      for (int k = 0; k < 11; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-12 * std::abs(a[k]));
      CHECK(back[i].classical_feasible == rows[i].classical_feasible);
    }
  }
}

TEST_CASE("emit to an unwritable path") {
  CHECK_THROWS_AS(emit_results({}, OutputFormat::Csv, "/nonexistent-dir/out.csv"), IoError);
}
