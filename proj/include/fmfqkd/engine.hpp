#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fmfqkd/scenario.hpp"

namespace fmfqkd {

struct ResultRow {
  double distance_km = 0.0;
  double launch_power_dbm = 0.0;
  double quantum_loss_db = 0.0;
  double classical_loss_db = 0.0;
  double srs_rate_cps = 0.0;
  double y0 = 0.0;
  double q_mu = 0.0;
  double e_mu = 0.0;
  double y1_lower = 0.0;
  double e1_upper = 0.0;
  double key_rate_bps = 0.0;
  bool classical_feasible = true;
  int clamp_events = 0;  // diagnostics; not serialized
};

/// Classical launch power at a distance: fixed, or the minimum that reaches
/// the receiver, capped at the reference power.
double launch_power_dbm_at(const Scenario& s, double distance_km);

double srs_rate_at(const Scenario& s, double distance_km);

ChannelPoint channel_at(const Scenario& s, double distance_km);

/// Evaluates one distance. Errors are rethrown with the distance attached.
ResultRow evaluate_point(const Scenario& s, double distance_km);

/// One row per grid point in ascending distance. Points are evaluated in
/// parallel when `threads` > 1; output order does not depend on it.
std::vector<ResultRow> run_sweep(const Scenario& s, const SweepSpec& sweep, unsigned threads = 1);

MaxDistanceResult max_distance(const Scenario& s, DistanceRange range = {});

/// Copy of the scenario with the free protocol parameters replaced.
Scenario with_free_params(Scenario s, double misalignment_error, double ec_efficiency);

// ---------------------------------------------------------------------------
// Calibration of (e_d, f) shared across schemes.

struct CalibrationTarget {
  Scenario scenario;
  double distance_km;
  double key_rate_bps;
  double qber;
};

/// The three reported operating points (SMF 63 km, LP01-in 65 km, LP02-in 86 km).
std::vector<CalibrationTarget> reported_targets();

struct CalibrationResidual {
  std::string scenario;
  double distance_km;
  double target_rate_bps;
  double simulated_rate_bps;
  double target_qber;
  double simulated_qber;
};

struct CalibrationReport {
  double misalignment_error;
  double ec_efficiency;
  double objective;
  std::vector<CalibrationResidual> residuals;
};

struct CalibrationGrid {
  double ed_min = 0.0, ed_max = 0.05, ed_step = 0.001;
  double f_min = 1.0, f_max = 1.5, f_step = 0.01;
  double qber_scale = 0.005;
};

/// Sum over targets of (ln R_sim - ln R_target)^2 + ((E_sim - E_target)/scale)^2.
/// Infinite when any simulated rate is not positive.
double calibration_objective(const std::vector<CalibrationTarget>& targets, double misalignment_error,
                             double ec_efficiency, double qber_scale = 0.005);

/// Grid search then golden-section refinement. Throws DomainError on empty
/// targets and CalibrationError if the objective is nowhere finite.
CalibrationReport calibrate(const std::vector<CalibrationTarget>& targets, const CalibrationGrid& grid = {});

// ---------------------------------------------------------------------------
// Result emission

enum class OutputFormat { Csv, Json };

inline constexpr const char* kResultCsvHeader =
    "distance_km,launch_power_dbm,quantum_loss_db,classical_loss_db,srs_rate_cps,y0,q_mu,e_mu,y1_lower,"
    "e1_upper,key_rate_bps,classical_feasible";

void write_results(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out);

/// Throws IoError naming the path.
void emit_results(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path);

std::vector<ResultRow> read_results_csv(std::istream& in);
std::vector<ResultRow> read_results_json(std::istream& in);

}  // namespace fmfqkd
