#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fmfqkd/link_model.hpp"

namespace fmfqkd {

/// Lumped forward-SRS coefficient in detected counts/s per mW of
/// fiber-input power per km. Detector efficiency, narrowband filtering and
/// modal isolation are already folded in.
struct RamanCoefficient {
  double rho_cps_per_mw_km = 0.0;
  SchemeName scheme = SchemeName::Smf;

  void validate() const;
};

struct NoiseMeasurement {
  double distance_km = 0.0;
  double fiber_input_power_mw = 0.0;
  double measured_rate_cps = 0.0;
};

/// Measured average coefficients for the three multiplexing schemes.
RamanCoefficient measured_raman_coefficient(SchemeName scheme);

/// Co-propagating noise at the quantum receiver:
/// P * rho * L * 10^(-alpha * L / 10).
double srs_noise_rate_cps(double power_mw, const RamanCoefficient& rho, double distance_km,
                          double alpha_db_per_km);

/// rate / clock clamped to [0, 1].
double noise_prob_per_pulse(double rate_cps, double clock_hz);

/// Closed-form least squares for rate = rho * m with
/// m = P * L * 10^(-alpha L / 10). Throws DegenerateError if every m is 0.
RamanCoefficient fit_raman_coefficient(std::span<const NoiseMeasurement> measurements,
                                       double alpha_db_per_km, SchemeName scheme = SchemeName::Smf);

/// Reads `distance_km,power_mw,rate_cps` CSV. Throws ParseError / IoError.
std::vector<NoiseMeasurement> read_noise_measurements(std::istream& in);
std::vector<NoiseMeasurement> read_noise_measurements(const std::string& path);

/// Distance at which the forward-noise curve peaks: 10 / (alpha ln 10).
double srs_peak_distance_km(double alpha_db_per_km);

struct SuppressionReport {
  double coefficient_reduction;  // 1 - mean(rho_fmf) / rho_smf
  double detected_reduction;     // 1 - sum_L mean(noise_fmf) / sum_L noise_smf
};

/// Compares the two FMF schemes against SMF at equal fiber-input power
/// over an integer-km grid [from_km, to_km]. Each curve uses its own
/// quantum-path attenuation.
struct NoiseCurve {
  RamanCoefficient rho;
  double alpha_db_per_km;
};
SuppressionReport fmf_suppression(const NoiseCurve& smf, const NoiseCurve& lp01_in, const NoiseCurve& lp02_in,
                                  double from_km, double to_km, double step_km = 1.0);

}  // namespace fmfqkd
