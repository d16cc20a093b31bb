#include "fmfqkd/raman_noise.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fmfqkd/error.hpp"
#include "text_util.hpp"

namespace fmfqkd {

void RamanCoefficient::validate() const {
  if (!(rho_cps_per_mw_km > 0.0) || !std::isfinite(rho_cps_per_mw_km)) {
    throw ConfigError("Raman coefficient must be positive, got " + std::to_string(rho_cps_per_mw_km));
  }
}

RamanCoefficient measured_raman_coefficient(SchemeName scheme) {
  switch (scheme) {
    case SchemeName::Smf: return {12076.0, scheme};
    case SchemeName::Lp01In: return {2637.0, scheme};
    case SchemeName::Lp02In: return {2655.0, scheme};
  }
  throw ConfigError("unknown multiplex scheme");
}

namespace {

double regressor(double power_mw, double distance_km, double alpha_db_per_km) {
  return power_mw * distance_km * std::pow(10.0, -alpha_db_per_km * distance_km / 10.0);
}

}  // namespace

double srs_noise_rate_cps(double power_mw, const RamanCoefficient& rho, double distance_km,
                          double alpha_db_per_km) {
  if (!(power_mw >= 0.0) || !(rho.rho_cps_per_mw_km >= 0.0) || !(distance_km >= 0.0) ||
      !(alpha_db_per_km >= 0.0)) {
    throw DomainError("SRS noise inputs must be non-negative");
  }
  return rho.rho_cps_per_mw_km * regressor(power_mw, distance_km, alpha_db_per_km);
}

double noise_prob_per_pulse(double rate_cps, double clock_hz) {
  if (!(clock_hz > 0.0)) throw DomainError("clock must be positive");
  if (!(rate_cps >= 0.0)) throw DomainError("count rate must be non-negative");
  return std::min(1.0, rate_cps / clock_hz);
}

RamanCoefficient fit_raman_coefficient(std::span<const NoiseMeasurement> measurements,
                                       double alpha_db_per_km, SchemeName scheme) {
  if (!(alpha_db_per_km >= 0.0)) throw DomainError("attenuation must be non-negative");
  double num = 0.0;
  double den = 0.0;
  for (const auto& m : measurements) {
    if (!(m.distance_km >= 0.0) || !(m.fiber_input_power_mw >= 0.0) || !(m.measured_rate_cps >= 0.0)) {
      throw DomainError("noise measurements must be non-negative");
    }
    const double x = regressor(m.fiber_input_power_mw, m.distance_km, alpha_db_per_km);
    num += m.measured_rate_cps * x;
    den += x * x;
  }
  if (!(den > 0.0)) {
    throw DegenerateError("Raman fit needs at least one measurement with positive distance and power");
  }
  return {num / den, scheme};
}

std::vector<NoiseMeasurement> read_noise_measurements(std::istream& in) {
  std::vector<NoiseMeasurement> out;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto fields = detail::split(trimmed, ',');
    if (!header_seen) {
      if (fields.size() != 3 || detail::trim(fields[0]) != "distance_km" || detail::trim(fields[1]) != "power_mw" ||
          detail::trim(fields[2]) != "rate_cps") {
        throw ParseError(lineno, "expected header 'distance_km,power_mw,rate_cps'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) throw ParseError(lineno, "expected 3 fields, got " + std::to_string(fields.size()));
    NoiseMeasurement m{detail::parse_double(fields[0], lineno, "distance_km"),
                       detail::parse_double(fields[1], lineno, "power_mw"),
                       detail::parse_double(fields[2], lineno, "rate_cps")};
    if (m.distance_km < 0 || m.fiber_input_power_mw < 0 || m.measured_rate_cps < 0) {
      throw ParseError(lineno, "measurement fields must be non-negative");
    }
    out.push_back(m);
  }
  if (!header_seen) throw ParseError(lineno, "missing header 'distance_km,power_mw,rate_cps'");
  return out;
}

std::vector<NoiseMeasurement> read_noise_measurements(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open measurement file '" + path + "'");
  return read_noise_measurements(in);
}

double srs_peak_distance_km(double alpha_db_per_km) {
  if (!(alpha_db_per_km > 0.0)) throw DomainError("attenuation must be positive");
  return 10.0 / (alpha_db_per_km * std::log(10.0));
}

SuppressionReport fmf_suppression(const NoiseCurve& smf, const NoiseCurve& lp01_in, const NoiseCurve& lp02_in,
                                  double from_km, double to_km, double step_km) {
  if (!(step_km > 0.0) || !(from_km >= 0.0) || !(to_km >= from_km)) {
    throw DomainError("invalid suppression distance grid");
  }
  const double fmf_mean_rho = 0.5 * (lp01_in.rho.rho_cps_per_mw_km + lp02_in.rho.rho_cps_per_mw_km);
  const auto n = static_cast<long>(std::floor((to_km - from_km) / step_km + 1e-9)) + 1;
  double smf_sum = 0.0;
  double fmf_sum = 0.0;
  for (long i = 0; i < n; ++i) {
    const double d = from_km + static_cast<double>(i) * step_km;
    smf_sum += srs_noise_rate_cps(1.0, smf.rho, d, smf.alpha_db_per_km);
    fmf_sum += 0.5 * (srs_noise_rate_cps(1.0, lp01_in.rho, d, lp01_in.alpha_db_per_km) +
                      srs_noise_rate_cps(1.0, lp02_in.rho, d, lp02_in.alpha_db_per_km));
  }
  if (!(smf_sum > 0.0)) throw DegenerateError("reference SMF noise is zero over the grid");
  return {1.0 - fmf_mean_rho / smf.rho.rho_cps_per_mw_km, 1.0 - fmf_sum / smf_sum};
}

}  // namespace fmfqkd
