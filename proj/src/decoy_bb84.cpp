#include "fmfqkd/decoy_bb84.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fmfqkd/error.hpp"

namespace fmfqkd {

void DecoyIntensities::validate() const {
  if (!(omega == 0.0)) throw ConfigError("vacuum intensity must be exactly 0");
  if (!(nu > 0.0) || !(mu > nu)) throw ConfigError("intensities must satisfy mu > nu > 0");
  if (!(p_mu > 0.0 && p_nu > 0.0 && p_omega > 0.0)) throw ConfigError("emission probabilities must be positive");
  if (std::abs(p_mu + p_nu + p_omega - 1.0) > 1e-12) throw ConfigError("emission probabilities must sum to 1");
}

void DetectorSpec::validate() const {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw ConfigError("detector efficiency must lie in (0, 1]");
  if (!(dark_count_per_gate >= 0.0 && dark_count_per_gate < 1.0)) {
    throw ConfigError("dark count per gate must lie in [0, 1)");
  }
  if (!(gate_hz > 0.0)) throw ConfigError("gate frequency must be positive");
  if (num_detectors < 1) throw ConfigError("at least one detector is required");
}

void ProtocolParams::validate() const {
  if (!(clock_hz > 0.0)) throw ConfigError("clock must be positive");
  if (background_error != 0.5) throw ConfigError("background error e_0 must be exactly 0.5");
  if (!(misalignment_error >= 0.0 && misalignment_error < 0.5)) {
    throw ConfigError("misalignment error must lie in [0, 0.5)");
  }
  if (!(ec_efficiency >= 1.0)) throw ConfigError("error-correction efficiency must be >= 1");
  if (!(sifting_factor > 0.0 && sifting_factor <= 1.0)) throw ConfigError("sifting factor must lie in (0, 1]");
  if (block_size_bits <= 0) throw ConfigError("block size must be positive");
}

void ChannelPoint::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0, 1], got " + std::to_string(eta));
  if (!(y0 >= 0.0 && y0 < 1.0)) throw DomainError("Y0 must lie in [0, 1), got " + std::to_string(y0));
}

double background_yield(const DetectorSpec& detector, const ProtocolParams& params, double noise_prob,
                        DarkCountGating gating) {
  const double gates_per_pulse = gating == DarkCountGating::GateClockRatio ? detector.gate_hz / params.clock_hz : 1.0;
  const double dark = detector.num_detectors * detector.dark_count_per_gate * gates_per_pulse;
  return std::clamp(dark + noise_prob, 0.0, std::nextafter(1.0, 0.0));
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary entropy argument must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

GainQber gain_and_qber(double intensity, const ChannelPoint& ch, const ProtocolParams& params) {
  const double signal = -std::expm1(-ch.eta * intensity);
  const double gain = ch.y0 + signal;
  if (gain == 0.0) return {0.0, params.background_error};
  const double errors = params.background_error * ch.y0 + params.misalignment_error * signal;
  return {gain, errors / gain};
}

Bound y1_lower_bound(double q_mu, double q_nu, const DecoyIntensities& in, double y0) {
  const double mu = in.mu;
  const double nu = in.nu;
  const double denom = mu * nu - nu * nu;
  if (denom == 0.0) throw DegenerateError("decoy bound needs mu*nu != nu^2");
  const double raw = (mu / denom) * (q_nu * std::exp(nu) - q_mu * std::exp(mu) * (nu * nu) / (mu * mu) -
                                     ((mu * mu - nu * nu) / (mu * mu)) * y0);
  const double v = std::clamp(raw, 0.0, 1.0);
  return {v, v != raw};
}

std::optional<Bound> e1_upper_bound(double q_nu, double e_nu, double nu, double y1_lower, double y0,
                                    double e0) {
  if (!(y1_lower > 0.0)) return std::nullopt;
  const double raw = (e_nu * q_nu * std::exp(nu) - e0 * y0) / (y1_lower * nu);
  const double v = std::clamp(raw, 0.0, 0.5);
  return Bound{v, v != raw};
}

KeyRateBreakdown evaluate_key_rate(const ChannelPoint& ch, const DecoyIntensities& intensities,
                                   const ProtocolParams& params) {
  KeyRateBreakdown out;
  const auto sig = gain_and_qber(intensities.mu, ch, params);
  const auto dec = gain_and_qber(intensities.nu, ch, params);
  out.q_mu = sig.gain;
  out.e_mu = sig.qber;
  out.q_nu = dec.gain;
  out.e_nu = dec.qber;

  const Bound y1 = y1_lower_bound(out.q_mu, out.q_nu, intensities, ch.y0);
  out.y1_lower = y1.value;
  out.clamp_events += y1.clamped ? 1 : 0;

  const auto e1 = e1_upper_bound(out.q_nu, out.e_nu, intensities.nu, out.y1_lower, ch.y0, params.background_error);
  if (!e1) {
    out.e1_upper = 0.5;
    out.rate_per_pulse = 0.0;
    out.key_rate_bps = 0.0;
    return out;
  }
  out.e1_upper = e1->value;
  out.clamp_events += e1->clamped ? 1 : 0;

  out.q1 = out.y1_lower * intensities.mu * std::exp(-intensities.mu);
  out.rate_per_pulse =
      params.sifting_factor * (-out.q_mu * params.ec_efficiency * binary_entropy(out.e_mu) +
                               out.q1 * (1.0 - binary_entropy(out.e1_upper)));
  out.key_rate_bps = std::max(0.0, out.rate_per_pulse) * params.clock_hz * intensities.p_mu;
  return out;
}

double secure_key_rate_bps(const ChannelPoint& ch, const DecoyIntensities& intensities,
                           const ProtocolParams& params) {
  return evaluate_key_rate(ch, intensities, params).key_rate_bps;
}

MaxDistanceResult max_positive_distance_km(const std::function<double(double)>& rate, DistanceRange range) {
  if (!(range.to_km >= range.from_km) || !(range.from_km >= 0.0)) throw DomainError("invalid search range");

  std::vector<double> grid;
  for (double d = range.from_km; d < range.to_km; d += 1.0) grid.push_back(d);
  grid.push_back(range.to_km);

  std::size_t last_positive = grid.size();
  for (std::size_t i = grid.size(); i-- > 0;) {
    if (rate(grid[i]) > 0.0) {
      last_positive = i;
      break;
    }
  }
  if (last_positive == grid.size()) {
    throw NoSecureDistanceError("key rate is not positive anywhere in [" + std::to_string(range.from_km) + ", " +
                                std::to_string(range.to_km) + "] km");
  }
  if (last_positive + 1 == grid.size()) return {range.to_km, true};

  double lo = grid[last_positive];
  double hi = grid[last_positive + 1];
  while (hi - lo > 0.005) {
    const double mid = 0.5 * (lo + hi);
    (rate(mid) > 0.0 ? lo : hi) = mid;
  }
  return {lo, false};
}

MaxDistanceResult max_secure_distance_km(const ChannelEvaluator& evaluator, const DecoyIntensities& intensities,
                                         const ProtocolParams& params, DistanceRange range) {
  return max_positive_distance_km(
      [&](double d) { return secure_key_rate_bps(evaluator(d), intensities, params); }, range);
}

}  // namespace fmfqkd
