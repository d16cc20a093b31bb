#pragma once

#include <cstdint>
#include <functional>
#include <optional>

namespace fmfqkd {

/// Signal / weak decoy / vacuum intensities and their emission probabilities.
struct DecoyIntensities {
  double mu = 0.4;
  double nu = 0.2;
  double omega = 0.0;
  double p_mu = 6.0 / 8.0;
  double p_nu = 1.0 / 8.0;
  double p_omega = 1.0 / 8.0;

  void validate() const;
};

struct DetectorSpec {
  double efficiency = 0.10;
  double gate_hz = 1.25e9;
  double dark_count_per_gate = 3.0e-7;
  int num_detectors = 4;

  void validate() const;
};

struct ProtocolParams {
  double clock_hz = 625e6;
  double misalignment_error = 0.033;  // e_d
  double background_error = 0.5;      // e_0
  double ec_efficiency = 1.16;        // f
  double sifting_factor = 0.5;        // q
  std::int64_t block_size_bits = 500'000;  // recorded, not used by the asymptotic rate

  void validate() const;
};

/// eta: single-photon transmittance including detection efficiency.
/// y0: per-pulse background click probability.
struct ChannelPoint {
  double eta = 0.0;
  double y0 = 0.0;

  void validate() const;
};

/// How dark counts per gate map to a per-pulse background.
enum class DarkCountGating {
  GateClockRatio,  // num_detectors * dark * gate_hz / clock_hz
  OneGatePerPulse, // num_detectors * dark
};

/// Background yield from dark counts plus a per-pulse noise probability.
double background_yield(const DetectorSpec& detector, const ProtocolParams& params, double noise_prob,
                        DarkCountGating gating = DarkCountGating::GateClockRatio);

double binary_entropy(double x);

struct GainQber {
  double gain;
  double qber;
};

/// Q = Y0 + 1 - exp(-eta*intensity), E*Q = e0*Y0 + ed*(1 - exp(-eta*intensity)).
GainQber gain_and_qber(double intensity, const ChannelPoint& ch, const ProtocolParams& params);

/// A bound together with whether it had to be clamped into range.
struct Bound {
  double value;
  bool clamped;
};

/// Vacuum + weak decoy lower bound on the single-photon yield, clamped to
/// [0, 1]. Throws DegenerateError if mu*nu == nu^2.
Bound y1_lower_bound(double q_mu, double q_nu, const DecoyIntensities& intensities, double y0);

/// Upper bound on the single-photon error rate, clamped to [0, 0.5].
/// nullopt when y1_lower is not positive.
std::optional<Bound> e1_upper_bound(double q_nu, double e_nu, double nu, double y1_lower, double y0,
                                    double e0);

struct KeyRateBreakdown {
  double q_mu = 0.0;
  double e_mu = 0.0;
  double q_nu = 0.0;
  double e_nu = 0.0;
  double y1_lower = 0.0;
  double e1_upper = 0.5;
  double q1 = 0.0;
  double rate_per_pulse = 0.0;  // before clamping at zero
  double key_rate_bps = 0.0;
  int clamp_events = 0;
};

KeyRateBreakdown evaluate_key_rate(const ChannelPoint& ch, const DecoyIntensities& intensities,
                                   const ProtocolParams& params);

double secure_key_rate_bps(const ChannelPoint& ch, const DecoyIntensities& intensities,
                           const ProtocolParams& params);

struct DistanceRange {
  double from_km = 0.0;
  double to_km = 300.0;
};

struct MaxDistanceResult {
  double distance_km;
  bool at_boundary;  // key rate still positive at the range end
};

using ChannelEvaluator = std::function<ChannelPoint(double distance_km)>;

/// Largest distance with a positive key rate: 1 km grid, then bisection to
/// 0.01 km. Throws NoSecureDistanceError if the rate is never positive.
MaxDistanceResult max_secure_distance_km(const ChannelEvaluator& evaluator, const DecoyIntensities& intensities,
                                         const ProtocolParams& params, DistanceRange range);

/// Same search over an arbitrary rate function.
MaxDistanceResult max_positive_distance_km(const std::function<double(double)>& rate, DistanceRange range);

}  // namespace fmfqkd
