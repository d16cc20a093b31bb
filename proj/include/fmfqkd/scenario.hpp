#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fmfqkd/decoy_bb84.hpp"
#include "fmfqkd/link_model.hpp"
#include "fmfqkd/raman_noise.hpp"

namespace fmfqkd {

// Which attenuation damps the scattered photons in the noise formula.
enum class NoiseAttenuation { QuantumPath, PumpPath };

// Divisor turning the SRS count rate into a per-pulse probability.
enum class NoiseClock { PulseClock, GateClock };

struct SweepSpec {
  double from_km = 0.0;
  double to_km = 100.0;
  double step_km = 1.0;

  void validate() const;
  std::vector<double> grid() const;
};

struct LaunchPower {
  double fixed_dbm = -2.60;
  bool adaptive = false;
};

struct Scenario {
  std::string name;
  LinkPlan link;
  RamanCoefficient raman;
  DetectorSpec detector;
  ProtocolParams protocol;
  DecoyIntensities intensities;
  LaunchPower launch;
  double reference_power_dbm = -2.60;  // cap for adaptive launch
  double receiver_sensitivity_dbm = -33.0;

  NoiseAttenuation noise_attenuation = NoiseAttenuation::QuantumPath;
  NoiseClock noise_clock = NoiseClock::PulseClock;
  DarkCountGating dark_gating = DarkCountGating::GateClockRatio;
  // Metadata only: modal isolation never enters the noise model.
  bool decomposed_isolation = false;

  std::optional<SweepSpec> sweep;

  void validate() const;
};

std::vector<std::string> preset_names();

/// Throws ConfigError for an unknown name.
Scenario preset(std::string_view name);

/// Flat INI-style scenario file. Top-level `base = <preset>` picks the
/// starting point; sections override individual keys. Throws ParseError
/// with the offending line, or ConfigError from validation.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

/// Serializes a scenario in the same format parse_scenario reads.
std::string write_scenario(const Scenario& s);

}  // namespace fmfqkd
