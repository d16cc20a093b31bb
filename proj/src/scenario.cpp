#include "fmfqkd/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fmfqkd/error.hpp"
#include "text_util.hpp"

namespace fmfqkd {

void SweepSpec::validate() const {
  if (!std::isfinite(from_km) || !std::isfinite(to_km) || !(from_km >= 0.0)) {
    throw ConfigError("sweep bounds must be finite and non-negative");
  }
  if (!(from_km <= to_km)) throw ConfigError("sweep requires from_km <= to_km");
  if (!(step_km > 0.0)) throw ConfigError("sweep step must be positive");
}

std::vector<double> SweepSpec::grid() const {
  validate();
  const auto n = static_cast<std::size_t>(std::floor((to_km - from_km) / step_km + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(from_km + static_cast<double>(i) * step_km);
  return out;
}

void Scenario::validate() const {
  link.validate();
  raman.validate();
  if (raman.scheme != link.scheme.name) {
    throw ConfigError("Raman coefficient belongs to scheme " + std::string(to_string(raman.scheme)) +
                      " but the link uses " + std::string(to_string(link.scheme.name)));
  }
  detector.validate();
  protocol.validate();
  intensities.validate();
  if (!std::isfinite(launch.fixed_dbm) || !std::isfinite(reference_power_dbm) ||
      !std::isfinite(receiver_sensitivity_dbm)) {
    throw ConfigError("power levels must be finite");
  }
  if (sweep) sweep->validate();
}

namespace {

constexpr std::string_view kMux = "mux";
constexpr std::string_view kDemux = "demux";
constexpr std::string_view kSyncDwdm = "qkd-sync-dwdm";

// Flat view of a link that the config keys map onto.
struct LinkParams {
  SchemeName scheme = SchemeName::Smf;
  std::map<FiberSpec::Key, double> attenuation;
  std::map<ModeId, double> mux_il;
  std::map<ModeId, double> demux_il;
  double sync_dwdm_il = 0.0;
};

LinkPlan make_link(const LinkParams& p) {
  const auto scheme = MultiplexScheme::of(p.scheme);
  FiberSpec fiber(scheme.fiber_kind(), p.attenuation);
  std::map<ModeId, double> sync;
  for (const auto& [key, _] : p.attenuation) sync[key.first] = p.sync_dwdm_il;
  ComponentSpec mux{std::string(kMux), p.mux_il, ComponentPosition::TransmitterSide};
  ComponentSpec demux{std::string(kDemux), p.demux_il, ComponentPosition::ReceiverSide};
  ComponentSpec dwdm{std::string(kSyncDwdm), sync, ComponentPosition::TransmitterSide};
  return LinkPlan{std::move(fiber), 0.0, scheme, {dwdm, mux, demux}, {mux, demux}};
}

LinkParams link_params(const LinkPlan& link) {
  LinkParams p;
  p.scheme = link.scheme.name;
  p.attenuation = link.fiber.attenuation_table();
  for (const auto& c : link.quantum_path_components) {
    if (c.name == kMux) p.mux_il = c.insertion_loss_db;
    if (c.name == kDemux) p.demux_il = c.insertion_loss_db;
    if (c.name == kSyncDwdm && !c.insertion_loss_db.empty()) p.sync_dwdm_il = c.insertion_loss_db.begin()->second;
  }
  return p;
}

LinkParams baseline_link(SchemeName scheme) {
  LinkParams p;
  p.scheme = scheme;
  if (scheme == SchemeName::Smf) {
    p.attenuation = FiberSpec::smf(0.190, 0.192).attenuation_table();
    p.mux_il = {{ModeId::SmfFundamental, 0.49}};
    p.demux_il = {{ModeId::SmfFundamental, 0.36}};
  } else {
    p.attenuation = FiberSpec::fmf(0.226, 0.257).attenuation_table();
    p.mux_il = {{ModeId::LP01, 2.60}, {ModeId::LP02, 3.70}};
    p.demux_il = {{ModeId::LP01, 2.30}, {ModeId::LP02, 3.20}};
  }
  return p;
}

Scenario baseline(std::string name, SchemeName scheme) {
  return Scenario{.name = std::move(name),
                  .link = make_link(baseline_link(scheme)),
                  .raman = measured_raman_coefficient(scheme),
                  .detector = {},
                  .protocol = {},
                  .intensities = {},
                  .launch = {},
                  .sweep = std::nullopt};
}

// Improved-hardware projection values are midpoints of quoted ranges.
constexpr double kUltraLowLossDbPerKm = 0.165;
constexpr double kImprovedCouplerIlDb = 0.425;
constexpr double kImprovedEfficiency = 0.20;
constexpr double kImprovedDarkCps = 230.0;

}  // namespace

std::vector<std::string> preset_names() {
  return {"smf", "lp01in", "lp02in", "fig4-power", "fig4-power-fmf", "fig4-full"};
}

Scenario preset(std::string_view name) {
  if (name == "smf") return baseline("smf", SchemeName::Smf);
  if (name == "lp01in") return baseline("lp01in", SchemeName::Lp01In);
  if (name == "lp02in") return baseline("lp02in", SchemeName::Lp02In);

  Scenario s = baseline(std::string(name), SchemeName::Lp02In);
  if (name == "fig4-power" || name == "fig4-power-fmf" || name == "fig4-full") {
    s.launch.adaptive = true;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  if (name == "fig4-power") return s;

  LinkParams p = link_params(s.link);
  p.attenuation = FiberSpec::fmf(kUltraLowLossDbPerKm, kUltraLowLossDbPerKm).attenuation_table();
  p.mux_il = {{ModeId::LP01, kImprovedCouplerIlDb}, {ModeId::LP02, kImprovedCouplerIlDb}};
  p.demux_il = p.mux_il;
  s.link = make_link(p);
  if (name == "fig4-power-fmf") return s;

  s.detector.efficiency = kImprovedEfficiency;
  s.detector.dark_count_per_gate = kImprovedDarkCps / s.detector.gate_hz;
  return s;
}

// ---------------------------------------------------------------------------
// Config file parsing

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

SchemeName parse_scheme(std::string_view v, int line) {
  if (v == "smf") return SchemeName::Smf;
  if (v == "lp01in") return SchemeName::Lp01In;
  if (v == "lp02in") return SchemeName::Lp02In;
  throw ParseError(line, "unknown scheme '" + std::string(v) + "' (expected smf, lp01in or lp02in)");
}

std::string_view scheme_key(SchemeName s) {
  switch (s) {
    case SchemeName::Smf: return "smf";
    case SchemeName::Lp01In: return "lp01in";
    case SchemeName::Lp02In: return "lp02in";
  }
  return "?";
}

bool parse_bool(std::string_view v, int line, std::string_view key) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ParseError(line, "field '" + std::string(key) + "' expects true/false");
}

std::vector<Entry> tokenize(std::istream& in) {
  std::vector<Entry> entries;
  std::map<std::pair<std::string, std::string>, int> seen;
  std::string section;
  std::string raw;
  int lineno = 0;
  static const std::vector<std::string> kSections = {"fiber",    "components", "classical", "quantum",
                                                     "detector", "raman",      "sweep"};
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(lineno, "unterminated section header");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
        throw ParseError(lineno, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected 'key = value'");
    Entry e{section, std::string(detail::trim(line.substr(0, eq))), std::string(detail::trim(line.substr(eq + 1))),
            lineno};
    if (e.key.empty()) throw ParseError(lineno, "empty key");
    if (e.value.empty()) throw ParseError(lineno, "empty value for '" + e.key + "'");
    if (auto [it, inserted] = seen.emplace(std::pair{e.section, e.key}, lineno); !inserted) {
      throw ParseError(lineno, "duplicate key '" + e.key + "' (first on line " + std::to_string(it->second) + ")");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

// Applies one entry. Band-specific attenuation keys and dark_count_cps are
// deferred to a second pass so they override the generic keys.
bool apply(Scenario& s, LinkParams& lp, std::optional<double>& dark_cps, const Entry& e, bool second_pass) {
  const auto num = [&] { return detail::parse_double(e.value, e.line, e.key); };
  const auto& k = e.key;
  const auto& sec = e.section;

  if (sec == "fiber") {
    const bool specific = k.ends_with("_quantum_db_per_km") || k.ends_with("_classical_db_per_km");
    if (specific != second_pass) return true;
    if (k == "attenuation_smf_quantum_db_per_km") {
      lp.attenuation[{ModeId::SmfFundamental, Band::Quantum}] = num();
    } else if (k == "attenuation_smf_classical_db_per_km") {
      lp.attenuation[{ModeId::SmfFundamental, Band::Classical}] = num();
    } else if (k == "attenuation_lp01_db_per_km" || k == "attenuation_lp02_db_per_km") {
      const ModeId m = k == "attenuation_lp01_db_per_km" ? ModeId::LP01 : ModeId::LP02;
      lp.attenuation[{m, Band::Quantum}] = num();
      lp.attenuation[{m, Band::Classical}] = num();
    } else if (k == "attenuation_lp01_quantum_db_per_km") {
      lp.attenuation[{ModeId::LP01, Band::Quantum}] = num();
    } else if (k == "attenuation_lp01_classical_db_per_km") {
      lp.attenuation[{ModeId::LP01, Band::Classical}] = num();
    } else if (k == "attenuation_lp02_quantum_db_per_km") {
      lp.attenuation[{ModeId::LP02, Band::Quantum}] = num();
    } else if (k == "attenuation_lp02_classical_db_per_km") {
      lp.attenuation[{ModeId::LP02, Band::Classical}] = num();
    } else {
      return false;
    }
    return true;
  }

  if (sec == "detector" && k == "dark_count_cps") {
    if (second_pass) return true;
    dark_cps = num();
    return true;
  }
  if (second_pass) return true;

  if (sec.empty()) {
    if (k == "name") s.name = e.value;
    else if (k == "base" || k == "scheme") {}  // handled before application
    else return false;
  } else if (sec == "components") {
    if (k == "mux_il_smf_db") lp.mux_il[ModeId::SmfFundamental] = num();
    else if (k == "demux_il_smf_db") lp.demux_il[ModeId::SmfFundamental] = num();
    else if (k == "mux_il_lp01_db") lp.mux_il[ModeId::LP01] = num();
    else if (k == "mux_il_lp02_db") lp.mux_il[ModeId::LP02] = num();
    else if (k == "demux_il_lp01_db") lp.demux_il[ModeId::LP01] = num();
    else if (k == "demux_il_lp02_db") lp.demux_il[ModeId::LP02] = num();
    else if (k == "qkd_sync_dwdm_il_db") lp.sync_dwdm_il = num();
    else return false;
  } else if (sec == "classical") {
    if (k == "launch_power_dbm") {
      if (e.value == "adaptive") {
        s.launch.adaptive = true;
      } else {
        s.launch.adaptive = false;
        s.launch.fixed_dbm = num();
      }
    } else if (k == "reference_power_dbm") s.reference_power_dbm = num();
    else if (k == "receiver_sensitivity_dbm") s.receiver_sensitivity_dbm = num();
    else return false;
  } else if (sec == "quantum") {
    auto& p = s.protocol;
    auto& in = s.intensities;
    if (k == "clock_hz") p.clock_hz = num();
    else if (k == "misalignment_error") p.misalignment_error = num();
    else if (k == "background_error") p.background_error = num();
    else if (k == "ec_efficiency") p.ec_efficiency = num();
    else if (k == "sifting_factor") p.sifting_factor = num();
    else if (k == "block_size_bits") p.block_size_bits = static_cast<std::int64_t>(num());
    else if (k == "mu") in.mu = num();
    else if (k == "nu") in.nu = num();
    else if (k == "omega") in.omega = num();
    else if (k == "p_mu") in.p_mu = num();
    else if (k == "p_nu") in.p_nu = num();
    else if (k == "p_omega") in.p_omega = num();
    else return false;
  } else if (sec == "detector") {
    auto& d = s.detector;
    if (k == "efficiency") d.efficiency = num();
    else if (k == "gate_hz") d.gate_hz = num();
    else if (k == "dark_count_per_gate") d.dark_count_per_gate = num();
    else if (k == "num_detectors") {
      const double n = num();
      if (n != std::floor(n)) throw ParseError(e.line, "num_detectors must be an integer");
      d.num_detectors = static_cast<int>(n);
    } else if (k == "dark_gating") {
      if (e.value == "gate-clock-ratio") s.dark_gating = DarkCountGating::GateClockRatio;
      else if (e.value == "one-per-pulse") s.dark_gating = DarkCountGating::OneGatePerPulse;
      else throw ParseError(e.line, "dark_gating expects gate-clock-ratio or one-per-pulse");
    } else if (k == "noise_clock") {
      if (e.value == "pulse") s.noise_clock = NoiseClock::PulseClock;
      else if (e.value == "gate") s.noise_clock = NoiseClock::GateClock;
      else throw ParseError(e.line, "noise_clock expects pulse or gate");
    } else return false;
  } else if (sec == "raman") {
    if (k == "coefficient_cps_per_mw_km") s.raman.rho_cps_per_mw_km = num();
    else if (k == "noise_attenuation") {
      if (e.value == "quantum") s.noise_attenuation = NoiseAttenuation::QuantumPath;
      else if (e.value == "pump") s.noise_attenuation = NoiseAttenuation::PumpPath;
      else throw ParseError(e.line, "noise_attenuation expects quantum or pump");
    } else if (k == "decomposed_isolation") s.decomposed_isolation = parse_bool(e.value, e.line, k);
    else return false;
  } else if (sec == "sweep") {
    SweepSpec sw = s.sweep.value_or(SweepSpec{});
    if (k == "from_km") sw.from_km = num();
    else if (k == "to_km") sw.to_km = num();
    else if (k == "step_km") sw.step_km = num();
    else return false;
    s.sweep = sw;
  } else {
    return false;
  }
  return true;
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  const auto entries = tokenize(in);

  const Entry* base_entry = nullptr;
  const Entry* scheme_entry = nullptr;
  for (const auto& e : entries) {
    if (!e.section.empty()) continue;
    if (e.key == "base") base_entry = &e;
    if (e.key == "scheme") scheme_entry = &e;
  }
  if (!base_entry && !scheme_entry) throw ParseError(1, "scenario needs a top-level 'base' preset or 'scheme'");

  Scenario s = [&] {
    if (!base_entry) return preset(scheme_key(parse_scheme(scheme_entry->value, scheme_entry->line)));
    try {
      return preset(base_entry->value);
    } catch (const ConfigError& err) {
      throw ParseError(base_entry->line, err.what());
    }
  }();
  LinkParams lp = link_params(s.link);
  if (scheme_entry) {
    const SchemeName scheme = parse_scheme(scheme_entry->value, scheme_entry->line);
    if (scheme != lp.scheme) {
      if ((scheme == SchemeName::Smf) != (lp.scheme == SchemeName::Smf)) {
        throw ParseError(scheme_entry->line, "scheme conflicts with the fiber type of the base preset");
      }
      lp.scheme = scheme;
      s.raman = measured_raman_coefficient(scheme);
    }
  }

  std::optional<double> dark_cps;
  for (bool second : {false, true}) {
    for (const auto& e : entries) {
      if (!apply(s, lp, dark_cps, e, second)) {
        throw ParseError(e.line, "unknown key '" + e.key + "'" +
                                     (e.section.empty() ? std::string() : " in [" + e.section + "]"));
      }
    }
  }
  if (dark_cps) s.detector.dark_count_per_gate = *dark_cps / s.detector.gate_hz;

  s.link = make_link(lp);
  s.raman.scheme = lp.scheme;
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  return parse_scenario(in);
}

std::string write_scenario(const Scenario& s) {
  const auto lp = link_params(s.link);
  const auto f = [](double v) { return detail::format_double(v); };
  std::ostringstream out;
  out << "name = " << s.name << "\n";
  out << "scheme = " << scheme_key(lp.scheme) << "\n\n[fiber]\n";
  for (const auto& [key, v] : lp.attenuation) {
    const std::string mode = key.first == ModeId::SmfFundamental ? "smf" : key.first == ModeId::LP01 ? "lp01" : "lp02";
    out << "attenuation_" << mode << "_" << to_string(key.second) << "_db_per_km = " << f(v) << "\n";
  }
  out << "\n[components]\n";
  for (const auto& [mode, v] : lp.mux_il) {
    const std::string m = mode == ModeId::SmfFundamental ? "smf" : mode == ModeId::LP01 ? "lp01" : "lp02";
    out << "mux_il_" << m << "_db = " << f(v) << "\n";
  }
  for (const auto& [mode, v] : lp.demux_il) {
    const std::string m = mode == ModeId::SmfFundamental ? "smf" : mode == ModeId::LP01 ? "lp01" : "lp02";
    out << "demux_il_" << m << "_db = " << f(v) << "\n";
  }
  out << "qkd_sync_dwdm_il_db = " << f(lp.sync_dwdm_il) << "\n";
  out << "\n[classical]\n";
  out << "launch_power_dbm = " << (s.launch.adaptive ? std::string("adaptive") : f(s.launch.fixed_dbm)) << "\n";
  out << "reference_power_dbm = " << f(s.reference_power_dbm) << "\n";
  out << "receiver_sensitivity_dbm = " << f(s.receiver_sensitivity_dbm) << "\n";
  out << "\n[quantum]\n";
  out << "clock_hz = " << f(s.protocol.clock_hz) << "\n";
  out << "mu = " << f(s.intensities.mu) << "\nnu = " << f(s.intensities.nu) << "\nomega = " << f(s.intensities.omega)
      << "\n";
  out << "p_mu = " << f(s.intensities.p_mu) << "\np_nu = " << f(s.intensities.p_nu)
      << "\np_omega = " << f(s.intensities.p_omega) << "\n";
  out << "misalignment_error = " << f(s.protocol.misalignment_error) << "\n";
  out << "background_error = " << f(s.protocol.background_error) << "\n";
  out << "ec_efficiency = " << f(s.protocol.ec_efficiency) << "\n";
  out << "sifting_factor = " << f(s.protocol.sifting_factor) << "\n";
  out << "block_size_bits = " << s.protocol.block_size_bits << "\n";
  out << "\n[detector]\n";
  out << "efficiency = " << f(s.detector.efficiency) << "\n";
  out << "gate_hz = " << f(s.detector.gate_hz) << "\n";
  out << "dark_count_per_gate = " << f(s.detector.dark_count_per_gate) << "\n";
  out << "num_detectors = " << s.detector.num_detectors << "\n";
  out << "dark_gating = " << (s.dark_gating == DarkCountGating::GateClockRatio ? "gate-clock-ratio" : "one-per-pulse")
      << "\n";
  out << "noise_clock = " << (s.noise_clock == NoiseClock::PulseClock ? "pulse" : "gate") << "\n";
  out << "\n[raman]\n";
  out << "coefficient_cps_per_mw_km = " << f(s.raman.rho_cps_per_mw_km) << "\n";
  out << "noise_attenuation = " << (s.noise_attenuation == NoiseAttenuation::QuantumPath ? "quantum" : "pump") << "\n";
  out << "decomposed_isolation = " << (s.decomposed_isolation ? "true" : "false") << "\n";
  if (s.sweep) {
    out << "\n[sweep]\nfrom_km = " << f(s.sweep->from_km) << "\nto_km = " << f(s.sweep->to_km)
        << "\nstep_km = " << f(s.sweep->step_km) << "\n";
  }
  return out.str();
}

}  // namespace fmfqkd
