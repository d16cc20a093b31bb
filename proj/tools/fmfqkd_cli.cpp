// Command-line front end: sweeps, distance limits, calibration and Raman fits.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fmfqkd/engine.hpp"
#include "fmfqkd/error.hpp"

namespace {

using namespace fmfqkd;

struct ScenarioSource {
  std::string scenario_path;
  std::string preset_name;
  std::optional<double> misalignment_error;
  std::optional<double> ec_efficiency;

  void add_to(CLI::App& cmd) {
    auto* path = cmd.add_option("--scenario", scenario_path, "Scenario config file");
    auto* name = cmd.add_option("--preset", preset_name, "Built-in preset name");
    path->excludes(name);
    cmd.add_option("--misalignment-error", misalignment_error, "Override e_d");
    cmd.add_option("--ec-efficiency", ec_efficiency, "Override error-correction efficiency f");
  }

  Scenario resolve() const {
    if (scenario_path.empty() && preset_name.empty()) throw ConfigError("one of --scenario or --preset is required");
    Scenario s = scenario_path.empty() ? preset(preset_name) : load_scenario(scenario_path);
    if (misalignment_error) s.protocol.misalignment_error = *misalignment_error;
    if (ec_efficiency) s.protocol.ec_efficiency = *ec_efficiency;
    s.validate();
    return s;
  }
};

OutputFormat parse_format(const std::string& f) {
  if (f == "csv") return OutputFormat::Csv;
  if (f == "json") return OutputFormat::Json;
  throw ConfigError("unknown format '" + f + "' (expected csv or json)");
}

std::vector<CalibrationTarget> read_targets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open targets file '" + path + "'");
  std::vector<CalibrationTarget> out;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "preset,distance_km,key_rate_bps,qber") {
        throw ParseError(lineno, "expected header 'preset,distance_km,key_rate_bps,qber'");
      }
      header = true;
      continue;
    }
    std::istringstream fields(line);
    std::string name, d, r, q;
    if (!std::getline(fields, name, ',') || !std::getline(fields, d, ',') || !std::getline(fields, r, ',') ||
        !std::getline(fields, q)) {
      throw ParseError(lineno, "expected 4 fields");
    }
    try {
      out.push_back({preset(name), std::stod(d), std::stod(r), std::stod(q)});
    } catch (const std::logic_error&) {
      throw ParseError(lineno, "malformed number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-rate and noise simulator for QKD coexisting with classical channels over FMF/SMF"};
  app.require_subcommand(1);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a scenario over a distance grid");
  ScenarioSource sweep_src;
  sweep_src.add_to(*sweep_cmd);
  std::optional<double> from_km, to_km, step_km;
  std::string out_path, format = "csv";
  unsigned threads = 1;
  sweep_cmd->add_option("--from-km", from_km, "First distance");
  sweep_cmd->add_option("--to-km", to_km, "Last distance");
  sweep_cmd->add_option("--step-km", step_km, "Distance step");
  sweep_cmd->add_option("--out", out_path, "Output file (default stdout)");
  sweep_cmd->add_option("--format", format, "csv or json");
  sweep_cmd->add_option("--threads", threads, "Worker threads");

  // max-distance
  auto* maxd_cmd = app.add_subcommand("max-distance", "Largest distance with a positive key rate");
  ScenarioSource maxd_src;
  maxd_src.add_to(*maxd_cmd);
  double search_from = 0.0, search_to = 300.0;
  maxd_cmd->add_option("--from-km", search_from, "Search range start");
  maxd_cmd->add_option("--to-km", search_to, "Search range end");

  // calibrate
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit shared (e_d, f) to reported operating points");
  std::string targets_path, cal_format = "text";
  cal_cmd->add_option("--targets", targets_path, "CSV preset,distance_km,key_rate_bps,qber (default: reported points)");
  cal_cmd->add_option("--format", cal_format, "text or json");

  // fit-raman
  auto* fit_cmd = app.add_subcommand("fit-raman", "Least-squares Raman coefficient from noise measurements");
  std::string measurements_path;
  std::optional<double> alpha;
  ScenarioSource fit_src;
  fit_cmd->add_option("--measurements", measurements_path, "CSV distance_km,power_mw,rate_cps")->required();
  fit_cmd->add_option("--alpha-db-per-km", alpha, "Quantum-path attenuation");
  fit_src.add_to(*fit_cmd);

  // presets
  auto* presets_cmd = app.add_subcommand("presets", "Built-in scenarios");
  presets_cmd->require_subcommand(1);
  auto* list_cmd = presets_cmd->add_subcommand("list", "List preset names");
  auto* show_cmd = presets_cmd->add_subcommand("show", "Print a preset in config-file form");
  std::string show_name;
  show_cmd->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*sweep_cmd) {
      const Scenario s = sweep_src.resolve();
      SweepSpec sw = s.sweep.value_or(SweepSpec{});
      if (from_km) sw.from_km = *from_km;
      if (to_km) sw.to_km = *to_km;
      if (step_km) sw.step_km = *step_km;
      const auto fmt = parse_format(format);
      sw.validate();
      const auto rows = run_sweep(s, sw, threads);
      int clamps = 0;
      for (const auto& r : rows) clamps += r.clamp_events;
      if (clamps > 0) std::cerr << "note: " << clamps << " decoy-bound clamping event(s) in this sweep\n";
      if (out_path.empty()) {
        write_results(rows, fmt, std::cout);
      } else {
        emit_results(rows, fmt, out_path);
      }
    } else if (*maxd_cmd) {
      const Scenario s = maxd_src.resolve();
      const auto r = max_distance(s, {search_from, search_to});
      std::cout << "scenario=" << s.name << "\nmax_secure_distance_km=" << r.distance_km
                << "\nat_boundary=" << (r.at_boundary ? "true" : "false") << "\n";
    } else if (*cal_cmd) {
      const auto targets = targets_path.empty() ? reported_targets() : read_targets(targets_path);
      const auto rep = calibrate(targets);
      if (cal_format == "json") {
        nlohmann::ordered_json j;
        j["misalignment_error"] = rep.misalignment_error;
        j["ec_efficiency"] = rep.ec_efficiency;
        j["objective"] = rep.objective;
        j["residuals"] = nlohmann::ordered_json::array();
        for (const auto& r : rep.residuals) {
          j["residuals"].push_back({{"scenario", r.scenario},
                                    {"distance_km", r.distance_km},
                                    {"target_rate_bps", r.target_rate_bps},
                                    {"simulated_rate_bps", r.simulated_rate_bps},
                                    {"target_qber", r.target_qber},
                                    {"simulated_qber", r.simulated_qber}});
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "misalignment_error=" << rep.misalignment_error << "\nec_efficiency=" << rep.ec_efficiency
                  << "\nobjective=" << rep.objective << "\n";
        for (const auto& r : rep.residuals) {
          std::cout << r.scenario << " @ " << r.distance_km << " km: rate " << r.simulated_rate_bps << " bps (target "
                    << r.target_rate_bps << "), qber " << r.simulated_qber << " (target " << r.target_qber << ")\n";
        }
      }
    } else if (*fit_cmd) {
      double a = 0.0;
      SchemeName scheme = SchemeName::Smf;
      if (alpha) {
        a = *alpha;
      } else {
        const Scenario s = fit_src.resolve();
        a = s.link.fiber.attenuation_db_per_km(s.link.scheme.quantum_mode, Band::Quantum);
        scheme = s.link.scheme.name;
      }
      const auto ms = read_noise_measurements(measurements_path);
      const auto rho = fit_raman_coefficient(ms, a, scheme);
      std::cout << "rho_cps_per_mw_km=" << rho.rho_cps_per_mw_km << "\nmeasurements=" << ms.size() << "\n";
    } else if (*list_cmd) {
      for (const auto& n : preset_names()) std::cout << n << "\n";
    } else if (*show_cmd) {
      std::cout << write_scenario(preset(show_name));
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
