#include "fmfqkd/engine.hpp"

#include <algorithm>
#include <exception>
#include <sstream>
#include <thread>

#include "fmfqkd/error.hpp"

namespace fmfqkd {

double launch_power_dbm_at(const Scenario& s, double distance_km) {
  if (!s.launch.adaptive) return s.launch.fixed_dbm;
  const double needed = classical_min_launch_power_dbm(s.link.with_length(distance_km), s.receiver_sensitivity_dbm);
  return std::min(needed, s.reference_power_dbm);
}

double srs_rate_at(const Scenario& s, double distance_km) {
  const auto& link = s.link;
  const double alpha = s.noise_attenuation == NoiseAttenuation::QuantumPath
                           ? link.fiber.attenuation_db_per_km(link.scheme.quantum_mode, Band::Quantum)
                           : link.fiber.attenuation_db_per_km(link.scheme.classical_mode, Band::Classical);
  return srs_noise_rate_cps(dbm_to_mw(launch_power_dbm_at(s, distance_km)), s.raman, distance_km, alpha);
}

ChannelPoint channel_at(const Scenario& s, double distance_km) {
  const double loss = total_loss_db(s.link.with_length(distance_km), Channel::Quantum);
  const double divisor = s.noise_clock == NoiseClock::PulseClock ? s.protocol.clock_hz : s.detector.gate_hz;
  const double noise = noise_prob_per_pulse(srs_rate_at(s, distance_km), divisor);
  return {s.detector.efficiency * transmittance(loss), background_yield(s.detector, s.protocol, noise, s.dark_gating)};
}

namespace {

template <typename E>
[[noreturn]] void rethrow_with(const E& e, double d) {
  std::ostringstream msg;
  msg << "at " << d << " km: " << e.what();
  throw E(msg.str());
}

}  // namespace

ResultRow evaluate_point(const Scenario& s, double distance_km) {
  try {
    const LinkPlan plan = s.link.with_length(distance_km);
    ResultRow row;
    row.distance_km = distance_km;
    row.launch_power_dbm = launch_power_dbm_at(s, distance_km);
    row.quantum_loss_db = total_loss_db(plan, Channel::Quantum);
    row.classical_loss_db = total_loss_db(plan, Channel::Classical);
    row.srs_rate_cps = srs_rate_at(s, distance_km);
    const ChannelPoint ch = channel_at(s, distance_km);
    row.y0 = ch.y0;
    const auto k = evaluate_key_rate(ch, s.intensities, s.protocol);
    row.q_mu = k.q_mu;
    row.e_mu = k.e_mu;
    row.y1_lower = k.y1_lower;
    row.e1_upper = k.e1_upper;
    row.key_rate_bps = k.key_rate_bps;
    row.clamp_events = k.clamp_events;
    row.classical_feasible =
        row.launch_power_dbm >= classical_min_launch_power_dbm(plan, s.receiver_sensitivity_dbm);
    return row;
  } catch (const ConfigError& e) {
    rethrow_with(e, distance_km);
  } catch (const DegenerateError& e) {
    rethrow_with(e, distance_km);
  } catch (const DomainError& e) {
    rethrow_with(e, distance_km);
  }
}

std::vector<ResultRow> run_sweep(const Scenario& s, const SweepSpec& sweep, unsigned threads) {
  const auto grid = sweep.grid();
  std::vector<ResultRow> rows(grid.size());
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(1, grid.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) rows[i] = evaluate_point(s, grid[i]);
    return rows;
  }

  std::vector<std::exception_ptr> errors(grid.size());
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < grid.size(); i += threads) {
          try {
            rows[i] = evaluate_point(s, grid[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

MaxDistanceResult max_distance(const Scenario& s, DistanceRange range) {
  return max_secure_distance_km([&](double d) { return channel_at(s, d); }, s.intensities, s.protocol, range);
}

Scenario with_free_params(Scenario s, double misalignment_error, double ec_efficiency) {
  s.protocol.misalignment_error = misalignment_error;
  s.protocol.ec_efficiency = ec_efficiency;
  return s;
}

}  // namespace fmfqkd
