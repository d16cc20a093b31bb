#include "fmfqkd/link_model.hpp"

#include <algorithm>
#include <cmath>

#include "fmfqkd/error.hpp"

namespace fmfqkd {

std::string_view to_string(ModeId mode) {
  switch (mode) {
    case ModeId::SmfFundamental: return "SMF-fundamental";
    case ModeId::LP01: return "LP01";
    case ModeId::LP02: return "LP02";
  }
  return "?";
}

std::string_view to_string(FiberKind kind) { return kind == FiberKind::SMF ? "SMF" : "FMF"; }

std::string_view to_string(Band band) { return band == Band::Quantum ? "quantum" : "classical"; }

std::string_view to_string(SchemeName scheme) {
  switch (scheme) {
    case SchemeName::Smf: return "SMF";
    case SchemeName::Lp01In: return "LP01-in";
    case SchemeName::Lp02In: return "LP02-in";
  }
  return "?";
}

namespace {

std::string key_name(ModeId mode, Band band) {
  return "(" + std::string(to_string(mode)) + ", " + std::string(to_string(band)) + ")";
}

bool mode_allowed(FiberKind kind, ModeId mode) {
  return kind == FiberKind::SMF ? mode == ModeId::SmfFundamental : mode != ModeId::SmfFundamental;
}

}  // namespace

FiberSpec::FiberSpec(FiberKind kind, std::map<Key, double> attenuation_db_per_km)
    : kind_(kind), attenuation_(std::move(attenuation_db_per_km)) {
  for (const auto& [key, value] : attenuation_) {
    if (!mode_allowed(kind_, key.first)) {
      throw ConfigError("mode " + std::string(to_string(key.first)) + " is not guided by " +
                        std::string(to_string(kind_)) + " fiber");
    }
    if (!(value > 0.0 && value < 1.0)) {
      throw ConfigError("attenuation " + key_name(key.first, key.second) +
                        " must lie in (0, 1) dB/km, got " + std::to_string(value));
    }
  }
  const std::vector<ModeId> required =
      kind_ == FiberKind::SMF ? std::vector{ModeId::SmfFundamental} : std::vector{ModeId::LP01, ModeId::LP02};
  for (ModeId mode : required) {
    for (Band band : {Band::Quantum, Band::Classical}) {
      if (!attenuation_.contains({mode, band})) {
        throw ConfigError("missing attenuation entry " + key_name(mode, band));
      }
    }
  }
}

FiberSpec FiberSpec::fmf(double lp01_db_per_km, double lp02_db_per_km) {
  return FiberSpec(FiberKind::FMF, {{{ModeId::LP01, Band::Quantum}, lp01_db_per_km},
                                    {{ModeId::LP01, Band::Classical}, lp01_db_per_km},
                                    {{ModeId::LP02, Band::Quantum}, lp02_db_per_km},
                                    {{ModeId::LP02, Band::Classical}, lp02_db_per_km}});
}

FiberSpec FiberSpec::smf(double quantum_db_per_km, double classical_db_per_km) {
  return FiberSpec(FiberKind::SMF, {{{ModeId::SmfFundamental, Band::Quantum}, quantum_db_per_km},
                                    {{ModeId::SmfFundamental, Band::Classical}, classical_db_per_km}});
}

double FiberSpec::attenuation_db_per_km(ModeId mode, Band band) const {
  auto it = attenuation_.find({mode, band});
  if (it == attenuation_.end()) throw ConfigError("missing attenuation entry " + key_name(mode, band));
  return it->second;
}

void ComponentSpec::validate() const {
  for (const auto& [mode, il] : insertion_loss_db) {
    if (!(il >= 0.0) || !std::isfinite(il)) {
      throw ConfigError("component '" + name + "' has invalid insertion loss for " +
                        std::string(to_string(mode)) + ": " + std::to_string(il));
    }
  }
}

double ComponentSpec::insertion_loss(ModeId mode) const {
  auto it = insertion_loss_db.find(mode);
  if (it == insertion_loss_db.end()) {
    throw ConfigError("component '" + name + "' has no insertion loss entry for " +
                      std::string(to_string(mode)));
  }
  return it->second;
}

MultiplexScheme MultiplexScheme::of(SchemeName name) {
  switch (name) {
    case SchemeName::Smf: return {name, ModeId::SmfFundamental, ModeId::SmfFundamental};
    case SchemeName::Lp01In: return {name, ModeId::LP02, ModeId::LP01};
    case SchemeName::Lp02In: return {name, ModeId::LP01, ModeId::LP02};
  }
  throw ConfigError("unknown multiplex scheme");
}

IsolationTable::IsolationTable(std::vector<Row> lp01_in, std::vector<Row> lp02_in)
    : lp01_in_(std::move(lp01_in)), lp02_in_(std::move(lp02_in)) {
  for (const auto* rows : {&lp01_in_, &lp02_in_}) {
    if (rows->empty()) throw ConfigError("isolation table direction has no rows");
    for (std::size_t i = 0; i < rows->size(); ++i) {
      const Row& r = (*rows)[i];
      if (!(r.isolation_db > 0.0)) throw ConfigError("isolation must be positive");
      if (i > 0 && !(r.distance_km > (*rows)[i - 1].distance_km)) {
        throw ConfigError("isolation distances must be strictly increasing");
      }
    }
  }
}

IsolationTable IsolationTable::measured() {
  return IsolationTable(
      {{0.0, 23.58}, {25.0, 21.73}, {50.0, 19.96}, {75.0, 17.17}, {100.0, 15.75}},
      {{0.0, 23.20}, {25.0, 19.25}, {50.0, 14.75}, {75.0, 12.59}, {100.0, 10.35}});
}

const std::vector<IsolationTable::Row>& IsolationTable::rows(SchemeName direction) const {
  switch (direction) {
    case SchemeName::Lp01In: return lp01_in_;
    case SchemeName::Lp02In: return lp02_in_;
    case SchemeName::Smf: break;
  }
  throw DomainError("modal isolation is only defined for FMF schemes");
}

void LinkPlan::validate() const {
  if (!(length_km >= 0.0)) throw ConfigError("link length must be non-negative");
  if (fiber.kind() != scheme.fiber_kind()) {
    throw ConfigError("scheme " + std::string(to_string(scheme.name)) + " requires " +
                      std::string(to_string(scheme.fiber_kind())) + " fiber");
  }
  for (Channel ch : {Channel::Quantum, Channel::Classical}) {
    const Band band = ch == Channel::Quantum ? Band::Quantum : Band::Classical;
    fiber.attenuation_db_per_km(mode_of(ch), band);
    const auto& comps = ch == Channel::Quantum ? quantum_path_components : classical_path_components;
    for (const auto& c : comps) {
      c.validate();
      c.insertion_loss(mode_of(ch));
    }
  }
}

LinkPlan LinkPlan::with_length(double km) const {
  LinkPlan copy = *this;
  copy.length_km = km;
  return copy;
}

double insertion_loss_db(const LinkPlan& plan, Channel channel) {
  const auto& comps =
      channel == Channel::Quantum ? plan.quantum_path_components : plan.classical_path_components;
  double sum = 0.0;
  for (const auto& c : comps) sum += c.insertion_loss(plan.mode_of(channel));
  return sum;
}

double total_loss_db(const LinkPlan& plan, Channel channel) {
  if (!(plan.length_km >= 0.0)) throw DomainError("link length must be non-negative");
  const Band band = channel == Channel::Quantum ? Band::Quantum : Band::Classical;
  const double alpha = plan.fiber.attenuation_db_per_km(plan.mode_of(channel), band);
  return alpha * plan.length_km + insertion_loss_db(plan, channel);
}

double transmittance(double loss_db) {
  if (!(loss_db >= 0.0)) throw DomainError("loss must be non-negative, got " + std::to_string(loss_db));
  return std::pow(10.0, -loss_db / 10.0);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) {
  if (!(mw > 0.0)) throw DomainError("power must be positive to express in dBm");
  return 10.0 * std::log10(mw);
}

double modal_isolation_at(const IsolationTable& table, SchemeName direction, double distance_km) {
  const auto& rows = table.rows(direction);
  if (!(distance_km >= rows.front().distance_km && distance_km <= rows.back().distance_km)) {
    throw OutOfRangeError("distance " + std::to_string(distance_km) + " km is outside the isolation table [" +
                          std::to_string(rows.front().distance_km) + ", " +
                          std::to_string(rows.back().distance_km) + "]");
  }
  auto upper = std::lower_bound(rows.begin(), rows.end(), distance_km,
                                [](const IsolationTable::Row& r, double d) { return r.distance_km < d; });
  if (upper->distance_km == distance_km) return upper->isolation_db;
  auto lower = std::prev(upper);
  const double t = (distance_km - lower->distance_km) / (upper->distance_km - lower->distance_km);
  return lower->isolation_db + t * (upper->isolation_db - lower->isolation_db);
}

double classical_min_launch_power_dbm(const LinkPlan& plan, double receiver_sensitivity_dbm) {
  return total_loss_db(plan, Channel::Classical) + receiver_sensitivity_dbm;
}

}  // namespace fmfqkd
