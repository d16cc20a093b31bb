#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fmfqkd {

enum class ModeId { SmfFundamental, LP01, LP02 };
enum class FiberKind { SMF, FMF };

// Coarse wavelength labels: quantum ~1550.12 nm, classical ~1546.92 nm.
enum class Band { Quantum, Classical };

enum class Channel { Quantum, Classical };

enum class SchemeName { Smf, Lp01In, Lp02In };

std::string_view to_string(ModeId mode);
std::string_view to_string(FiberKind kind);
std::string_view to_string(Band band);
std::string_view to_string(SchemeName scheme);

/// Per-mode, per-band attenuation of a fiber. Validated on construction:
/// every entry in (0, 1) dB/km, and the modes required by the fiber kind
/// present in both bands.
class FiberSpec {
 public:
  using Key = std::pair<ModeId, Band>;

  FiberSpec(FiberKind kind, std::map<Key, double> attenuation_db_per_km);

  /// FMF with one attenuation per mode reused for both bands.
  static FiberSpec fmf(double lp01_db_per_km, double lp02_db_per_km);
  static FiberSpec smf(double quantum_db_per_km, double classical_db_per_km);

  FiberKind kind() const noexcept { return kind_; }
  const std::map<Key, double>& attenuation_table() const noexcept { return attenuation_; }

  /// Throws ConfigError naming the missing (mode, band) key.
  double attenuation_db_per_km(ModeId mode, Band band) const;

 private:
  FiberKind kind_;
  std::map<Key, double> attenuation_;
};

enum class ComponentPosition { TransmitterSide, ReceiverSide };

struct ComponentSpec {
  std::string name;
  std::map<ModeId, double> insertion_loss_db;
  ComponentPosition position = ComponentPosition::TransmitterSide;

  /// Throws ConfigError on a negative entry.
  void validate() const;
  /// Throws ConfigError naming the component and mode when absent.
  double insertion_loss(ModeId mode) const;
};

struct MultiplexScheme {
  SchemeName name;
  ModeId quantum_mode;
  ModeId classical_mode;

  static MultiplexScheme of(SchemeName name);
  FiberKind fiber_kind() const noexcept {
    return name == SchemeName::Smf ? FiberKind::SMF : FiberKind::FMF;
  }
};

/// Overall modal isolation (fiber + MUX/DEMUX) against distance, one curve
/// per FMF scheme direction.
class IsolationTable {
 public:
  struct Row {
    double distance_km;
    double isolation_db;
  };

  IsolationTable(std::vector<Row> lp01_in, std::vector<Row> lp02_in);

  /// Characterization of the ring-core FMF with all-fiber MSCs.
  static IsolationTable measured();

  const std::vector<Row>& rows(SchemeName direction) const;

 private:
  std::vector<Row> lp01_in_;
  std::vector<Row> lp02_in_;
};

struct LinkPlan {
  FiberSpec fiber;
  double length_km = 0.0;
  MultiplexScheme scheme;
  std::vector<ComponentSpec> quantum_path_components;
  std::vector<ComponentSpec> classical_path_components;

  ModeId mode_of(Channel channel) const noexcept {
    return channel == Channel::Quantum ? scheme.quantum_mode : scheme.classical_mode;
  }
  /// Checks fiber kind against the scheme and that every component covers
  /// the mode of its path. Throws ConfigError.
  void validate() const;
  LinkPlan with_length(double km) const;
};

/// Fiber attenuation times length plus the insertion losses on the
/// channel's path, in dB.
double total_loss_db(const LinkPlan& plan, Channel channel);

/// Component-only part of total_loss_db.
double insertion_loss_db(const LinkPlan& plan, Channel channel);

/// 10^(-loss/10). Throws DomainError for negative loss.
double transmittance(double loss_db);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Piecewise-linear in dB between tabulated distances. Throws
/// OutOfRangeError outside [first, last] distance and DomainError for SMF.
double modal_isolation_at(const IsolationTable& table, SchemeName direction, double distance_km);

/// Lowest launch power that still reaches the classical receiver threshold.
double classical_min_launch_power_dbm(const LinkPlan& plan, double receiver_sensitivity_dbm);

}  // namespace fmfqkd
