#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adiabus/anneal.hpp"
#include "adiabus/errors.hpp"

namespace adiabus {

enum class ExperimentKind { Spectrum, GapScan, FidelityCurve, AnnealTime, Transport, DegeneracyCheck };
enum class ModelFamily { J1J2, Xxz, Xyz, Ising, Custom };
enum class ProtocolKind { Join, Unjoin, DynamicJ2, UnjoinDynamic, Simultaneous };

std::string_view to_string(ExperimentKind k);
std::string_view to_string(ModelFamily m);
std::string_view to_string(ProtocolKind p);
std::optional<ExperimentKind> experiment_from_string(std::string_view s);

// ParseError or ValidationError with the offending field ("" when unknown).
class ConfigError : public Error {
 public:
  ConfigError(Errc code, std::string field, const std::string& what)
      : Error(code, field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// N-independent sector choice, resolved per grid point. Default follows
// default_sector of the protocol; Floor/Ceil pick magnetization floor/ceil(N/2).
struct SectorRequest {
  enum class Kind { Default, Floor, Ceil, Even, Odd, Full, Fixed };
  Kind kind = Kind::Default;
  int k = 0;  // Fixed magnetization

  friend bool operator==(const SectorRequest&, const SectorRequest&) = default;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::AnnealTime;
  ModelFamily model = ModelFamily::J1J2;
  ProtocolKind protocol = ProtocolKind::Join;

  std::vector<int> n_values;
  // Sweep axis: J2 (j1j2, ising), Z/X ratio (xxz) or delta (xyz).
  std::vector<double> param_values;
  std::vector<double> tau_values;  // fidelity-curve, transport
  std::vector<double> s_values;    // gap-scan
  std::vector<BlochVector> bloch_inputs;

  double j1 = 1.0;
  double xxz_j2 = 0.0;  // next-nearest coupling of the XXZ family
  std::vector<Bond> custom_bonds;
  SectorRequest sector;
  int levels = 6;

  AnnealSearch search;
  SolverSettings solver;

  std::string csv_name;  // defaults per experiment kind
  std::string manifest_name = "manifest.json";
  std::string plot_name;  // empty: no script
  std::string plot_template;  // empty: default for the experiment kind
  int workers = 1;

  std::string param_name() const;  // header of the sweep axis in the manifest
  std::string default_csv_name() const;
};

// Throws ParseError for malformed JSON and ValidationError naming the field.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

// Canonical JSON text that parse_config maps back to an equivalent config.
std::string config_to_json(const ExperimentConfig& cfg, int indent = 2);

// Chain or protocol for one grid point.
ProtocolSpec build_protocol(const ExperimentConfig& cfg, int n, double param);
ChainModel build_model(const ExperimentConfig& cfg, int n, double param);
SectorSpec resolve_sector(const ExperimentConfig& cfg, int n, const ProtocolSpec& p);

}  // namespace adiabus
