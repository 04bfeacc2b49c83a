#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "adiabus/basis.hpp"
#include "adiabus/model.hpp"
#include "adiabus/solver.hpp"

namespace adiabus {

struct SolverSettings {
  EigConfig eig;
  PropagatorConfig propagator;
};

// k = floor(N/2) magnetization when every term conserves magnetization,
// otherwise the parity sector of floor(N/2).
SectorSpec default_sector(const ProtocolSpec& p);
bool conserves_magnetization(const ProtocolSpec& p);

// Eigenvectors within `threshold` of the sector ground energy.
struct GroundSpace {
  double energy = 0.0;
  std::vector<StateVector> states;
};

GroundSpace ground_space(const ChainModel& model, const SectorSpec& sector, const EigConfig& cfg = {},
                         double threshold = 1e-10);

StateVector prepare_initial_state(const ProtocolSpec& p, const SectorSpec& sector, const EigConfig& cfg = {});

// F(tau) for one protocol and sector; the initial state and final ground
// space are computed once and reused across annealing times.
class FidelityEvaluator {
 public:
  FidelityEvaluator(ProtocolSpec p, const SectorSpec& sector, SolverSettings settings = {});

  double operator()(double tau) const;
  double overlap(const StateVector& psi) const;  // ||P_final psi||

  const StateVector& initial_state() const { return initial_; }
  const GroundSpace& final_space() const { return final_; }
  const ProtocolSpec& protocol() const { return protocol_; }

 private:
  ProtocolSpec protocol_;
  SolverSettings settings_;
  StateVector initial_;
  GroundSpace final_;
};

double fidelity(const ProtocolSpec& p, double tau, const SectorSpec& sector, const SolverSettings& settings = {});

struct AnnealSearch {
  double target = 0.9;
  double tau0 = 1.0;
  double growth = std::sqrt(2.0);
  double tau_cap = 1e5;
  double bisect_rel_width = 0.05;

  void validate() const;
};

struct AnnealTimeResult {
  enum class Status { Reached, NotReached };

  Status status = Status::NotReached;
  double tau_star = std::numeric_limits<double>::quiet_NaN();
  double fidelity_at_tau_star = std::numeric_limits<double>::quiet_NaN();
  double tau_cap = 0.0;
  std::vector<std::pair<double, double>> trace;  // (tau, F) in evaluation order
};

// First crossing of F >= target on tau0 * growth^m, refined by bisection.
// F need not be monotonic; the result is not a certified global minimum.
AnnealTimeResult find_anneal_time(const ProtocolSpec& p, const SectorSpec& sector, const AnnealSearch& search = {},
                                  const SolverSettings& settings = {});
AnnealTimeResult find_anneal_time(const FidelityEvaluator& f, const AnnealSearch& search = {});

struct GapGrid {
  SectorSpec sector;
  std::vector<double> s_values;
  std::vector<double> parameter_values;
  // gaps[i][j] at s_values[i], parameter_values[j]; NaN when the solver failed.
  std::vector<std::vector<double>> gaps;
};

using ProtocolFactory = std::function<ProtocolSpec(double)>;

// `sector` defaults to default_sector of the protocol at each parameter.
GapGrid gap_scan(const ProtocolFactory& factory, const std::vector<double>& s_grid,
                 const std::vector<double>& parameter_grid, std::optional<SectorSpec> sector = std::nullopt,
                 const EigConfig& cfg = {}, int workers = 1);

// max over s of |E0(floor sector) - E0(ceil sector)| (magnetization
// k = floor/ceil(N/2), or even/odd parity for non-conserving protocols).
double ground_manifold_tracking(const ProtocolSpec& p, const std::vector<double>& s_grid,
                                const EigConfig& cfg = {});

struct TransportResult {
  BlochVector bloch_in;
  BlochVector bloch_out;
  double qubit_fidelity = 0.0;
  std::vector<double> sector_fidelities;  // F in each of the two sectors carrying the qubit
  int input_site = 0;
  int output_site = 0;  // 0 when read out from the final chain ground manifold
};

struct TransportOptions {
  std::optional<int> input_site;  // defaults to the isolated site at s = 0
  bool sector_fidelities = true;
  cplx global_phase{1.0, 0.0};  // multiplies the initial state
};

TransportResult transport_qubit(const ProtocolSpec& p, const BlochVector& bloch_in, double tau,
                                const SolverSettings& settings = {}, const TransportOptions& options = {});

// Nearest-neighbour singlets on (1,2), (3,4), ... in the full basis.
StateVector mg_dimer_state(int n);

// Global spin flip X on a state: maps magnetization k to N - k.
StateVector spin_flip(const StateVector& psi);

}  // namespace adiabus
