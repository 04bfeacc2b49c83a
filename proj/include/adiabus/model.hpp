#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adiabus/basis.hpp"

namespace adiabus {

// Per-axis exchange strengths of one sigma_i . sigma_j term (Pauli units, hbar = 1).
struct Coupling {
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;

  static Coupling isotropic(double j) { return {j, j, j}; }
  Coupling scaled(double f) const { return {jx * f, jy * f, jz * f}; }
  bool is_zero() const { return jx == 0.0 && jy == 0.0 && jz == 0.0; }

  friend bool operator==(const Coupling&, const Coupling&) = default;
};

struct Bond {
  int i = 0;  // 1-based, i < j
  int j = 0;
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;

  static Bond make(int i, int j, const Coupling& c) { return {i, j, c.jx, c.jy, c.jz}; }
  Coupling coupling() const { return {jx, jy, jz}; }
  bool isotropic() const { return jx == jy && jy == jz; }

  friend bool operator==(const Bond&, const Bond&) = default;
};

// Static Hamiltonian: sum over bonds of jx XX + jy YY + jz ZZ.
// Bonds are kept sorted by (i, j) with no duplicate pairs.
class ChainModel {
 public:
  ChainModel() = default;
  ChainModel(int n_spins, std::vector<Bond> bonds);

  int n_spins() const { return n_spins_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const Bond* find(int i, int j) const;

  bool conserves_magnetization() const;  // jx == jy on every bond
  std::vector<int> isolated_sites() const;
  // True when the sites outside `excluded` form one connected component.
  bool connected_without(const std::vector<int>& excluded) const;

  friend bool operator==(const ChainModel&, const ChainModel&) = default;

 private:
  int n_spins_ = 0;
  std::vector<Bond> bonds_;
};

// Nearest and next-nearest couplings of a uniform open chain.
struct ChainCouplings {
  Coupling nearest;
  Coupling next_nearest;
};

ChainCouplings heisenberg_couplings(double j1, double j2);
ChainCouplings xxz_couplings(double ratio, double next_nearest_j2 = 0.0);
ChainCouplings xyz_couplings(double delta);
ChainCouplings ising_couplings(double j1, double j2);
double xyz_normalization(double delta);

ChainModel uniform_chain(int n, const ChainCouplings& c);
ChainModel j1j2_chain(int n, double j1, double j2);
// jx = jy = 1, jz = ratio on nearest bonds; next-nearest bonds only when
// next_nearest_j2 != 0 (then (J2, J2, J2 * ratio)).
ChainModel xxz_chain(int n, double ratio, double next_nearest_j2 = 0.0);
ChainModel xyz_chain(int n, double delta);

// Piecewise-linear schedule over normalized time s = t / tau, clamped to [0, 1].
class Ramp {
 public:
  enum class Kind { Constant, Linear };

  static Ramp constant(double v) { return Ramp(Kind::Constant, v, v); }
  static Ramp linear(double v0, double v1) { return Ramp(Kind::Linear, v0, v1); }

  double operator()(double s) const;
  Ramp reversed() const;
  double max_slope() const { return kind_ == Kind::Constant ? 0.0 : std::abs(v1_ - v0_); }

  Kind kind() const { return kind_; }
  double start() const { return v0_; }
  double end() const { return v1_; }
  bool is_reversed() const { return reversed_; }

  friend bool operator==(const Ramp&, const Ramp&) = default;

 private:
  Ramp(Kind k, double v0, double v1) : kind_(k), v0_(v0), v1_(v1) {}
  Ramp(Kind k, double v0, double v1, bool rev) : kind_(k), v0_(v0), v1_(v1), reversed_(rev) {}

  Kind kind_;
  double v0_;
  double v1_;
  // Evaluated at 1 - s. Kept as a flag so reversal commutes exactly with evaluation.
  bool reversed_ = false;
};

struct BondTemplate {
  Bond bond;
  bool scaled_by_j2 = false;  // multiplied by ProtocolSpec::j2_ramp when present

  friend bool operator==(const BondTemplate&, const BondTemplate&) = default;
};

struct RampGroup {
  Ramp ramp;
  std::vector<BondTemplate> bonds;

  friend bool operator==(const RampGroup&, const RampGroup&) = default;
};

// One linear piece of H(s): coefficient(s) * sum(bonds).
struct ProtocolTerm {
  std::vector<Bond> bonds;
  std::optional<Ramp> group_ramp;
  std::optional<Ramp> j2_ramp;

  double coefficient(double s) const;
};

struct ProtocolSpec {
  int n_spins = 0;
  std::vector<BondTemplate> static_bonds;
  std::vector<RampGroup> ramped_groups;
  std::optional<Ramp> j2_ramp;
  std::string label;

  ChainModel evaluate(double s) const;
  std::vector<ProtocolTerm> terms() const;
  double max_slope() const;

  friend bool operator==(const ProtocolSpec&, const ProtocolSpec&) = default;
};

ChainModel evaluate_protocol(const ProtocolSpec& p, double s);

ProtocolSpec constant_protocol(const ChainModel& m, std::string label = "constant");
ProtocolSpec join_protocol(int n, const ChainCouplings& c);
ProtocolSpec join_protocol(int n, double j1, double j2);
ProtocolSpec dynamic_j2_protocol(int n, double j1, double j2_final);
ProtocolSpec simultaneous_protocol(int n, const ChainCouplings& c);
ProtocolSpec simultaneous_protocol(int n, double j1, double j2);
ProtocolSpec reverse_protocol(const ProtocolSpec& p);

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  double norm() const;
  void validate() const;  // norm <= 1 + 1e-12
  SpinState to_spin_state() const;  // pure states only
  static BlochVector from_spin_state(const SpinState& s);
};

// Receives non-fatal diagnostics (for example non-antiferromagnetic J1).
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace adiabus
