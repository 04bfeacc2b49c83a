#include "adiabus/model.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "adiabus/errors.hpp"

namespace adiabus {

namespace {

std::mutex warning_mutex;
WarningHandler warning_handler;

void require_size(int n, int min_n, const char* what) {
  if (n < min_n || n > kMaxSpins)
    throw Error(Errc::InvalidSize, std::string(what) + " needs " + std::to_string(min_n) + " <= N <= " +
                                       std::to_string(kMaxSpins) + ", got " + std::to_string(n));
}

void check_antiferromagnetic(double j1, const char* what) {
  if (j1 <= 0.0)
    warn(std::string(what) + ": J1 = " + std::to_string(j1) +
         " is not antiferromagnetic; the encoded qubit is not guaranteed to leave the chain");
}

}  // namespace

void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(warning_mutex);
  warning_handler = std::move(handler);
}

void warn(const std::string& message) {
  std::lock_guard lock(warning_mutex);
  if (warning_handler)
    warning_handler(message);
  else
    std::cerr << "warning: " << message << '\n';
}

ChainModel::ChainModel(int n_spins, std::vector<Bond> bonds) : n_spins_(n_spins), bonds_(std::move(bonds)) {
  require_size(n_spins_, 2, "ChainModel");
  for (auto& b : bonds_) {
    if (b.i > b.j) std::swap(b.i, b.j);
    if (b.i == b.j || b.i < 1 || b.j > n_spins_)
      throw Error(Errc::InvalidArgument,
                  "bond (" + std::to_string(b.i) + "," + std::to_string(b.j) + ") invalid for N=" +
                      std::to_string(n_spins_));
  }
  std::sort(bonds_.begin(), bonds_.end(),
            [](const Bond& a, const Bond& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
  for (std::size_t k = 1; k < bonds_.size(); ++k)
    if (bonds_[k].i == bonds_[k - 1].i && bonds_[k].j == bonds_[k - 1].j)
      throw Error(Errc::InvalidArgument,
                  "duplicate bond (" + std::to_string(bonds_[k].i) + "," + std::to_string(bonds_[k].j) + ")");
}

const Bond* ChainModel::find(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const auto& b : bonds_)
    if (b.i == i && b.j == j) return &b;
  return nullptr;
}

bool ChainModel::conserves_magnetization() const {
  return std::all_of(bonds_.begin(), bonds_.end(), [](const Bond& b) { return b.jx == b.jy; });
}

std::vector<int> ChainModel::isolated_sites() const {
  std::vector<bool> touched(n_spins_ + 1, false);
  for (const auto& b : bonds_) {
    if (b.coupling().is_zero()) continue;
    touched[b.i] = touched[b.j] = true;
  }
  std::vector<int> out;
  for (int s = 1; s <= n_spins_; ++s)
    if (!touched[s]) out.push_back(s);
  return out;
}

bool ChainModel::connected_without(const std::vector<int>& excluded) const {
  std::vector<int> parent(n_spins_ + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto is_excluded = [&](int s) { return std::find(excluded.begin(), excluded.end(), s) != excluded.end(); };
  for (const auto& b : bonds_) {
    if (b.coupling().is_zero() || is_excluded(b.i) || is_excluded(b.j)) continue;
    parent[root(b.i)] = root(b.j);
  }
  int component = -1;
  for (int s = 1; s <= n_spins_; ++s) {
    if (is_excluded(s)) continue;
    if (component < 0)
      component = root(s);
    else if (root(s) != component)
      return false;
  }
  return true;
}

ChainCouplings heisenberg_couplings(double j1, double j2) {
  return {Coupling::isotropic(j1), Coupling::isotropic(j2)};
}

ChainCouplings xxz_couplings(double ratio, double next_nearest_j2) {
  if (ratio < 0.0) throw Error(Errc::InvalidArgument, "XXZ ratio must be >= 0");
  return {{1.0, 1.0, ratio}, {next_nearest_j2, next_nearest_j2, next_nearest_j2 * ratio}};
}

double xyz_normalization(double delta) {
  const double a = 1.0 + delta;
  const double b = 1.0 + 2.0 * delta;
  return std::sqrt(3.0) / std::sqrt(1.0 + a * a + b * b);
}

ChainCouplings xyz_couplings(double delta) {
  const double c = xyz_normalization(delta);
  return {{c, c * (1.0 + delta), c * (1.0 + 2.0 * delta)}, {}};
}

ChainCouplings ising_couplings(double j1, double j2) { return {{0.0, 0.0, j1}, {0.0, 0.0, j2}}; }

ChainModel uniform_chain(int n, const ChainCouplings& c) {
  require_size(n, 2, "uniform_chain");
  std::vector<Bond> bonds;
  if (!c.nearest.is_zero())
    for (int k = 1; k + 1 <= n; ++k) bonds.push_back(Bond::make(k, k + 1, c.nearest));
  if (!c.next_nearest.is_zero())
    for (int k = 1; k + 2 <= n; ++k) bonds.push_back(Bond::make(k, k + 2, c.next_nearest));
  return ChainModel(n, std::move(bonds));
}

ChainModel j1j2_chain(int n, double j1, double j2) {
  require_size(n, 2, "j1j2_chain");
  check_antiferromagnetic(j1, "j1j2_chain");
  return uniform_chain(n, heisenberg_couplings(j1, j2));
}

ChainModel xxz_chain(int n, double ratio, double next_nearest_j2) {
  require_size(n, 2, "xxz_chain");
  return uniform_chain(n, xxz_couplings(ratio, next_nearest_j2));
}

ChainModel xyz_chain(int n, double delta) {
  require_size(n, 2, "xyz_chain");
  return uniform_chain(n, xyz_couplings(delta));
}

double Ramp::operator()(double s) const {
  s = std::clamp(s, 0.0, 1.0);
  if (reversed_) s = 1.0 - s;
  if (kind_ == Kind::Constant) return v0_;
  return v0_ + s * (v1_ - v0_);
}

Ramp Ramp::reversed() const { return Ramp(kind_, v0_, v1_, !reversed_); }

double ProtocolTerm::coefficient(double s) const {
  double c = 1.0;
  if (group_ramp) c *= (*group_ramp)(s);
  if (j2_ramp) c *= (*j2_ramp)(s);
  return c;
}

std::vector<ProtocolTerm> ProtocolSpec::terms() const {
  std::vector<ProtocolTerm> out;
  auto split = [&](const std::vector<BondTemplate>& templates, const std::optional<Ramp>& group) {
    ProtocolTerm plain{{}, group, std::nullopt};
    ProtocolTerm scaled{{}, group, j2_ramp};
    for (const auto& t : templates) (t.scaled_by_j2 && j2_ramp ? scaled : plain).bonds.push_back(t.bond);
    if (!plain.bonds.empty()) out.push_back(std::move(plain));
    if (!scaled.bonds.empty()) out.push_back(std::move(scaled));
  };
  split(static_bonds, std::nullopt);
  for (const auto& g : ramped_groups) split(g.bonds, g.ramp);
  return out;
}

ChainModel ProtocolSpec::evaluate(double s) const {
  std::map<std::pair<int, int>, Coupling> merged;
  for (const auto& term : terms()) {
    const double c = term.coefficient(s);
    for (const auto& b : term.bonds) {
      auto key = std::minmax(b.i, b.j);
      auto& acc = merged[{key.first, key.second}];
      acc.jx += b.jx * c;
      acc.jy += b.jy * c;
      acc.jz += b.jz * c;
    }
  }
  std::vector<Bond> bonds;
  for (const auto& [key, c] : merged)
    if (!c.is_zero()) bonds.push_back(Bond::make(key.first, key.second, c));
  return ChainModel(n_spins, std::move(bonds));
}

double ProtocolSpec::max_slope() const {
  auto sup = [](const Ramp& r) { return std::max(std::abs(r.start()), std::abs(r.end())); };
  double slope = 0.0;
  for (const auto& term : terms()) {
    double g = term.group_ramp ? sup(*term.group_ramp) : 1.0;
    double gs = term.group_ramp ? term.group_ramp->max_slope() : 0.0;
    double h = term.j2_ramp ? sup(*term.j2_ramp) : 1.0;
    double hs = term.j2_ramp ? term.j2_ramp->max_slope() : 0.0;
    double d = gs * h + g * hs;
    for (const auto& b : term.bonds)
      slope = std::max(slope, d * std::max({std::abs(b.jx), std::abs(b.jy), std::abs(b.jz)}));
  }
  return slope;
}

ChainModel evaluate_protocol(const ProtocolSpec& p, double s) { return p.evaluate(s); }

ProtocolSpec constant_protocol(const ChainModel& m, std::string label) {
  ProtocolSpec p;
  p.n_spins = m.n_spins();
  for (const auto& b : m.bonds()) p.static_bonds.push_back({b, false});
  p.label = std::move(label);
  return p;
}

namespace {

void add_if(std::vector<BondTemplate>& out, int i, int j, const Coupling& c, bool j2 = false) {
  if (!c.is_zero()) out.push_back({Bond::make(i, j, c), j2});
}

}  // namespace

ProtocolSpec join_protocol(int n, const ChainCouplings& c) {
  require_size(n, 3, "join_protocol");
  ProtocolSpec p;
  p.n_spins = n;
  p.label = "join";
  for (int k = 1; k <= n - 2; ++k) add_if(p.static_bonds, k, k + 1, c.nearest);
  for (int k = 1; k <= n - 3; ++k) add_if(p.static_bonds, k, k + 2, c.next_nearest);
  RampGroup joining{Ramp::linear(0.0, 1.0), {}};
  add_if(joining.bonds, n - 1, n, c.nearest);
  add_if(joining.bonds, n - 2, n, c.next_nearest);
  p.ramped_groups.push_back(std::move(joining));
  return p;
}

ProtocolSpec join_protocol(int n, double j1, double j2) {
  check_antiferromagnetic(j1, "join_protocol");
  return join_protocol(n, heisenberg_couplings(j1, j2));
}

ProtocolSpec dynamic_j2_protocol(int n, double j1, double j2_final) {
  require_size(n, 3, "dynamic_j2_protocol");
  check_antiferromagnetic(j1, "dynamic_j2_protocol");
  const Coupling nearest = Coupling::isotropic(j1);
  const Coupling unit = Coupling::isotropic(1.0);
  ProtocolSpec p;
  p.n_spins = n;
  p.label = "dynamic-j2";
  p.j2_ramp = Ramp::linear(0.5, j2_final);
  for (int k = 1; k <= n - 2; ++k) add_if(p.static_bonds, k, k + 1, nearest);
  for (int k = 1; k <= n - 3; ++k) add_if(p.static_bonds, k, k + 2, unit, true);
  RampGroup joining{Ramp::linear(0.0, 1.0), {}};
  add_if(joining.bonds, n - 1, n, nearest);
  add_if(joining.bonds, n - 2, n, unit, true);
  p.ramped_groups.push_back(std::move(joining));
  return p;
}

ProtocolSpec simultaneous_protocol(int n, const ChainCouplings& c) {
  require_size(n, 4, "simultaneous_protocol");
  ProtocolSpec p;
  p.n_spins = n;
  p.label = "simultaneous";
  for (int k = 2; k <= n - 2; ++k) add_if(p.static_bonds, k, k + 1, c.nearest);
  for (int k = 2; k <= n - 3; ++k) add_if(p.static_bonds, k, k + 2, c.next_nearest);
  RampGroup leaving{Ramp::linear(1.0, 0.0), {}};
  add_if(leaving.bonds, 1, 2, c.nearest);
  add_if(leaving.bonds, 1, 3, c.next_nearest);
  RampGroup joining{Ramp::linear(0.0, 1.0), {}};
  add_if(joining.bonds, n - 1, n, c.nearest);
  add_if(joining.bonds, n - 2, n, c.next_nearest);
  p.ramped_groups.push_back(std::move(leaving));
  p.ramped_groups.push_back(std::move(joining));
  return p;
}

ProtocolSpec simultaneous_protocol(int n, double j1, double j2) {
  check_antiferromagnetic(j1, "simultaneous_protocol");
  return simultaneous_protocol(n, heisenberg_couplings(j1, j2));
}

ProtocolSpec reverse_protocol(const ProtocolSpec& p) {
  ProtocolSpec r = p;
  for (auto& g : r.ramped_groups) g.ramp = g.ramp.reversed();
  if (r.j2_ramp) r.j2_ramp = r.j2_ramp->reversed();
  const std::string prefix = "reverse(";
  if (p.label.starts_with(prefix) && p.label.ends_with(")"))
    r.label = p.label.substr(prefix.size(), p.label.size() - prefix.size() - 1);
  else
    r.label = prefix + p.label + ")";
  return r;
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

void BlochVector::validate() const {
  if (!(norm() <= 1.0 + 1e-12)) throw Error(Errc::InvalidArgument, "Bloch vector norm exceeds 1");
}

SpinState BlochVector::to_spin_state() const {
  validate();
  const double r = norm();
  if (std::abs(r - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "Bloch vector is not a pure state");
  const double theta = std::acos(std::clamp(z / r, -1.0, 1.0));
  const double phi = std::atan2(y, x);
  return {std::polar(std::sin(theta / 2.0), phi), cplx{std::cos(theta / 2.0), 0.0}};
}

BlochVector BlochVector::from_spin_state(const SpinState& s) {
  const cplx cross = std::conj(s.up) * s.down;
  const double norm2 = std::norm(s.up) + std::norm(s.down);
  return {2.0 * cross.real() / norm2, 2.0 * cross.imag() / norm2, (std::norm(s.up) - std::norm(s.down)) / norm2};
}

}  // namespace adiabus
