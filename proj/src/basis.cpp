#include "adiabus/basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "adiabus/errors.hpp"

namespace adiabus {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

void SectorSpec::validate() const {
  if (n_spins < 2 || n_spins > kMaxSpins)
    throw Error(Errc::InvalidSector, "site count " + std::to_string(n_spins) + " outside [2, " +
                                         std::to_string(kMaxSpins) + "]");
  if (kind == Kind::Magnetization && (label < 0 || label > n_spins))
    throw Error(Errc::InvalidSector, "magnetization k=" + std::to_string(label) + " outside [0, " +
                                         std::to_string(n_spins) + "]");
  if (kind == Kind::Parity && label != 0 && label != 1)
    throw Error(Errc::InvalidSector, "parity label must be 0 (even) or 1 (odd)");
}

bool SectorSpec::contains(BasisState s) const {
  if (n_spins < 32 && (s >> n_spins) != 0) return false;
  switch (kind) {
    case Kind::Full: return true;
    case Kind::Magnetization: return std::popcount(s) == label;
    case Kind::Parity: return (std::popcount(s) & 1) == label;
  }
  return false;
}

std::uint64_t SectorSpec::dimension() const {
  switch (kind) {
    case Kind::Full: return std::uint64_t{1} << n_spins;
    case Kind::Magnetization: return binomial(n_spins, label);
    case Kind::Parity: return std::uint64_t{1} << (n_spins - 1);
  }
  return 0;
}

std::string SectorSpec::describe() const {
  switch (kind) {
    case Kind::Full: return "full(N=" + std::to_string(n_spins) + ")";
    case Kind::Magnetization:
      return "magnetization(N=" + std::to_string(n_spins) + ",k=" + std::to_string(label) + ")";
    case Kind::Parity:
      return std::string("parity(N=") + std::to_string(n_spins) + "," + (label == 0 ? "even" : "odd") + ")";
  }
  return "?";
}

namespace {

// Next larger integer with the same popcount (Gosper's hack).
BasisState next_same_popcount(BasisState v) {
  const BasisState t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace

SectorBasis::SectorBasis(SectorSpec spec) : spec_(spec) {
  spec_.validate();
  const BasisState end = BasisState{1} << spec_.n_spins;
  states_.reserve(spec_.dimension());
  switch (spec_.kind) {
    case SectorSpec::Kind::Full:
      for (BasisState s = 0; s < end; ++s) states_.push_back(s);
      break;
    case SectorSpec::Kind::Parity:
      for (BasisState s = 0; s < end; ++s)
        if ((std::popcount(s) & 1) == spec_.label) states_.push_back(s);
      break;
    case SectorSpec::Kind::Magnetization:
      if (spec_.label == 0) {
        states_.push_back(0);
        break;
      }
      for (BasisState s = (BasisState{1} << spec_.label) - 1; s < end; s = next_same_popcount(s))
        states_.push_back(s);
      break;
  }
}

std::optional<std::size_t> SectorBasis::find(BasisState s) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t SectorBasis::index_of(BasisState s) const {
  if (auto i = find(s)) return *i;
  throw Error(Errc::NotInSector, "state " + std::to_string(s) + " not in " + spec_.describe());
}

SectorBasis enumerate_sector(const SectorSpec& spec) { return SectorBasis(spec); }

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amplitudes) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw Error(Errc::InvalidArgument, "cannot normalize the zero vector");
  for (auto& a : amplitudes) a /= n;
}

cplx inner(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "inner product of unequal lengths");
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return acc;
}

StateVector embed(const SectorBasis& small, std::span<const cplx> amplitudes,
                  std::span<const int> small_sites, std::span<const PlacedSpin> free_spins,
                  const SectorBasis& target) {
  const int n = target.n_spins();
  if (amplitudes.size() != small.dimension())
    throw Error(Errc::DimensionMismatch, "amplitude count does not match the small basis");
  if (small_sites.size() != static_cast<std::size_t>(small.n_spins()))
    throw Error(Errc::InvalidArgument, "one target site is needed per small-basis site");
  if (small_sites.size() + free_spins.size() != static_cast<std::size_t>(n))
    throw Error(Errc::InvalidArgument, "small sites plus free spins must cover the target lattice");
  BasisState used = 0;
  auto claim = [&](int site) {
    if (site < 1 || site > n || (used & site_bit(site)))
      throw Error(Errc::InvalidArgument, "site " + std::to_string(site) + " invalid or repeated");
    used |= site_bit(site);
  };
  for (int s : small_sites) claim(s);
  for (const auto& f : free_spins) claim(f.site);

  // Expand the free spins into a list of (bit pattern, amplitude).
  std::vector<std::pair<BasisState, cplx>> free_product{{0, cplx{1.0, 0.0}}};
  for (const auto& f : free_spins) {
    std::vector<std::pair<BasisState, cplx>> next;
    next.reserve(free_product.size() * 2);
    for (const auto& [bits, amp] : free_product) {
      if (f.state.down != cplx{}) next.emplace_back(bits, amp * f.state.down);
      if (f.state.up != cplx{}) next.emplace_back(bits | site_bit(f.site), amp * f.state.up);
    }
    free_product = std::move(next);
  }

  StateVector out{target.spec(), std::vector<cplx>(target.dimension())};
  for (std::size_t i = 0; i < small.dimension(); ++i) {
    if (amplitudes[i] == cplx{}) continue;
    BasisState placed = 0;
    const BasisState s = small.state(i);
    for (std::size_t m = 0; m < small_sites.size(); ++m)
      if (s & (BasisState{1} << m)) placed |= site_bit(small_sites[m]);
    for (const auto& [bits, amp] : free_product) {
      const cplx value = amplitudes[i] * amp;
      if (value == cplx{}) continue;
      auto idx = target.find(placed | bits);
      if (!idx)
        throw Error(Errc::SectorMismatch, "product component " + std::to_string(placed | bits) +
                                              " lies outside " + target.spec().describe());
      out.amplitudes[*idx] += value;
    }
  }
  out.normalize();
  return out;
}

StateVector embed(const SectorBasis& small, std::span<const cplx> amplitudes,
                  std::span<const SpinState> trailing_spins, const SectorBasis& target) {
  const int m = small.n_spins();
  std::vector<int> sites(m);
  std::iota(sites.begin(), sites.end(), 1);
  std::vector<PlacedSpin> free;
  for (std::size_t f = 0; f < trailing_spins.size(); ++f)
    free.push_back({m + 1 + static_cast<int>(f), trailing_spins[f]});
  return embed(small, amplitudes, sites, free, target);
}

StateVector product_state(std::span<const SpinState> spins, const SectorBasis& target) {
  if (spins.size() < 2) throw Error(Errc::InvalidArgument, "product state needs at least two spins");
  const SectorBasis first(SectorSpec::full(2));
  std::vector<cplx> amps(4);
  for (BasisState s = 0; s < 4; ++s)
    amps[s] = ((s & 1) ? spins[0].up : spins[0].down) * ((s & 2) ? spins[1].up : spins[1].down);
  return embed(first, amps, spins.subspan(2), target);
}

}  // namespace adiabus
