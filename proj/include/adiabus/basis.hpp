#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adiabus {

using cplx = std::complex<double>;

// Bit i-1 set means site i is up (sigma^z = +1). Site 1 is the least
// significant bit everywhere in the library.
using BasisState = std::uint32_t;

inline constexpr int kMaxSpins = 24;

inline constexpr BasisState site_bit(int site) { return BasisState{1} << (site - 1); }

std::uint64_t binomial(int n, int k);

enum class Parity { Even = 0, Odd = 1 };

struct SectorSpec {
  enum class Kind { Full, Magnetization, Parity };

  Kind kind = Kind::Full;
  int n_spins = 0;
  // Up-spin count for Magnetization, 0/1 (even/odd up count) for Parity.
  int label = 0;

  static SectorSpec full(int n) { return {Kind::Full, n, 0}; }
  static SectorSpec magnetization(int n, int k) { return {Kind::Magnetization, n, k}; }
  static SectorSpec parity(int n, Parity p) { return {Kind::Parity, n, static_cast<int>(p)}; }

  bool contains(BasisState s) const;
  std::uint64_t dimension() const;
  void validate() const;
  std::string describe() const;

  friend bool operator==(const SectorSpec&, const SectorSpec&) = default;
};

// Ascending enumeration of the bitstrings of one sector. Immutable once built.
class SectorBasis {
 public:
  explicit SectorBasis(SectorSpec spec);

  const SectorSpec& spec() const { return spec_; }
  int n_spins() const { return spec_.n_spins; }
  std::size_t dimension() const { return states_.size(); }
  std::span<const BasisState> states() const { return states_; }
  BasisState state(std::size_t ordinal) const { return states_[ordinal]; }

  std::optional<std::size_t> find(BasisState s) const;
  // Throws NotInSector.
  std::size_t index_of(BasisState s) const;

 private:
  SectorSpec spec_;
  std::vector<BasisState> states_;
};

SectorBasis enumerate_sector(const SectorSpec& spec);

// Complex amplitudes over the basis of `spec`.
struct StateVector {
  SectorSpec spec;
  std::vector<cplx> amplitudes;

  std::size_t size() const { return amplitudes.size(); }
  double norm() const;
  void normalize();
};

cplx inner(const StateVector& a, const StateVector& b);  // <a|b>

// Single-spin state a_down |down> + a_up |up>.
struct SpinState {
  cplx down{1.0, 0.0};
  cplx up{0.0, 0.0};

  static SpinState spin_up() { return {{0.0, 0.0}, {1.0, 0.0}}; }
  static SpinState spin_down() { return {{1.0, 0.0}, {0.0, 0.0}}; }
};

struct PlacedSpin {
  int site = 0;  // 1-based site in the target lattice
  SpinState state;
};

// Tensor product of a state on `small` (its site m placed at target site
// small_sites[m-1]) with the given single-spin factors, written in the
// coordinates of `target` and normalized. Throws SectorMismatch if any
// nonzero product component lies outside the target sector.
StateVector embed(const SectorBasis& small, std::span<const cplx> amplitudes,
                  std::span<const int> small_sites, std::span<const PlacedSpin> free_spins,
                  const SectorBasis& target);

// Small state on sites 1..M, free spins on sites M+1..N in order.
StateVector embed(const SectorBasis& small, std::span<const cplx> amplitudes,
                  std::span<const SpinState> trailing_spins, const SectorBasis& target);

// Product of single spins on sites 1..N, in the coordinates of `target`.
StateVector product_state(std::span<const SpinState> spins, const SectorBasis& target);

}  // namespace adiabus
