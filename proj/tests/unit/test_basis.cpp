#include <bit>
#include <cmath>
#include <set>

#include "adiabus/basis.hpp"
#include "adiabus/errors.hpp"
#include "doctest.h"

using namespace adiabus;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an adiabus::Error");
  return Errc::IoError;
}

}  // namespace

TEST_CASE("enumerate_sector lists ascending bitstrings") {
  const auto b = enumerate_sector(SectorSpec::magnetization(3, 1));
  REQUIRE(b.dimension() == 3);
  CHECK(b.state(0) == 0b001);
  CHECK(b.state(1) == 0b010);
  CHECK(b.state(2) == 0b100);

  CHECK(enumerate_sector(SectorSpec::parity(4, Parity::Even)).dimension() == 8);
  CHECK(enumerate_sector(SectorSpec::magnetization(17, 8)).dimension() == 24310);
  CHECK(enumerate_sector(SectorSpec::full(5)).dimension() == 32);
  CHECK(enumerate_sector(SectorSpec::magnetization(6, 0)).dimension() == 1);
  CHECK(enumerate_sector(SectorSpec::magnetization(6, 6)).states()[0] == 0b111111);
}

TEST_CASE("invalid sectors are rejected") {
  CHECK(code_of([] { enumerate_sector(SectorSpec::magnetization(3, 4)); }) == Errc::InvalidSector);
  CHECK(code_of([] { enumerate_sector(SectorSpec::magnetization(3, -1)); }) == Errc::InvalidSector);
  CHECK(code_of([] { enumerate_sector(SectorSpec::full(1)); }) == Errc::InvalidSector);
  CHECK(code_of([] { enumerate_sector(SectorSpec::full(kMaxSpins + 1)); }) == Errc::InvalidSector);
}

TEST_CASE("index_of") {
  const auto b = enumerate_sector(SectorSpec::magnetization(3, 1));
  CHECK(b.index_of(0b010) == 1);
  CHECK(enumerate_sector(SectorSpec::full(2)).index_of(0b11) == 3);
  CHECK(code_of([&] { b.index_of(0b011); }) == Errc::NotInSector);
  CHECK(code_of([&] { b.index_of(0b1000); }) == Errc::NotInSector);
}

TEST_CASE("embed expands product states into sector coordinates") {
  const SectorBasis pair(SectorSpec::magnetization(2, 1));  // [ud(0b01), du(0b10)]
  const std::vector<cplx> singlet{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
  const SectorBasis target(SectorSpec::magnetization(3, 1));

  SUBCASE("singlet(1,2) x down") {
    const SpinState down = SpinState::spin_down();
    const auto psi = embed(pair, singlet, std::span<const SpinState>(&down, 1), target);
    REQUIRE(psi.size() == 3);
    CHECK(psi.amplitudes[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(psi.amplitudes[1].real() == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(psi.amplitudes[2]) == 0.0);
  }
  SUBCASE("up x down") {
    const std::vector<SpinState> spins{SpinState::spin_up(), SpinState::spin_down()};
    const auto psi = product_state(spins, SectorBasis(SectorSpec::magnetization(2, 1)));
    CHECK(psi.amplitudes[0] == cplx{1.0, 0.0});
    CHECK(psi.amplitudes[1] == cplx{0.0, 0.0});
  }
  SUBCASE("singlet(1,2) x up leaves the sector") {
    const SpinState up = SpinState::spin_up();
    CHECK(code_of([&] { embed(pair, singlet, std::span<const SpinState>(&up, 1), target); }) ==
          Errc::SectorMismatch);
  }
  SUBCASE("free spin placed at site 1") {
    const std::vector<int> sites{2, 3};
    const PlacedSpin free{1, SpinState::spin_down()};
    const auto psi = embed(pair, singlet, sites, std::span<const PlacedSpin>(&free, 1), target);
    // singlet on (2,3): |u d> on sites 2,3 = 0b010, |d u> = 0b100
    CHECK(std::abs(psi.amplitudes[0]) == 0.0);
    CHECK(psi.amplitudes[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(psi.amplitudes[2].real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
  }
}

TEST_CASE("magnetization sectors partition the full basis") {
  for (int n = 2; n <= 12; ++n) {
    std::set<BasisState> seen;
    std::size_t total = 0;
    for (int k = 0; k <= n; ++k) {
      const auto b = enumerate_sector(SectorSpec::magnetization(n, k));
      CHECK(b.dimension() == binomial(n, k));
      total += b.dimension();
      for (auto s : b.states()) {
        CHECK(seen.insert(s).second);
        // each magnetization sector sits inside one parity sector
        CHECK(SectorSpec::parity(n, static_cast<Parity>(k % 2)).contains(s));
      }
    }
    CHECK(total == (std::size_t{1} << n));
    CHECK(seen.size() == (std::size_t{1} << n));
  }
}

TEST_CASE("index_of inverts states for every sector up to N = 12") {
  for (int n = 2; n <= 12; ++n) {
    std::vector<SectorSpec> specs{SectorSpec::full(n), SectorSpec::parity(n, Parity::Even),
                                  SectorSpec::parity(n, Parity::Odd)};
    for (int k = 0; k <= n; ++k) specs.push_back(SectorSpec::magnetization(n, k));
    for (const auto& spec : specs) {
      const auto b = enumerate_sector(spec);
      CHECK(b.dimension() == spec.dimension());
      bool ok = true;
      for (std::size_t i = 0; i < b.dimension(); ++i) {
        ok = ok && b.index_of(b.state(i)) == i;
        if (i > 0) ok = ok && b.state(i - 1) < b.state(i);
      }
      CHECK(ok);
    }
  }
}
