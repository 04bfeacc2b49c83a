#include <algorithm>
#include <cmath>
#include <random>

#include "adiabus/anneal.hpp"
#include "adiabus/errors.hpp"
#include "adiabus/solver.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace adiabus;

namespace {

std::shared_ptr<const SectorBasis> basis_of(const SectorSpec& s) { return std::make_shared<const SectorBasis>(s); }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an adiabus::Error");
  return Errc::IoError;
}

ChainModel random_isotropic(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> j1(0.5, 1.5);
  std::uniform_real_distribution<double> j2(0.0, 0.6);
  std::vector<Bond> bonds;
  for (int k = 1; k < n; ++k) bonds.push_back(Bond::make(k, k + 1, Coupling::isotropic(j1(rng))));
  for (int k = 1; k + 2 <= n; ++k) bonds.push_back(Bond::make(k, k + 2, Coupling::isotropic(j2(rng))));
  return ChainModel(n, bonds);
}

std::vector<double> full_spectrum_low(const ChainModel& m, std::size_t count, bool parity, const EigConfig& cfg) {
  const int n = m.n_spins();
  std::vector<SectorSpec> sectors;
  if (parity) {
    sectors = {SectorSpec::parity(n, Parity::Even), SectorSpec::parity(n, Parity::Odd)};
  } else {
    for (int k = 0; k <= n; ++k) sectors.push_back(SectorSpec::magnetization(n, k));
  }
  std::vector<double> all;
  for (const auto& s : sectors) {
    auto b = basis_of(s);
    const auto eig = lowest_eigenpairs(build_sector_operator(m, b), std::min(count, b->dimension()), cfg);
    all.insert(all.end(), eig.eigenvalues.begin(), eig.eigenvalues.end());
  }
  std::sort(all.begin(), all.end());
  all.resize(count);
  return all;
}

}  // namespace

TEST_CASE("build_sector_operator matrix elements") {
  SUBCASE("N=2 Heisenberg, k=1") {
    const auto op = build_sector_operator(j1j2_chain(2, 1.0, 0.0), SectorBasis(SectorSpec::magnetization(2, 1)));
    const Eigen::MatrixXd h = op.to_dense();
    CHECK(h(0, 0) == -1.0);
    CHECK(h(0, 1) == 2.0);
    CHECK(h(1, 0) == 2.0);
    CHECK(h(1, 1) == -1.0);
  }
  SUBCASE("N=3 chain, k=1") {
    const auto op = build_sector_operator(j1j2_chain(3, 1.0, 0.0), SectorBasis(SectorSpec::magnetization(3, 1)));
    Eigen::Matrix3d expected;
    expected << 0, 2, 0, 2, -2, 2, 0, 2, 0;
    CHECK((op.to_dense() - expected).norm() == 0.0);
  }
  SUBCASE("anisotropic bonds need a parity or full basis") {
    CHECK(code_of([] {
            build_sector_operator(xyz_chain(5, 0.5), SectorBasis(SectorSpec::magnetization(5, 2)));
          }) == Errc::NonConservingSector);
    CHECK_NOTHROW(build_sector_operator(xyz_chain(5, 0.5), SectorBasis(SectorSpec::parity(5, Parity::Odd))));
  }
  SUBCASE("agrees with the Kronecker-product oracle on every sector") {
    std::mt19937_64 rng(7);
    for (int n = 2; n <= 6; ++n) {
      const auto m = random_isotropic(n, rng);
      const auto h = oracle::hamiltonian(m);
      for (int k = 0; k <= n; ++k) {
        const auto op = build_sector_operator(m, SectorBasis(SectorSpec::magnetization(n, k)));
        const auto ref = oracle::restrict(h, oracle::magnetization_states(n, k));
        CHECK((op.to_dense().cast<cplx>() - ref).norm() < 1e-12);
      }
      const auto xyz = xyz_chain(n, 0.7);
      const auto hx = oracle::hamiltonian(xyz);
      for (int p = 0; p <= 1; ++p) {
        const auto op = build_sector_operator(xyz, SectorBasis(SectorSpec::parity(n, static_cast<Parity>(p))));
        CHECK((op.to_dense().cast<cplx>() - oracle::restrict(hx, oracle::parity_states(n, p))).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("full-space operator has no cross-sector blocks") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 6; ++n) {
    const auto op = build_sector_operator(random_isotropic(n, rng), SectorBasis(SectorSpec::full(n)));
    const auto h = op.to_dense();
    double leak = 0.0;
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      for (Eigen::Index c = 0; c < h.cols(); ++c)
        if (std::popcount(static_cast<unsigned>(r)) != std::popcount(static_cast<unsigned>(c)))
          leak = std::max(leak, std::abs(h(r, c)));
    CHECK(leak == 0.0);
  }
}

TEST_CASE("matvec") {
  const auto op = build_sector_operator(j1j2_chain(2, 1.0, 0.0), SectorBasis(SectorSpec::magnetization(2, 1)));
  const std::vector<double> zero(2, 0.0);
  CHECK(matvec(op, std::span<const double>(zero)) == zero);
  const std::vector<double> e0{1.0, 0.0};
  CHECK(matvec(op, std::span<const double>(e0)) == std::vector<double>{-1.0, 2.0});
  const std::vector<double> wrong(3, 1.0);
  CHECK(code_of([&] { matvec(op, std::span<const double>(wrong)); }) == Errc::DimensionMismatch);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const auto big = build_sector_operator(random_isotropic(10, rng), SectorBasis(SectorSpec::magnetization(10, 5)));
  std::vector<double> u(big.dimension()), v(big.dimension());
  for (auto& x : u) x = g(rng);
  for (auto& x : v) x = g(rng);
  const auto hu = matvec(big, std::span<const double>(u));
  const auto hv = matvec(big, std::span<const double>(v));
  double a = 0.0, b = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    a += u[i] * hv[i];
    b += hu[i] * v[i];
    scale += std::abs(u[i] * hv[i]);
  }
  CHECK(std::abs(a - b) <= 1e-12 * scale);
}

TEST_CASE("lowest_eigenpairs small cases") {
  EigConfig lanczos;
  lanczos.dense_threshold = 0;
  for (const EigConfig& cfg : {EigConfig{}, lanczos}) {
    const auto two = lowest_eigenpairs(
        build_sector_operator(j1j2_chain(2, 1.0, 0.0), SectorBasis(SectorSpec::magnetization(2, 1))), 2, cfg);
    CHECK(two.eigenvalues[0] == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(two.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));

    const auto three = lowest_eigenpairs(
        build_sector_operator(j1j2_chain(3, 1.0, 0.0), SectorBasis(SectorSpec::magnetization(3, 1))), 1, cfg);
    CHECK(three.eigenvalues[0] == doctest::Approx(-4.0).epsilon(1e-12));
    const auto& v = three.eigenvectors[0];
    const double sign = v[0] > 0 ? 1.0 : -1.0;
    CHECK(sign * v[0] == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-9));
    CHECK(sign * v[1] == doctest::Approx(-2.0 / std::sqrt(6.0)).epsilon(1e-9));
    CHECK(sign * v[2] == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-9));

    // Frustrated triangle: degenerate pair inside the sector.
    const auto tri = lowest_eigenpairs(
        build_sector_operator(j1j2_chain(3, 1.0, 1.0), SectorBasis(SectorSpec::magnetization(3, 1))), 3, cfg);
    CHECK(tri.eigenvalues[0] == doctest::Approx(-3.0).epsilon(1e-10));
    CHECK(tri.eigenvalues[1] == doctest::Approx(-3.0).epsilon(1e-10));
    CHECK(tri.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-10));

    const auto mg = lowest_eigenpairs(build_sector_operator(j1j2_chain(4, 1.0, 0.5), SectorBasis(SectorSpec::full(4))),
                                      1, cfg);
    CHECK(mg.eigenvalues[0] == doctest::Approx(-6.0).epsilon(1e-12));
    for (double r : mg.residuals) CHECK(r <= 1e-8);
  }
  const auto op = build_sector_operator(j1j2_chain(3, 1.0, 0.0), SectorBasis(SectorSpec::magnetization(3, 1)));
  CHECK(code_of([&] { lowest_eigenpairs(op, 4); }) == Errc::InvalidArgument);
  EigConfig starved;
  starved.dense_threshold = 0;
  starved.max_matvecs = 3;
  starved.max_basis = 3;
  const auto big = build_sector_operator(j1j2_chain(12, 1.0, 0.3), SectorBasis(SectorSpec::magnetization(12, 6)));
  CHECK(code_of([&] { lowest_eigenpairs(big, 2, starved); }) == Errc::NoConvergence);
}

TEST_CASE("Lanczos matches dense diagonalization up to N = 8") {
  EigConfig cfg;
  cfg.dense_threshold = 0;
  std::mt19937_64 rng(2024);
  for (int n = 3; n <= 8; ++n) {
    const auto m = random_isotropic(n, rng);
    for (int k = 0; k <= n; ++k) {
      const auto b = basis_of(SectorSpec::magnetization(n, k));
      const auto op = build_sector_operator(m, b);
      const std::size_t want = std::min<std::size_t>(3, b->dimension());
      const auto eig = lowest_eigenpairs(op, want, cfg);
      const auto ref = oracle::spectrum(oracle::restrict(oracle::hamiltonian(m), oracle::magnetization_states(n, k)));
      for (std::size_t i = 0; i < want; ++i) CHECK(std::abs(eig.eigenvalues[i] - ref(i)) <= 1e-9);
    }
  }
}

TEST_CASE("Lanczos with restarts and degenerate copies on larger sectors") {
  EigConfig cfg;
  cfg.max_basis = 40;
  const auto m = j1j2_chain(12, 1.0, 0.3);
  const auto op = build_sector_operator(m, SectorBasis(SectorSpec::magnetization(12, 6)));
  const auto ref = dense_lowest_eigenpairs(op, 4);
  const auto eig = lowest_eigenpairs(op, 4, cfg);
  for (std::size_t i = 0; i < 4; ++i) CHECK(eig.eigenvalues[i] == doctest::Approx(ref.eigenvalues[i]).epsilon(1e-10));

  // Full space of an odd chain: every level is (at least) twofold.
  const auto full = build_sector_operator(j1j2_chain(9, 1.0, 0.2), SectorBasis(SectorSpec::full(9)));
  EigConfig forced;
  forced.dense_threshold = 0;
  const auto fe = lowest_eigenpairs(full, 4, forced);
  const auto fr = dense_lowest_eigenpairs(full, 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(fe.eigenvalues[i] - fr.eigenvalues[i]) <= 1e-9);
}

TEST_CASE("odd chains are twofold degenerate across magnetization sectors") {
  std::mt19937_64 rng(99);
  EigConfig cfg;
  for (int n : {3, 5, 7, 9}) {
    for (int trial = 0; trial < 2; ++trial) {
      const auto low = full_spectrum_low(random_isotropic(n, rng), 6, false, cfg);
      for (int pair = 0; pair < 3; ++pair) CHECK(std::abs(low[2 * pair + 1] - low[2 * pair]) <= 1e-9);
    }
  }
}

TEST_CASE("odd XYZ chains are twofold degenerate across parity sectors") {
  for (int n : {3, 5, 7}) {
    for (double d : {0.3, 1.0}) {
      const auto low = full_spectrum_low(xyz_chain(n, d), 6, true, EigConfig{});
      for (int pair = 0; pair < 3; ++pair) CHECK(std::abs(low[2 * pair + 1] - low[2 * pair]) <= 1e-9);
    }
  }
}

TEST_CASE("sector_gap") {
  CHECK(sector_gap(j1j2_chain(2, 1.0, 0.0), SectorSpec::magnetization(2, 1)) == doctest::Approx(4.0));
  CHECK(std::abs(sector_gap(j1j2_chain(3, 1.0, 1.0), SectorSpec::magnetization(3, 1))) <= 1e-9);
  CHECK(sector_gap(j1j2_chain(3, 1.0, 0.0), SectorSpec::magnetization(3, 1)) == doctest::Approx(4.0));
}

TEST_CASE("evolve basics") {
  const auto p = join_protocol(5, 1.0, 0.2);
  const auto sector = SectorSpec::magnetization(5, 2);
  const auto psi0 = prepare_initial_state(p, sector);

  SUBCASE("tau = 0 is the identity") {
    const auto psi = evolve(p, 0.0, psi0);
    CHECK(psi.amplitudes == psi0.amplitudes);
  }
  SUBCASE("unitarity") {
    for (double tau : {0.3, 5.0, 40.0}) CHECK(std::abs(evolve(p, tau, psi0).norm() - 1.0) <= 1e-9);
  }
  SUBCASE("eigenstates of a constant protocol are stationary") {
    const auto m = j1j2_chain(5, 1.0, 0.3);
    const auto eig = lowest_eigenpairs(build_sector_operator(m, SectorBasis(sector)), 1);
    const auto v = eig.state(0);
    const auto psi = evolve(constant_protocol(m), 13.7, v);
    CHECK(std::abs(std::abs(inner(v, psi)) - 1.0) <= 1e-8);
  }
  SUBCASE("energy is conserved under a constant Hamiltonian") {
    const auto m = j1j2_chain(7, 1.0, 0.4);
    const auto sec = SectorSpec::magnetization(7, 3);
    StateVector psi{sec, std::vector<cplx>(SectorBasis(sec).dimension())};
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (auto& a : psi.amplitudes) a = {g(rng), g(rng)};
    psi.normalize();
    const auto op = build_sector_operator(m, SectorBasis(sec));
    const double e0 = expectation(op, psi);
    const auto out = evolve(constant_protocol(m), 100.0, psi);
    CHECK(std::abs(expectation(op, out) - e0) <= 1e-8);
  }
  SUBCASE("errors") {
    CHECK(code_of([&] { evolve(p, -1.0, psi0); }) == Errc::InvalidArgument);
    StateVector bad = psi0;
    bad.amplitudes[0] += 0.5;
    CHECK(code_of([&] { evolve(p, 1.0, bad); }) == Errc::InvalidArgument);
    const auto xyz = simultaneous_protocol(5, xyz_couplings(0.4));
    StateVector m2{SectorSpec::magnetization(5, 2), std::vector<cplx>(10, cplx{})};
    m2.amplitudes[0] = 1.0;
    CHECK(code_of([&] { evolve(xyz, 1.0, m2); }) == Errc::NonConservingSector);
  }
}

TEST_CASE("evolve agrees with exact-exponential oracle") {
  const auto p = join_protocol(5, 1.0, 0.3);
  const auto sector = SectorSpec::magnetization(5, 2);
  const auto psi0 = prepare_initial_state(p, sector);
  const auto states = oracle::magnetization_states(5, 2);
  Eigen::VectorXcd v0(static_cast<Eigen::Index>(psi0.size()));
  for (std::size_t i = 0; i < psi0.size(); ++i) v0(static_cast<Eigen::Index>(i)) = psi0.amplitudes[i];
  PropagatorConfig cfg;
  cfg.steps = 400;
  const auto psi = evolve(p, 8.0, psi0, cfg);
  const auto ref = oracle::evolve(p, 8.0, v0, states, 400);
  double diff = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) diff += std::norm(psi.amplitudes[i] - ref(static_cast<Eigen::Index>(i)));
  CHECK(std::sqrt(diff) <= 1e-10);
}

TEST_CASE("time reversal of real protocols") {
  EigConfig eig;
  for (double j2 : {0.2, 0.5}) {
    const auto p = join_protocol(7, 1.0, j2);
    const auto r = reverse_protocol(p);
    const auto sector = SectorSpec::magnetization(7, 3);
    const auto init = prepare_initial_state(p, sector, eig);
    const auto fin = ground_space(p.evaluate(1.0), sector, eig).states.front();
    for (double tau : {1.0, 10.0}) {
      const double forward = std::abs(inner(fin, evolve(p, tau, init)));
      const double backward = std::abs(inner(init, evolve(r, tau, fin)));
      CHECK(std::abs(forward - backward) <= 1e-6);
    }
  }
}

TEST_CASE("convergence_refine") {
  const auto m = j1j2_chain(5, 1.0, 0.3);
  const auto sector = SectorSpec::magnetization(5, 2);
  StateVector psi{sector, std::vector<cplx>(10, cplx{})};
  psi.amplitudes[3] = 1.0;
  PropagatorConfig one_doubling;
  one_doubling.max_doublings = 1;
  one_doubling.steps = 4;
  CHECK_NOTHROW(convergence_refine(constant_protocol(m), 3.0, psi, one_doubling));

  const auto p = join_protocol(5, 1.0, 0.0);
  const auto init = prepare_initial_state(p, sector);
  PropagatorConfig cfg;
  cfg.steps = 50;
  const auto refined = convergence_refine(p, 10.0, init, cfg);
  CHECK(std::abs(refined.norm() - 1.0) <= 1e-9);

  PropagatorConfig crude;
  crude.steps = 1;
  crude.max_doublings = 1;
  CHECK(code_of([&] { convergence_refine(p, 10.0, init, crude); }) == Errc::NoConvergence);
}

TEST_CASE("Krylov exponential handles large time steps by substepping") {
  const auto m = j1j2_chain(8, 1.0, 0.4);
  const auto sector = SectorSpec::magnetization(8, 4);
  const auto op = build_sector_operator(m, SectorBasis(sector));
  std::vector<cplx> psi(op.dimension(), cplx{});
  psi[0] = 1.0;
  auto ref = psi;
  PropagatorConfig cfg;
  cfg.krylov_dim = 8;
  krylov_expm_apply(op, std::span<cplx>(psi), 25.0, cfg);
  const Eigen::MatrixXcd u = oracle::expm_hermitian(op.to_dense().cast<cplx>(), 25.0);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(op.dimension()));
  e(0) = 1.0;
  const Eigen::VectorXcd want = u * e;
  double diff = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) diff += std::norm(psi[i] - want(static_cast<Eigen::Index>(i)));
  CHECK(std::sqrt(diff) <= 1e-9);
}
