#pragma once

// Test-only reference implementations. Nothing here calls the library's
// operator builder, eigensolver or propagator.

#include <bit>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "adiabus/model.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Single-site Pauli matrix in the (down, up) = (bit 0, bit 1) basis.
inline Eigen::Matrix2cd pauli(char axis) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  const cplx i{0.0, 1.0};
  switch (axis) {
    case 'x': m(0, 1) = m(1, 0) = 1.0; break;
    case 'y': m(0, 1) = i; m(1, 0) = -i; break;  // <d|Y|u> = i, <u|Y|d> = -i
    case 'z': m(0, 0) = -1.0; m(1, 1) = 1.0; break;
    default: m.setIdentity();
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

// Operator `axis` on `site`, identity elsewhere; site 1 is the least
// significant bit so it is the last Kronecker factor.
inline Eigen::MatrixXcd site_operator(char axis, int site, int n) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = n; k >= 1; --k) m = kron(m, k == site ? Eigen::MatrixXcd(pauli(axis)) : Eigen::MatrixXcd(pauli('1')));
  return m;
}

inline Eigen::MatrixXcd hamiltonian(const adiabus::ChainModel& model) {
  const int n = model.n_spins();
  const auto dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& b : model.bonds()) {
    if (b.jx != 0.0) h += b.jx * site_operator('x', b.i, n) * site_operator('x', b.j, n);
    if (b.jy != 0.0) h += b.jy * site_operator('y', b.i, n) * site_operator('y', b.j, n);
    if (b.jz != 0.0) h += b.jz * site_operator('z', b.i, n) * site_operator('z', b.j, n);
  }
  return h;
}

inline std::vector<std::uint32_t> states_where(int n, const std::function<bool(std::uint32_t)>& keep) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < (1u << n); ++s)
    if (keep(s)) out.push_back(s);
  return out;
}

inline std::vector<std::uint32_t> magnetization_states(int n, int k) {
  return states_where(n, [k](std::uint32_t s) { return std::popcount(s) == k; });
}

inline std::vector<std::uint32_t> parity_states(int n, int p) {
  return states_where(n, [p](std::uint32_t s) { return std::popcount(s) % 2 == p; });
}

inline Eigen::MatrixXcd restrict(const Eigen::MatrixXcd& h, const std::vector<std::uint32_t>& states) {
  const auto d = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd out(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) out(r, c) = h(states[r], states[c]);
  return out;
}

inline Eigen::VectorXd spectrum(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  return es.eigenvalues();
}

inline Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::polar(1.0, -t * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Piecewise-constant exact exponentials sampled at step midpoints.
inline Eigen::VectorXcd evolve(const adiabus::ProtocolSpec& p, double tau, Eigen::VectorXcd psi,
                               const std::vector<std::uint32_t>& states, int steps) {
  const double dt = tau / steps;
  for (int k = 0; k < steps; ++k) {
    const double s = (k + 0.5) / steps;
    psi = expm_hermitian(restrict(hamiltonian(p.evaluate(s)), states), dt) * psi;
  }
  return psi;
}

}  // namespace oracle
