#include <algorithm>
#include <cmath>

#include "adiabus/errors.hpp"
#include "adiabus/solver.hpp"

namespace adiabus {

namespace {

using CVec = std::vector<cplx>;

cplx cdot(const CVec& a, const CVec& b) {
  cplx acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double cnorm(std::span<const cplx> a) {
  double acc = 0.0;
  for (const auto& x : a) acc += std::norm(x);
  return std::sqrt(acc);
}

// exp(-i h T) e_1 for the leading k x k block of the Lanczos tridiagonal.
Eigen::VectorXcd tridiagonal_exp(const std::vector<double>& alpha, const std::vector<double>& beta, std::size_t k,
                                 double h) {
  const auto n = static_cast<Eigen::Index>(k);
  Eigen::VectorXd d(n);
  Eigen::VectorXd e(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i < n; ++i) d(i) = alpha[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) e(i) = beta[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  const Eigen::MatrixXd& q = es.eigenvectors();
  Eigen::VectorXcd phase(n);
  for (Eigen::Index i = 0; i < n; ++i) phase(i) = std::polar(q(0, i), -h * es.eigenvalues()(i));
  return q.cast<cplx>() * phase;
}

}  // namespace

void PropagatorConfig::validate() const {
  if (dt < 0.0 || krylov_dim == 0 || !(step_tol > 0.0) || !(global_tol > 0.0) || max_doublings < 0)
    throw Error(Errc::InvalidArgument, "propagator settings must be positive");
}

std::size_t PropagatorConfig::step_count(double tau) const {
  if (steps > 0) return steps;
  const double target = dt > 0.0 ? dt : std::min(0.05, tau / 200.0);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tau / target - 1e-9)));
}

void krylov_expm_apply(const SparseOperator& h, std::span<cplx> psi, double t, const PropagatorConfig& cfg) {
  const std::size_t n = h.dimension();
  if (psi.size() != n) throw Error(Errc::DimensionMismatch, "state size does not match the operator");
  const std::size_t m_max = std::min(cfg.krylov_dim, n);
  const double scale = std::max(h.norm_bound(), 1e-300);
  double remaining = t;
  std::vector<CVec> v;
  std::vector<double> alpha;
  std::vector<double> beta;
  CVec w(n);

  while (remaining > 1e-15 * t) {
    const double norm0 = cnorm(psi);
    if (norm0 == 0.0) return;
    v.assign(1, CVec(psi.begin(), psi.end()));
    for (auto& x : v[0]) x /= norm0;
    alpha.clear();
    beta.clear();

    double step = remaining;
    Eigen::VectorXcd y;
    for (std::size_t j = 0;; ++j) {
      h.apply(std::span<const cplx>(v[j]), std::span<cplx>(w));
      alpha.push_back(cdot(v[j], w).real());
      for (std::size_t i = 0; i < n; ++i) w[i] -= alpha[j] * v[j][i];
      if (j > 0)
        for (std::size_t i = 0; i < n; ++i) w[i] -= beta[j - 1] * v[j - 1][i];
      for (const auto& q : v) {
        const cplx c = cdot(q, w);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
      }
      const double b = cnorm(w);
      beta.push_back(b);
      const std::size_t k = j + 1;
      const bool invariant = b <= 1e-13 * scale;

      y = tridiagonal_exp(alpha, beta, k, step);
      double err = invariant ? 0.0 : b * std::abs(y(static_cast<Eigen::Index>(k - 1))) * norm0;
      if (err <= cfg.step_tol) break;
      if (k == m_max) {
        int halvings = 0;
        while (err > cfg.step_tol) {
          if (++halvings > 60) throw Error(Errc::NoConvergence, "Krylov step size underflow");
          step *= 0.5;
          y = tridiagonal_exp(alpha, beta, k, step);
          err = b * std::abs(y(static_cast<Eigen::Index>(k - 1))) * norm0;
        }
        break;
      }
      CVec next(n);
      for (std::size_t i = 0; i < n; ++i) next[i] = w[i] / b;
      v.push_back(std::move(next));
    }

    std::fill(psi.begin(), psi.end(), cplx{});
    for (Eigen::Index b = 0; b < y.size(); ++b) {
      const cplx c = norm0 * y(b);
      const auto& q = v[static_cast<std::size_t>(b)];
      for (std::size_t i = 0; i < n; ++i) psi[i] += c * q[i];
    }
    remaining -= step;
  }
}

StateVector evolve(const ProtocolSpec& p, double tau, const StateVector& psi0, const PropagatorConfig& cfg) {
  cfg.validate();
  if (!(tau >= 0.0)) throw Error(Errc::InvalidArgument, "annealing time must be >= 0");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "initial state is not normalized");
  auto basis = std::make_shared<const SectorBasis>(psi0.spec);
  if (psi0.size() != basis->dimension())
    throw Error(Errc::DimensionMismatch, "state does not match " + psi0.spec.describe());
  if (tau == 0.0) return psi0;

  ProtocolOperator hp(p, basis);
  const std::size_t steps = cfg.step_count(tau);
  const double dt = tau / static_cast<double>(steps);
  StateVector psi = psi0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double s = (static_cast<double>(k) + 0.5) / static_cast<double>(steps);
    krylov_expm_apply(hp.at(s), std::span<cplx>(psi.amplitudes), dt, cfg);
  }
  const double drift = std::abs(psi.norm() - 1.0);
  if (drift > 1e-6)
    throw Error(Errc::NormDrift, "norm drifted by " + std::to_string(drift) + " over " + std::to_string(steps) +
                                     " steps");
  psi.normalize();
  return psi;
}

StateVector convergence_refine(const ProtocolSpec& p, double tau, const StateVector& psi0,
                               const PropagatorConfig& cfg) {
  cfg.validate();
  PropagatorConfig run = cfg;
  run.steps = cfg.step_count(tau);
  StateVector prev = evolve(p, tau, psi0, run);
  if (tau == 0.0) return prev;
  double fid = 0.0;
  for (int d = 0; d < cfg.max_doublings; ++d) {
    run.steps *= 2;
    StateVector cur = evolve(p, tau, psi0, run);
    fid = std::abs(inner(prev, cur));
    if (fid >= 1.0 - cfg.global_tol) return cur;
    prev = std::move(cur);
  }
  throw Error(Errc::NoConvergence, "step doubling stopped at " + std::to_string(run.steps) +
                                       " steps with successive fidelity " + std::to_string(fid));
}

}  // namespace adiabus
