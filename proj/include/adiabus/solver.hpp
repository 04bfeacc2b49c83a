#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adiabus/basis.hpp"
#include "adiabus/model.hpp"

namespace adiabus {

// Real symmetric sector-restricted Hamiltonian in CSR form. Off-diagonal
// entries live in the CSR arrays (columns sorted per row); the diagonal is
// stored separately.
class SparseOperator {
 public:
  SparseOperator(std::shared_ptr<const SectorBasis> basis, std::vector<std::size_t> row_ptr,
                 std::vector<std::uint32_t> cols, std::vector<double> values, std::vector<double> diagonal);

  const SectorBasis& basis() const { return *basis_; }
  std::shared_ptr<const SectorBasis> shared_basis() const { return basis_; }
  std::size_t dimension() const { return diagonal_.size(); }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::uint32_t> cols() const { return cols_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> diagonal() const { return diagonal_; }

  // y = H x, accumulated row by row in index order.
  void apply(std::span<const double> x, std::span<double> y) const;
  void apply(std::span<const cplx> x, std::span<cplx> y) const;

  // Upper bound on the spectral radius (max absolute row sum).
  double norm_bound() const;
  Eigen::MatrixXd to_dense() const;

 private:
  friend class ProtocolOperator;
  std::shared_ptr<const SectorBasis> basis_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
  std::vector<double> diagonal_;
};

SparseOperator build_sector_operator(const ChainModel& model, const SectorBasis& basis);
SparseOperator build_sector_operator(const ChainModel& model, std::shared_ptr<const SectorBasis> basis);

std::vector<double> matvec(const SparseOperator& op, std::span<const double> v);
std::vector<cplx> matvec(const SparseOperator& op, std::span<const cplx> v);

double expectation(const SparseOperator& op, const StateVector& psi);

// H(s) of a protocol on a fixed sector: one shared sparsity pattern with a
// value array per linear term, so re-assembly at a new s is a weighted sum.
class ProtocolOperator {
 public:
  ProtocolOperator(const ProtocolSpec& p, std::shared_ptr<const SectorBasis> basis);

  const SparseOperator& at(double s);  // reassembled in place
  std::size_t dimension() const { return current_.dimension(); }

 private:
  std::vector<ProtocolTerm> terms_;
  std::vector<std::vector<double>> term_values_;
  std::vector<std::vector<double>> term_diagonals_;
  SparseOperator current_;
};

struct EigConfig {
  double tol = 1e-9;                  // residual ||Hv - Ev||
  std::size_t dense_threshold = 512;  // dense solve at or below this dimension
  std::size_t max_basis = 120;        // Krylov basis size before a thick restart
  std::size_t max_matvecs = 20000;
  bool verify_multiplicity = true;  // deflated pass to catch missed degenerate copies
  std::uint64_t seed = 0x5eed1234abcdULL;
};

struct EigResult {
  SectorSpec sector;
  std::vector<double> eigenvalues;  // ascending
  std::vector<std::vector<double>> eigenvectors;
  std::vector<double> residuals;

  StateVector state(std::size_t i) const;
};

EigResult lowest_eigenpairs(const SparseOperator& op, std::size_t m, const EigConfig& cfg = {});
EigResult dense_lowest_eigenpairs(const SparseOperator& op, std::size_t m);

double sector_gap(const ChainModel& model, const SectorSpec& sector, const EigConfig& cfg = {});

struct PropagatorConfig {
  std::size_t steps = 0;  // fixed step count; 0 derives it from dt
  double dt = 0.0;        // 0 selects min(0.05, tau / 200)
  std::size_t krylov_dim = 30;
  double step_tol = 1e-12;   // Krylov error estimate per step
  double global_tol = 1e-8;  // refinement: 1 - fidelity between successive step counts
  int max_doublings = 8;
  bool refine = false;  // fidelity-level callers run convergence_refine when set

  void validate() const;
  std::size_t step_count(double tau) const;
};

// exp(-i H t) psi by restarted Krylov (Lanczos) approximations.
void krylov_expm_apply(const SparseOperator& h, std::span<cplx> psi, double t, const PropagatorConfig& cfg);

// Midpoint-rule time-ordered evolution of psi0 under p over [0, tau].
StateVector evolve(const ProtocolSpec& p, double tau, const StateVector& psi0, const PropagatorConfig& cfg = {});

// Repeats evolve with doubled step counts until successive results agree.
StateVector convergence_refine(const ProtocolSpec& p, double tau, const StateVector& psi0,
                               const PropagatorConfig& cfg = {});

}  // namespace adiabus
