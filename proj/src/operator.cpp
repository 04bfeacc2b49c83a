#include <algorithm>
#include <cmath>
#include <numeric>

#include "adiabus/errors.hpp"
#include "adiabus/solver.hpp"

namespace adiabus {

SparseOperator::SparseOperator(std::shared_ptr<const SectorBasis> basis, std::vector<std::size_t> row_ptr,
                               std::vector<std::uint32_t> cols, std::vector<double> values,
                               std::vector<double> diagonal)
    : basis_(std::move(basis)),
      row_ptr_(std::move(row_ptr)),
      cols_(std::move(cols)),
      values_(std::move(values)),
      diagonal_(std::move(diagonal)) {}

namespace {

template <typename T>
void apply_impl(const SparseOperator& op, std::span<const T> x, std::span<T> y) {
  const std::size_t n = op.dimension();
  if (x.size() != n || y.size() != n)
    throw Error(Errc::DimensionMismatch, "matvec on dimension " + std::to_string(n) + " with vectors of size " +
                                             std::to_string(x.size()) + "/" + std::to_string(y.size()));
  const auto rp = op.row_ptr();
  const auto cols = op.cols();
  const auto vals = op.values();
  const auto diag = op.diagonal();
  for (std::size_t r = 0; r < n; ++r) {
    T acc = diag[r] * x[r];
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) acc += vals[k] * x[cols[k]];
    y[r] = acc;
  }
}

struct Entry {
  std::uint32_t col;
  std::size_t term;
  double value;
};

void check_sector(const std::vector<Bond>& bonds, const SectorBasis& basis) {
  if (basis.spec().kind != SectorSpec::Kind::Magnetization) return;
  for (const auto& b : bonds)
    if (b.jx != b.jy)
      throw Error(Errc::NonConservingSector, "bond (" + std::to_string(b.i) + "," + std::to_string(b.j) +
                                                 ") has jx != jy; use a parity or full basis");
}

// Matrix elements of every bond list in `terms` over `basis`, merged into one
// pattern. Pauli convention: ZZ gives jz * z_i * z_j on the diagonal, an
// anti-aligned pair flips with amplitude jx + jy, an aligned pair with jx - jy.
void collect(const std::vector<const std::vector<Bond>*>& terms, const SectorBasis& basis,
             std::vector<std::size_t>& row_ptr, std::vector<std::uint32_t>& cols,
             std::vector<std::vector<double>>& values, std::vector<std::vector<double>>& diagonals) {
  const std::size_t n = basis.dimension();
  if (basis.n_spins() < 1) throw Error(Errc::InvalidSector, "empty basis");
  for (const auto* t : terms) {
    check_sector(*t, basis);
    for (const auto& b : *t)
      if (b.j > basis.n_spins())
        throw Error(Errc::DimensionMismatch, "bond site " + std::to_string(b.j) + " beyond basis of " +
                                                 std::to_string(basis.n_spins()) + " spins");
  }
  row_ptr.assign(1, 0);
  cols.clear();
  values.assign(terms.size(), {});
  diagonals.assign(terms.size(), std::vector<double>(n, 0.0));
  std::vector<Entry> row;
  for (std::size_t r = 0; r < n; ++r) {
    const BasisState s = basis.state(r);
    row.clear();
    for (std::size_t t = 0; t < terms.size(); ++t) {
      for (const auto& b : *terms[t]) {
        const BasisState mask = site_bit(b.i) | site_bit(b.j);
        const bool up_i = s & site_bit(b.i);
        const bool up_j = s & site_bit(b.j);
        diagonals[t][r] += (up_i == up_j) ? b.jz : -b.jz;
        const double flip = (up_i == up_j) ? b.jx - b.jy : b.jx + b.jy;
        if (flip == 0.0) continue;
        auto c = basis.find(s ^ mask);
        if (!c)
          throw Error(Errc::NonConservingSector, "bond (" + std::to_string(b.i) + "," + std::to_string(b.j) +
                                                     ") leaves " + basis.spec().describe());
        row.push_back({static_cast<std::uint32_t>(*c), t, flip});
      }
    }
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) {
      return a.col != b.col ? a.col < b.col : a.term < b.term;
    });
    for (std::size_t k = 0; k < row.size();) {
      const std::uint32_t c = row[k].col;
      cols.push_back(c);
      for (auto& v : values) v.push_back(0.0);
      for (; k < row.size() && row[k].col == c; ++k) values[row[k].term].back() += row[k].value;
    }
    row_ptr.push_back(cols.size());
  }
}

}  // namespace

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const { apply_impl(*this, x, y); }
void SparseOperator::apply(std::span<const cplx> x, std::span<cplx> y) const { apply_impl(*this, x, y); }

double SparseOperator::norm_bound() const {
  double best = 0.0;
  for (std::size_t r = 0; r < dimension(); ++r) {
    double acc = std::abs(diagonal_[r]);
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += std::abs(values_[k]);
    best = std::max(best, acc);
  }
  return best;
}

Eigen::MatrixXd SparseOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    m(r, r) = diagonal_[r];
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) m(r, cols_[k]) += values_[k];
  }
  return m;
}

SparseOperator build_sector_operator(const ChainModel& model, std::shared_ptr<const SectorBasis> basis) {
  if (model.n_spins() != basis->n_spins())
    throw Error(Errc::DimensionMismatch, "model has " + std::to_string(model.n_spins()) + " spins, basis has " +
                                             std::to_string(basis->n_spins()));
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> cols;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> diagonals;
  collect({&model.bonds()}, *basis, row_ptr, cols, values, diagonals);
  return SparseOperator(std::move(basis), std::move(row_ptr), std::move(cols), std::move(values[0]),
                        std::move(diagonals[0]));
}

SparseOperator build_sector_operator(const ChainModel& model, const SectorBasis& basis) {
  return build_sector_operator(model, std::make_shared<const SectorBasis>(basis));
}

std::vector<double> matvec(const SparseOperator& op, std::span<const double> v) {
  std::vector<double> out(v.size());
  op.apply(v, std::span<double>(out));
  return out;
}

std::vector<cplx> matvec(const SparseOperator& op, std::span<const cplx> v) {
  std::vector<cplx> out(v.size());
  op.apply(v, std::span<cplx>(out));
  return out;
}

double expectation(const SparseOperator& op, const StateVector& psi) {
  const auto h = matvec(op, std::span<const cplx>(psi.amplitudes));
  cplx acc{};
  for (std::size_t i = 0; i < h.size(); ++i) acc += std::conj(psi.amplitudes[i]) * h[i];
  return acc.real() / std::norm(psi.norm());
}

ProtocolOperator::ProtocolOperator(const ProtocolSpec& p, std::shared_ptr<const SectorBasis> basis)
    : terms_(p.terms()), current_(basis, {0}, {}, {}, {}) {
  if (p.n_spins != basis->n_spins())
    throw Error(Errc::DimensionMismatch, "protocol has " + std::to_string(p.n_spins) + " spins, basis has " +
                                             std::to_string(basis->n_spins()));
  std::vector<const std::vector<Bond>*> lists;
  for (const auto& t : terms_) lists.push_back(&t.bonds);
  collect(lists, *basis, current_.row_ptr_, current_.cols_, term_values_, term_diagonals_);
  current_.values_.assign(current_.cols_.size(), 0.0);
  current_.diagonal_.assign(basis->dimension(), 0.0);
}

const SparseOperator& ProtocolOperator::at(double s) {
  std::fill(current_.values_.begin(), current_.values_.end(), 0.0);
  std::fill(current_.diagonal_.begin(), current_.diagonal_.end(), 0.0);
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const double c = terms_[t].coefficient(s);
    if (c == 0.0) continue;
    const auto& v = term_values_[t];
    const auto& d = term_diagonals_[t];
    for (std::size_t k = 0; k < v.size(); ++k) current_.values_[k] += c * v[k];
    for (std::size_t k = 0; k < d.size(); ++k) current_.diagonal_[k] += c * d[k];
  }
  return current_;
}

}  // namespace adiabus
