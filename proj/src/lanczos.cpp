#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "adiabus/errors.hpp"
#include "adiabus/solver.hpp"

namespace adiabus {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

void axpy(double a, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

double nrm(const Vec& v) { return std::sqrt(dot(v, v)); }

// Reproducible across standard libraries: raw 64-bit engine output only.
class StartVectors {
 public:
  explicit StartVectors(std::uint64_t seed) : engine_(seed) {}
  Vec next(std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = static_cast<double>(engine_() >> 11) * 0x1.0p-53 - 0.5;
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

// Two Gram-Schmidt passes against `against`.
void orthogonalize(Vec& w, const std::vector<Vec>& against) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : against) axpy(-dot(q, w), q, w);
}

struct Pairs {
  std::vector<double> values;
  std::vector<Vec> vectors;
};

double residual_norm(const SparseOperator& op, const Vec& v, double e) {
  Vec hv = matvec(op, std::span<const double>(v));
  axpy(-e, v, hv);
  return nrm(hv);
}

// Thick-restart Lanczos (explicit Rayleigh-Ritz on a fully reorthogonalized
// basis) for the `want` lowest eigenpairs of op restricted to the orthogonal
// complement of `locked`.
Pairs restarted_lanczos(const SparseOperator& op, std::size_t want, const std::vector<Vec>& locked,
                        const EigConfig& cfg, StartVectors& starts, std::size_t& matvecs) {
  const std::size_t n = op.dimension();
  const std::size_t avail = n - locked.size();
  want = std::min(want, avail);
  const std::size_t kmax = std::min(avail, std::max<std::size_t>(cfg.max_basis, 2 * want + 20));
  const double scale = std::max(op.norm_bound(), 1e-300);

  std::vector<Vec> basis;
  std::vector<Vec> products;  // H * basis[i]
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kmax), static_cast<Eigen::Index>(kmax));

  auto fresh_direction = [&]() -> bool {
    std::vector<Vec> all = locked;
    all.insert(all.end(), basis.begin(), basis.end());
    for (int attempt = 0; attempt < 8; ++attempt) {
      Vec v = starts.next(n);
      orthogonalize(v, all);
      const double nv = nrm(v);
      if (nv > 1e-8) {
        for (auto& x : v) x /= nv;
        basis.push_back(std::move(v));
        return true;
      }
    }
    return false;
  };

  if (!fresh_direction()) throw Error(Errc::NoConvergence, "could not build a start vector");

  Vec residual;
  double beta = 0.0;
  for (;;) {
    // Extend the basis until kmax, computing the projected matrix explicitly.
    while (products.size() < basis.size()) {
      if (matvecs > cfg.max_matvecs)
        throw Error(Errc::NoConvergence, "Lanczos did not converge after " + std::to_string(matvecs) + " matvecs");
      const std::size_t j = products.size();
      Vec w = matvec(op, std::span<const double>(basis[j]));
      ++matvecs;
      products.push_back(w);
      for (std::size_t i = 0; i <= j; ++i) {
        const double h = dot(basis[i], w);
        t(i, j) = t(j, i) = h;
      }
      for (std::size_t i = 0; i <= j; ++i) axpy(-t(i, j), basis[i], w);
      orthogonalize(w, locked);
      orthogonalize(w, basis);
      beta = nrm(w);
      residual = std::move(w);
      if (basis.size() == kmax) break;
      if (beta > 1e-12 * scale) {
        for (auto& x : residual) x /= beta;
        basis.push_back(residual);
      } else if (!fresh_direction()) {
        break;
      }
    }

    const auto k = static_cast<Eigen::Index>(basis.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t.topLeftCorner(k, k));
    const Eigen::VectorXd& theta = small.eigenvalues();
    const Eigen::MatrixXd& y = small.eigenvectors();
    const bool exhausted = static_cast<std::size_t>(k) == avail;
    const double tail = exhausted ? 0.0 : beta;

    bool converged = true;
    for (std::size_t i = 0; i < want; ++i)
      if (tail * std::abs(y(k - 1, static_cast<Eigen::Index>(i))) > cfg.tol) converged = false;

    auto ritz = [&](std::size_t count) {
      std::vector<Vec> out(count, Vec(n, 0.0));
      for (std::size_t i = 0; i < count; ++i)
        for (Eigen::Index b = 0; b < k; ++b) axpy(y(b, static_cast<Eigen::Index>(i)), basis[b], out[i]);
      return out;
    };

    if (converged) {
      Pairs out;
      out.vectors = ritz(want);
      for (std::size_t i = 0; i < want; ++i) out.values.push_back(theta(static_cast<Eigen::Index>(i)));
      return out;
    }
    // Thick restart: keep the lowest Ritz vectors plus the normalized residual.
    const std::size_t keep =
        std::min<std::size_t>(static_cast<std::size_t>(k) - 1, std::max<std::size_t>(want + 8, kmax / 2));
    std::vector<Vec> kept = ritz(keep);
    std::vector<Vec> kept_products(keep, Vec(n, 0.0));
    for (std::size_t i = 0; i < keep; ++i)
      for (Eigen::Index b = 0; b < k; ++b) axpy(y(b, static_cast<Eigen::Index>(i)), products[b], kept_products[i]);
    basis = std::move(kept);
    products = std::move(kept_products);
    t.setZero();
    for (std::size_t i = 0; i < keep; ++i)
      for (std::size_t j = 0; j < keep; ++j) t(i, j) = dot(basis[i], products[j]);
    t = 0.5 * (t + t.transpose()).eval();
    if (beta > 1e-12 * scale) {
      for (auto& x : residual) x /= beta;
      orthogonalize(residual, locked);
      orthogonalize(residual, basis);
      const double nr = nrm(residual);
      if (nr > 1e-8) {
        for (auto& x : residual) x /= nr;
        basis.push_back(residual);
      } else if (!fresh_direction()) {
        throw Error(Errc::NoConvergence, "Lanczos restart lost its residual direction");
      }
    } else if (!fresh_direction()) {
      throw Error(Errc::NoConvergence, "Lanczos restart could not extend the basis");
    }
  }
}

}  // namespace

StateVector EigResult::state(std::size_t i) const {
  StateVector s{sector, std::vector<cplx>(eigenvectors.at(i).begin(), eigenvectors.at(i).end())};
  return s;
}

EigResult dense_lowest_eigenpairs(const SparseOperator& op, std::size_t m) {
  const Eigen::MatrixXd h = op.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw Error(Errc::NoConvergence, "dense eigensolver failed");
  EigResult out;
  out.sector = op.basis().spec();
  for (std::size_t i = 0; i < m; ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    out.eigenvalues.push_back(es.eigenvalues()(col));
    Eigen::VectorXd v = es.eigenvectors().col(col);
    out.residuals.push_back((h * v - es.eigenvalues()(col) * v).norm());
    out.eigenvectors.emplace_back(v.data(), v.data() + v.size());
  }
  return out;
}

EigResult lowest_eigenpairs(const SparseOperator& op, std::size_t m, const EigConfig& cfg) {
  const std::size_t n = op.dimension();
  if (m == 0 || m > n)
    throw Error(Errc::InvalidArgument, "requested " + std::to_string(m) + " eigenpairs of dimension " +
                                           std::to_string(n));
  if (!(cfg.tol > 0.0)) throw Error(Errc::InvalidArgument, "eigensolver tolerance must be positive");
  if (n <= cfg.dense_threshold) return dense_lowest_eigenpairs(op, m);

  StartVectors starts(cfg.seed);
  std::size_t matvecs = 0;
  Pairs found = restarted_lanczos(op, m, {}, cfg, starts, matvecs);

  // A single Krylov sequence sees one vector per degenerate eigenspace; a
  // deflated pass against everything found so far recovers missing copies.
  if (cfg.verify_multiplicity) {
    for (std::size_t round = 0; round < m && found.vectors.size() < n; ++round) {
      Pairs extra = restarted_lanczos(op, 1, found.vectors, cfg, starts, matvecs);
      const double guard = std::max(cfg.tol, 1e-12 * op.norm_bound());
      if (!(extra.values[0] < found.values.back() - guard)) break;
      auto pos = std::upper_bound(found.values.begin(), found.values.end(), extra.values[0]) - found.values.begin();
      found.values.insert(found.values.begin() + pos, extra.values[0]);
      found.vectors.insert(found.vectors.begin() + pos, std::move(extra.vectors[0]));
      found.values.pop_back();
      found.vectors.pop_back();
    }
  }

  EigResult out;
  out.sector = op.basis().spec();
  for (std::size_t i = 0; i < m; ++i) {
    Vec& v = found.vectors[i];
    const double nv = nrm(v);
    for (auto& x : v) x /= nv;
    const double r = residual_norm(op, v, found.values[i]);
    if (r > 10.0 * cfg.tol)
      throw Error(Errc::NoConvergence, "Ritz pair " + std::to_string(i) + " residual " + std::to_string(r) +
                                           " above tolerance");
    out.eigenvalues.push_back(found.values[i]);
    out.residuals.push_back(r);
    out.eigenvectors.push_back(std::move(v));
  }
  return out;
}

double sector_gap(const ChainModel& model, const SectorSpec& sector, const EigConfig& cfg) {
  auto basis = std::make_shared<const SectorBasis>(sector);
  if (basis->dimension() < 2) throw Error(Errc::InvalidArgument, "gap needs a sector of dimension >= 2");
  const auto op = build_sector_operator(model, basis);
  const auto eig = lowest_eigenpairs(op, 2, cfg);
  return eig.eigenvalues[1] - eig.eigenvalues[0];
}

}  // namespace adiabus
