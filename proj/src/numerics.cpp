#include "isac/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace isac {

namespace {

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

HermitianMatrix HermitianMatrix::from(const CMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ModelError("HermitianMatrix: expected a non-empty square matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const double asym = max_abs(m - m.adjoint());
  if (!std::isfinite(asym) || asym > tol * std::max(1.0, max_abs(m))) {
    throw ModelError("HermitianMatrix: input is not Hermitian (max |A - A^H| = " +
                     std::to_string(asym) + ")");
  }
  CMatrix sym = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < sym.rows(); ++i) sym(i, i) = Complex(sym(i, i).real(), 0.0);
  return HermitianMatrix(std::move(sym));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  CMatrix m = CMatrix::Zero(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return HermitianMatrix(std::move(m));
}

EigenSystem hermitian_eig(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eig: eigensolver did not converge");
  }
  // Eigen returns ascending order; reorder to descending, ties by original index.
  const Eigen::Index n = a.dim();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  const RVector& vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return vals(i) > vals(j); });

  EigenSystem out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = vals(order[k]);
    out.basis.col(k) = solver.eigenvectors().col(order[k]);
  }
  return out;
}

CMatrix matrix_sqrt_psd(const HermitianMatrix& a) {
  EigenSystem es = hermitian_eig(a);
  RVector root(es.eigenvalues.size());
  for (Eigen::Index k = 0; k < root.size(); ++k) {
    const double v = es.eigenvalues(k);
    if (v < -kPsdTolerance) {
      throw ModelError("matrix_sqrt_psd: matrix is indefinite (eigenvalue " +
                       std::to_string(v) + ")");
    }
    root(k) = std::sqrt(std::max(v, 0.0));
  }
  return es.basis * root.asDiagonal() * es.basis.adjoint();
}

double logdet_pd(const HermitianMatrix& a) {
  Eigen::LLT<CMatrix> llt(a.matrix());
  if (llt.info() != Eigen::Success) {
    throw ModelError("logdet_pd: matrix is not positive definite");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.dim(); ++i) acc += std::log(llt.matrixLLT()(i, i).real());
  return 2.0 * acc / std::log(2.0);
}

double log2det_hpd(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("log2det_hpd: Cholesky factorization failed");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) acc += std::log(llt.matrixLLT()(i, i).real());
  return 2.0 * acc / std::log(2.0);
}

WaterfillSolution waterfill(std::span<const double> gains, std::span<const double> noise,
                            double budget) {
  if (gains.size() != noise.size()) {
    throw ModelError("waterfill: gains and noise differ in length (" +
                     std::to_string(gains.size()) + " vs " + std::to_string(noise.size()) + ")");
  }
  if (gains.empty()) throw ModelError("waterfill: no modes");
  if (!(budget >= 0.0) || !std::isfinite(budget)) {
    throw ModelError("waterfill: budget must be a finite nonnegative value");
  }
  const std::size_t n = gains.size();
  std::vector<double> floor(n);
  for (std::size_t m = 0; m < n; ++m) {
    if (!(gains[m] > 0.0) || !(noise[m] > 0.0)) {
      throw ModelError("waterfill: gains and noise must be strictly positive");
    }
    floor[m] = noise[m] / gains[m];
  }

  // Strongest modes first; the active set is a prefix of this order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return floor[i] < floor[j]; });

  WaterfillSolution sol;
  sol.allocation.assign(n, 0.0);
  if (budget == 0.0) {
    sol.water_level = floor[order.front()];
    return sol;
  }

  std::size_t active = 1;
  double level = budget + floor[order[0]];
  double prefix = floor[order[0]];
  for (std::size_t k = 2; k <= n; ++k) {
    prefix += floor[order[k - 1]];
    const double candidate = (budget + prefix) / static_cast<double>(k);
    if (candidate <= floor[order[k - 1]]) break;
    active = k;
    level = candidate;
  }

  sol.water_level = level;
  for (std::size_t k = 0; k < active; ++k) {
    const std::size_t m = order[k];
    sol.allocation[m] = level - floor[m];
    sol.active_set.push_back(m);
  }
  std::sort(sol.active_set.begin(), sol.active_set.end());
  sol.budget_used = std::accumulate(sol.allocation.begin(), sol.allocation.end(), 0.0);
  return sol;
}

double waterfill_objective(std::span<const double> gains, std::span<const double> noise,
                           std::span<const double> allocation) {
  if (gains.size() != noise.size() || gains.size() != allocation.size()) {
    throw ModelError("waterfill_objective: length mismatch");
  }
  double bits = 0.0;
  for (std::size_t m = 0; m < gains.size(); ++m) {
    bits += std::log2(1.0 + gains[m] * allocation[m] / noise[m]);
  }
  return bits;
}

}  // namespace isac
