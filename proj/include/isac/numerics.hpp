#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "isac/errors.hpp"

namespace isac {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-9;
inline constexpr double kPsdTolerance = 1e-10;

// Square complex matrix that is exactly Hermitian. Construction checks the
// input against its conjugate transpose and stores the symmetrized average,
// so entries(i,j) == conj(entries(j,i)) holds bit-exactly afterwards.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  static HermitianMatrix from(const CMatrix& m, double tol = kHermitianTolerance);
  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix diagonal(std::span<const double> values);

  const CMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

 private:
  explicit HermitianMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

// Eigen-decomposition A = basis * diag(eigenvalues) * basis^H with the
// eigenvalues sorted in descending order.
struct EigenSystem {
  RVector eigenvalues;
  CMatrix basis;
};

EigenSystem hermitian_eig(const HermitianMatrix& a);

// B with B * B^H == A. Eigenvalues in [-kPsdTolerance, 0) are clamped to zero.
CMatrix matrix_sqrt_psd(const HermitianMatrix& a);

// log2 det(A) through a Cholesky factor. Throws ModelError if A is not PD.
double logdet_pd(const HermitianMatrix& a);

// Unchecked variant for hot loops: `a` must be Hermitian PD, only its lower
// triangle is read. Throws NumericalError if the factorization fails.
double log2det_hpd(const CMatrix& a);

struct WaterfillSolution {
  std::vector<double> allocation;
  double water_level = 0.0;
  std::vector<std::size_t> active_set;  // ascending mode indices
  double budget_used = 0.0;
};

// Maximizes sum_m log2(1 + gains[m] * x[m] / noise[m]) subject to
// sum_m x[m] = budget, x >= 0. Solution: x[m] = max(0, level - noise[m]/gains[m]).
WaterfillSolution waterfill(std::span<const double> gains, std::span<const double> noise,
                            double budget);

// Objective value of an allocation under the water-filling model, in bits.
double waterfill_objective(std::span<const double> gains, std::span<const double> noise,
                           std::span<const double> allocation);

}  // namespace isac
