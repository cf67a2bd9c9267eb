#include "neseek/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "neseek/errors.hpp"

namespace neseek {

namespace {

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(fmt::format("{}: matrix must be square, got {}x{}", what, a.rows(), a.cols()));
  }
}

}  // namespace

Vector solve(const Matrix& a, const Vector& b) {
  require_square(a, "solve");
  if (a.rows() != b.size()) {
    throw DimensionError(fmt::format("solve: {}x{} system with rhs of length {}", a.rows(), a.cols(), b.size()));
  }
  if (a.rows() == 0) return Vector();

  const Eigen::PartialPivLU<Matrix> lu(a);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < kPivotTolerance * scale) {
    throw SingularMatrixError(fmt::format("solve: pivot magnitude {:.3e} below tolerance", min_pivot));
  }
  return lu.solve(b);
}

std::vector<Complex> eigenvalues(const Matrix& a) {
  require_square(a, "eigenvalues");
  if (!all_finite(a)) throw DimensionError("eigenvalues: matrix has non-finite entries");
  std::vector<Complex> out;
  if (a.rows() == 0) return out;

  // Hessenberg reduction followed by shifted QR (real Schur form).
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigenvalues: QR iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  out.reserve(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) out.push_back(ev[i]);
  std::sort(out.begin(), out.end(), [](const Complex& l, const Complex& r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  return out;
}

double spectral_abscissa(const Matrix& a) {
  const auto ev = eigenvalues(a);
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& l : ev) m = std::max(m, l.real());
  return m;
}

bool is_hurwitz(const Matrix& a, double margin) {
  if (a.rows() == 0) return true;
  return spectral_abscissa(a) < -margin;
}

int numerical_rank(const Matrix& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(tol);
  return static_cast<int>(qr.rank());
}

Matrix controllability_matrix(const Matrix& a, const Matrix& b) {
  require_square(a, "controllability_matrix");
  if (b.rows() != a.rows()) {
    throw DimensionError(fmt::format("controllability_matrix: a is {}x{}, b has {} rows", a.rows(), a.cols(), b.rows()));
  }
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.cols();
  Matrix out(n, n * m);
  Matrix block = b;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.middleCols(k * m, m) = block;
    block = a * block;
  }
  return out;
}

Matrix observability_matrix(const Matrix& a, const Matrix& c) {
  require_square(a, "observability_matrix");
  if (c.cols() != a.cols()) {
    throw DimensionError(fmt::format("observability_matrix: a is {}x{}, c has {} cols", a.rows(), a.cols(), c.cols()));
  }
  return controllability_matrix(a.transpose(), c.transpose()).transpose();
}

bool controllable(const Matrix& a, const Matrix& b) {
  return numerical_rank(controllability_matrix(a, b)) == a.rows();
}

bool observable(const Matrix& a, const Matrix& c) {
  return numerical_rank(observability_matrix(a, c)) == a.rows();
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

}  // namespace neseek
