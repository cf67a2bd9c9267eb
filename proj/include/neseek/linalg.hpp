#pragma once

// Small dense linear-algebra kernel. Every system matrix in the library is an Eigen dynamic
// matrix; this header adds the handful of predicates the rest of the code needs.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace neseek {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

inline constexpr double kPivotTolerance = 1e-12;
inline constexpr double kRankTolerance = 1e-9;
inline constexpr double kHurwitzMargin = 1e-9;

// Solves a x = b by LU with partial pivoting. Throws SingularMatrixError when a pivot falls
// below kPivotTolerance (relative to the largest entry of a).
Vector solve(const Matrix& a, const Vector& b);

// All eigenvalues of a square matrix, with multiplicity, sorted by (real, imag).
// Throws ConvergenceError if the QR iteration does not converge.
std::vector<Complex> eigenvalues(const Matrix& a);

// Largest real part over the spectrum.
double spectral_abscissa(const Matrix& a);

// max Re(lambda) < -margin.
bool is_hurwitz(const Matrix& a, double margin = kHurwitzMargin);

// Numerical rank by column-pivoted QR; a pivot counts when it exceeds tol times the largest one.
int numerical_rank(const Matrix& a, double tol = kRankTolerance);

// [b, ab, ..., a^{n-1} b]
Matrix controllability_matrix(const Matrix& a, const Matrix& b);
// [c; ca; ...; c a^{n-1}]
Matrix observability_matrix(const Matrix& a, const Matrix& c);

bool controllable(const Matrix& a, const Matrix& b);
bool observable(const Matrix& a, const Matrix& c);

bool all_finite(const Matrix& a);

}  // namespace neseek
