#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "neseek/plant.hpp"

namespace neseek {

namespace {

// Basis of the symmetric m x m matrices: E_ii and E_ij + E_ji.
std::vector<Matrix> symmetric_basis(Eigen::Index m) {
  std::vector<Matrix> basis;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      Matrix e = Matrix::Zero(m, m);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

struct Dissipation {
  double value;
  Vector gradient;
};

class DissipationObjective {
 public:
  DissipationObjective(const Matrix& cal_a, Matrix p0, std::vector<Matrix> directions)
      : a_(cal_a), p0_(std::move(p0)), dirs_(std::move(directions)) {}

  Eigen::Index dims() const { return static_cast<Eigen::Index>(dirs_.size()); }

  Matrix storage(const Vector& c) const {
    Matrix p = p0_;
    for (Eigen::Index k = 0; k < c.size(); ++k) p += c[k] * dirs_[static_cast<std::size_t>(k)];
    return p;
  }

  Dissipation operator()(const Vector& c) const {
    const Matrix p = storage(c);
    const Matrix s = p * a_ + a_.transpose() * p;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (s + s.transpose()));
    const Eigen::Index top = eig.eigenvalues().size() - 1;
    const Vector v = eig.eigenvectors().col(top);
    Vector g(c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      g[k] = 2.0 * v.dot(dirs_[static_cast<std::size_t>(k)] * (a_ * v));
    }
    return {eig.eigenvalues()[top], g};
  }

 private:
  Matrix a_;
  Matrix p0_;
  std::vector<Matrix> dirs_;
};

// Damped Newton on lambda_max with a finite-difference Hessian, falling back to steepest
// descent. lambda_max is smooth wherever the top eigenvalue is simple, which is the case at
// the optimum for the minimal realizations of interest.
Vector minimise(const DissipationObjective& f) {
  Vector c = Vector::Zero(f.dims());
  if (c.size() == 0) return c;
  auto cur = f(c);
  for (int it = 0; it < 400; ++it) {
    if (cur.value < 0.0 || cur.gradient.norm() < 1e-15) break;

    const double eps = 1e-6 * (1.0 + c.norm());
    Matrix hess(c.size(), c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      Vector dp = c, dm = c;
      dp[k] += eps;
      dm[k] -= eps;
      hess.col(k) = (f(dp).gradient - f(dm).gradient) / (2.0 * eps);
    }
    hess = 0.5 * (hess + hess.transpose());

    std::vector<Vector> directions;
    Eigen::LLT<Matrix> llt(hess);
    if (llt.info() == Eigen::Success) directions.push_back(-llt.solve(cur.gradient));
    directions.push_back(-cur.gradient);

    bool moved = false;
    for (const auto& d : directions) {
      const double slope = cur.gradient.dot(d);
      if (!(slope < 0.0)) continue;
      for (double t = 1.0; t > 1e-14; t *= 0.5) {
        const Vector trial = c + t * d;
        const auto next = f(trial);
        if (next.value <= cur.value + 1e-4 * t * slope) {
          c = trial;
          cur = next;
          moved = true;
          break;
        }
      }
      if (moved) break;
    }
    if (!moved) break;
  }
  return c;
}

}  // namespace

StorageMatrix passivity_storage_matrix(const AugmentedAgent& agent) {
  const Matrix& a = agent.cal_a;
  const Matrix& b = agent.cal_b;
  const Matrix& c = agent.cal_c;
  const Eigen::Index m = a.rows();

  // P b = c^T is linear in the entries of P.
  const auto basis = symmetric_basis(m);
  const auto nb = static_cast<Eigen::Index>(basis.size());
  Matrix eq(m, nb);
  for (Eigen::Index k = 0; k < nb; ++k) eq.col(k) = basis[static_cast<std::size_t>(k)] * b;
  const Vector rhs = c.transpose();

  Eigen::JacobiSVD<Matrix> svd(eq, Eigen::ComputeFullV | Eigen::ComputeThinU);
  svd.setThreshold(1e-12);
  const Vector p_min_norm = svd.solve(rhs);
  const Eigen::Index rank = svd.rank();

  Matrix p0 = Matrix::Zero(m, m);
  for (Eigen::Index k = 0; k < nb; ++k) p0 += p_min_norm[k] * basis[static_cast<std::size_t>(k)];
  std::vector<Matrix> null_dirs;
  for (Eigen::Index k = rank; k < nb; ++k) {
    Matrix d = Matrix::Zero(m, m);
    for (Eigen::Index j = 0; j < nb; ++j) d += svd.matrixV()(j, k) * basis[static_cast<std::size_t>(j)];
    null_dirs.push_back(std::move(d));
  }

  const DissipationObjective objective(a, p0, null_dirs);
  const Vector best = minimise(objective);

  StorageMatrix out;
  out.p = objective.storage(best);
  out.dissipation_eigenvalue = objective(best).value;
  out.equality_residual = (out.p * b - rhs).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> peig(out.p, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = peig.eigenvalues().minCoeff();

  const double tol = 1e-9 * std::max(1.0, out.p.norm() * a.norm());
  const bool equality_ok = out.equality_residual <= 1e-9 * (1.0 + c.norm());
  const bool inequality_ok = out.dissipation_eigenvalue <= tol;
  out.feasible = equality_ok && inequality_ok;
  out.detail = fmt::format("lambda_max(PA + A'P) = {:.6g}, ||PB - C'|| = {:.3e}, lambda_min(P) = {:.6g}",
                           out.dissipation_eigenvalue, out.equality_residual, out.min_eigenvalue);
  if (!out.feasible) out.detail = "no dissipative storage matrix: " + out.detail;
  return out;
}

}  // namespace neseek
