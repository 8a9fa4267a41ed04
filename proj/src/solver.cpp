#include "hfric/solver.hpp"

#include <cmath>

#include "hfric/errors.hpp"

namespace hfric::fem {

void SparseSolver::factorize(const SparseMatrix& K) {
  if (K.rows() != K.cols()) throw FactorizationFailed("stiffness matrix is not square");
  if (!analyzed_ || K.rows() != n_ || K.nonZeros() != nnz_) {
    ldlt_.analyzePattern(K);
    analyzed_ = true;
    n_ = K.rows();
    nnz_ = K.nonZeros();
  }
  ldlt_.factorize(K);
  if (ldlt_.info() != Eigen::Success) throw FactorizationFailed("sparse LDL^T factorization failed");
  const Eigen::VectorXd D = ldlt_.vectorD();
  const double dmax = D.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < D.size(); ++i) {
    if (std::abs(D[i]) <= 1e-12 * dmax) {
      throw SingularSystem("stiffness is singular: the constraints leave a rigid-body mode free");
    }
    if (D[i] < 0.0) throw FactorizationFailed("stiffness is not positive definite");
  }
}

Eigen::VectorXd SparseSolver::solve(const Eigen::VectorXd& rhs) const { return ldlt_.solve(rhs); }

Eigen::MatrixXd SparseSolver::solve(const Eigen::MatrixXd& rhs) const { return ldlt_.solve(rhs); }

const Eigen::VectorXd& step_solve(LinearSystem& system) {
  SparseSolver s;
  s.factorize(system.K);
  system.u = s.solve(system.rhs);
  const double rn = system.rhs.norm();
  double res = (system.K * system.u - system.rhs).norm();
  if (res > 1e-10 * rn) {
    // One step of iterative refinement.
    system.u += s.solve(Eigen::VectorXd(system.rhs - system.K * system.u));
    res = (system.K * system.u - system.rhs).norm();
  }
  if (!(res <= 1e-10 * rn) && rn > 0.0) {
    throw FactorizationFailed("solution residual " + std::to_string(res / rn) + " exceeds 1e-10");
  }
  return system.u;
}

} // namespace hfric::fem
