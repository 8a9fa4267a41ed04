#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hfric/assembly.hpp"

namespace hfric::fem {

// Direct sparse LDL^T solver. The symbolic analysis is kept across
// factorizations with the same sparsity pattern.
class SparseSolver {
public:
  // Throws SingularSystem (zero pivot) or FactorizationFailed (indefinite).
  void factorize(const SparseMatrix& K);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  bool analyzed() const { return analyzed_; }
  Eigen::Index size() const { return n_; }

private:
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  bool analyzed_ = false;
  Eigen::Index n_ = 0;
  Eigen::Index nnz_ = 0;
};

// Factorizes and solves system.K u = system.rhs into system.u. Checks the
// residual against 1e-10 of the right-hand side. Throws FactorizationFailed.
const Eigen::VectorXd& step_solve(LinearSystem& system);

} // namespace hfric::fem
