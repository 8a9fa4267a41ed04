#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "hfric/solver.hpp"

namespace hfric::fem {

// Linear spring on a point between two top vertical dofs (local indices into
// the top-dof list): adds k N N^T to the stiffness and k zeta N to the load,
// with N = (Na, Nb). This is a penalty contact point with target elevation zeta.
struct TopSpring {
  int a = 0, b = 0;
  double Na = 0.0, Nb = 0.0;
  double k = 0.0;
  double zeta = 0.0;
};

// Per-run mutable data, so one solver can serve concurrent runs.
struct StepWorkspace {
  double E = 1.0;
  Eigen::VectorXd f;
  Eigen::VectorXd r_top;
  Eigen::VectorXd u;
  std::shared_ptr<SparseSolver> full;
};

// Solves (E K_unit + springs) u = f for a homogeneous body whose moduli scale
// with a single factor E per step.
class TopSolver {
public:
  virtual ~TopSolver() = default;
  virtual void set_step(StepWorkspace& w, double E, const Eigen::VectorXd& f) const = 0;
  // Top vertical displacements for the given springs.
  virtual Eigen::VectorXd solve_top(StepWorkspace& w, const std::vector<TopSpring>& springs) const = 0;
  // Full equation-space displacement for the top values of the last solve_top.
  virtual Eigen::VectorXd displacement(StepWorkspace& w, const Eigen::VectorXd& u_top) const = 0;
  const std::vector<int>& top_dofs() const { return top_; }

protected:
  std::vector<int> top_;
};

// Static condensation onto the top dofs. The interior block of K_unit is
// factorized once and the Schur complement kept dense; each step then costs
// two sparse solves plus one dense Cholesky per spring configuration.
class CondensedSolver final : public TopSolver {
public:
  CondensedSolver(const SparseMatrix& K_unit, std::vector<int> top_dofs);
  void set_step(StepWorkspace& w, double E, const Eigen::VectorXd& f) const override;
  Eigen::VectorXd solve_top(StepWorkspace& w, const std::vector<TopSpring>& springs) const override;
  Eigen::VectorXd displacement(StepWorkspace& w, const Eigen::VectorXd& u_top) const override;
  const Eigen::MatrixXd& schur() const { return S_; }

private:
  std::vector<int> interior_;  // equation index of each interior unknown
  SparseMatrix K_II_, K_IT_;
  SparseSolver interior_solver_;
  Eigen::MatrixXd S_;  // K_TT - K_TI K_II^-1 K_IT, unit modulus
  Eigen::Index n_ = 0;
};

// Reference route: assembles and factorizes the full sparse system for every
// spring configuration.
class FullSolver final : public TopSolver {
public:
  FullSolver(const SparseMatrix& K_unit, std::vector<int> top_dofs);
  void set_step(StepWorkspace& w, double E, const Eigen::VectorXd& f) const override;
  Eigen::VectorXd solve_top(StepWorkspace& w, const std::vector<TopSpring>& springs) const override;
  Eigen::VectorXd displacement(StepWorkspace& w, const Eigen::VectorXd& u_top) const override;

private:
  SparseMatrix K_unit_;
};

} // namespace hfric::fem
