#include "hfric/condensed.hpp"

#include <algorithm>

#include "hfric/errors.hpp"

namespace hfric::fem {
namespace {

void add_springs(Eigen::MatrixXd& M, Eigen::VectorXd& r, const std::vector<TopSpring>& springs) {
  for (const auto& s : springs) {
    M(s.a, s.a) += s.k * s.Na * s.Na;
    M(s.b, s.b) += s.k * s.Nb * s.Nb;
    M(s.a, s.b) += s.k * s.Na * s.Nb;
    M(s.b, s.a) += s.k * s.Na * s.Nb;
    r[s.a] += s.k * s.zeta * s.Na;
    r[s.b] += s.k * s.zeta * s.Nb;
  }
}

} // namespace

CondensedSolver::CondensedSolver(const SparseMatrix& K_unit, std::vector<int> top_dofs) {
  top_ = std::move(top_dofs);
  n_ = K_unit.rows();
  const auto m = static_cast<Eigen::Index>(top_.size());
  std::vector<int> top_pos(static_cast<std::size_t>(n_), -1);
  for (Eigen::Index j = 0; j < m; ++j) top_pos[top_[j]] = static_cast<int>(j);
  std::vector<int> int_pos(static_cast<std::size_t>(n_), -1);
  for (Eigen::Index i = 0; i < n_; ++i) {
    if (top_pos[i] < 0) {
      int_pos[i] = static_cast<int>(interior_.size());
      interior_.push_back(static_cast<int>(i));
    }
  }
  const auto ni = static_cast<Eigen::Index>(interior_.size());

  std::vector<Eigen::Triplet<double>> tii, tit;
  Eigen::MatrixXd K_TT = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index c = 0; c < K_unit.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(K_unit, c); it; ++it) {
      const auto r = it.row();
      const auto col = it.col();
      if (int_pos[r] >= 0 && int_pos[col] >= 0) tii.emplace_back(int_pos[r], int_pos[col], it.value());
      else if (int_pos[r] >= 0) tit.emplace_back(int_pos[r], top_pos[col], it.value());
      else if (int_pos[col] < 0) K_TT(top_pos[r], top_pos[col]) += it.value();
    }
  }
  K_II_.resize(ni, ni);
  K_II_.setFromTriplets(tii.begin(), tii.end());
  K_IT_.resize(ni, m);
  K_IT_.setFromTriplets(tit.begin(), tit.end());
  interior_solver_.factorize(K_II_);

  S_ = K_TT;
  constexpr Eigen::Index kBlock = 64;
  for (Eigen::Index j0 = 0; j0 < m; j0 += kBlock) {
    const Eigen::Index nb = std::min(kBlock, m - j0);
    const Eigen::MatrixXd rhs = Eigen::MatrixXd(K_IT_.middleCols(j0, nb));
    const Eigen::MatrixXd X = interior_solver_.solve(rhs);
    S_.middleCols(j0, nb) -= K_IT_.transpose() * X;
  }
  S_ = 0.5 * (S_ + S_.transpose()).eval();
}

void CondensedSolver::set_step(StepWorkspace& w, double E, const Eigen::VectorXd& f) const {
  w.E = E;
  w.f = f;
  Eigen::VectorXd f_I(static_cast<Eigen::Index>(interior_.size()));
  for (std::size_t i = 0; i < interior_.size(); ++i) f_I[static_cast<Eigen::Index>(i)] = f[interior_[i]];
  const Eigen::VectorXd y = interior_solver_.solve(f_I);
  w.r_top.resize(static_cast<Eigen::Index>(top_.size()));
  for (std::size_t j = 0; j < top_.size(); ++j) w.r_top[static_cast<Eigen::Index>(j)] = f[top_[j]];
  w.r_top -= K_IT_.transpose() * y;
}

Eigen::VectorXd CondensedSolver::solve_top(StepWorkspace& w,
                                           const std::vector<TopSpring>& springs) const {
  Eigen::MatrixXd M = w.E * S_;
  Eigen::VectorXd r = w.r_top;
  add_springs(M, r, springs);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw SingularSystem("condensed contact system is not positive definite (no supporting contact)");
  }
  return llt.solve(r);
}

Eigen::VectorXd CondensedSolver::displacement(StepWorkspace& w, const Eigen::VectorXd& u_top) const {
  Eigen::VectorXd g(static_cast<Eigen::Index>(interior_.size()));
  for (std::size_t i = 0; i < interior_.size(); ++i) g[static_cast<Eigen::Index>(i)] = w.f[interior_[i]];
  g -= w.E * (K_IT_ * u_top);
  const Eigen::VectorXd u_I = interior_solver_.solve(g) / w.E;
  Eigen::VectorXd u(n_);
  for (std::size_t i = 0; i < interior_.size(); ++i) u[interior_[i]] = u_I[static_cast<Eigen::Index>(i)];
  for (std::size_t j = 0; j < top_.size(); ++j) u[top_[j]] = u_top[static_cast<Eigen::Index>(j)];
  w.u = u;
  return u;
}

FullSolver::FullSolver(const SparseMatrix& K_unit, std::vector<int> top_dofs) : K_unit_(K_unit) {
  top_ = std::move(top_dofs);
}

void FullSolver::set_step(StepWorkspace& w, double E, const Eigen::VectorXd& f) const {
  w.E = E;
  w.f = f;
  if (!w.full) w.full = std::make_shared<SparseSolver>();
}

Eigen::VectorXd FullSolver::solve_top(StepWorkspace& w, const std::vector<TopSpring>& springs) const {
  SparseMatrix K = w.E * K_unit_;
  Eigen::VectorXd rhs = w.f;
  for (const auto& s : springs) {
    const int a = top_[s.a], b = top_[s.b];
    K.coeffRef(a, a) += s.k * s.Na * s.Na;
    K.coeffRef(b, b) += s.k * s.Nb * s.Nb;
    if (a != b) {
      K.coeffRef(a, b) += s.k * s.Na * s.Nb;
      K.coeffRef(b, a) += s.k * s.Na * s.Nb;
    } else {
      K.coeffRef(a, a) += 2.0 * s.k * s.Na * s.Nb;
    }
    rhs[a] += s.k * s.zeta * s.Na;
    rhs[b] += s.k * s.zeta * s.Nb;
  }
  w.full->factorize(K);
  w.u = w.full->solve(rhs);
  Eigen::VectorXd ut(static_cast<Eigen::Index>(top_.size()));
  for (std::size_t j = 0; j < top_.size(); ++j) ut[static_cast<Eigen::Index>(j)] = w.u[top_[j]];
  return ut;
}

Eigen::VectorXd FullSolver::displacement(StepWorkspace& w, const Eigen::VectorXd&) const { return w.u; }

} // namespace hfric::fem
