#include "hfric/nnls.hpp"

#include <limits>
#include <vector>

namespace hfric::numeric {
namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
  const Eigen::Index n = A.cols();
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (passive[j]) cols.push_back(j);
  }
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  if (cols.empty()) return s;
  Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(cols[k]);
  const Eigen::VectorXd sp = Ap.colPivHouseholderQr().solve(b);
  for (std::size_t k = 0; k < cols.size(); ++k) s[cols[k]] = sp[static_cast<Eigen::Index>(k)];
  return s;
}

} // namespace

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter) {
  const Eigen::Index n = A.cols();
  if (max_iter <= 0) max_iter = 3 * static_cast<int>(n) + 10;
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     A.cwiseAbs().colwise().sum().maxCoeff() *
                     static_cast<double>(std::max(A.rows(), n));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd w = A.transpose() * (b - A * x);

  for (int outer = 0; outer < max_iter; ++outer) {
    Eigen::Index t = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > wmax) {
        wmax = w[j];
        t = j;
      }
    }
    if (t < 0) break;
    passive[t] = true;

    Eigen::VectorXd s = solve_passive(A, b, passive);
    for (int inner = 0; inner < max_iter; ++inner) {
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && s[j] <= 0.0) alpha = std::min(alpha, x[j] / (x[j] - s[j]));
      }
      if (alpha == std::numeric_limits<double>::infinity()) break;
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && x[j] <= tol) {
          passive[j] = false;
          x[j] = 0.0;
        }
      }
      s = solve_passive(A, b, passive);
    }
    x = s;
    w = A.transpose() * (b - A * x);
  }
  return x;
}

} // namespace hfric::numeric
