#pragma once

#include <Eigen/Dense>

namespace hfric::numeric {

// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter = 0);

} // namespace hfric::numeric
