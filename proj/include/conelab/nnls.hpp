#pragma once

#include <Eigen/Dense>

namespace conelab {

/// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_outer = 0);

}  // namespace conelab
