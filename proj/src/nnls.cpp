#include "conelab/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace conelab {

namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (passive[j]) idx.push_back(j);
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) sub.col(c) = a.col(idx[c]);
  const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(a.cols());
  for (std::size_t c = 0; c < idx.size(); ++c) s(idx[c]) = z(c);
  return s;
}

}  // namespace

Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_outer) {
  const Eigen::Index n = a.cols();
  if (max_outer <= 0) max_outer = static_cast<int>(3 * n + 10);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const double eps = 1e-13 * std::max(1.0, a.norm() * b.norm());

  Eigen::VectorXd w = a.transpose() * (b - a * x);
  for (int outer = 0; outer < max_outer; ++outer) {
    Eigen::Index best = -1;
    double best_w = eps;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[best] = true;

    Eigen::VectorXd s = solve_passive(a, b, passive);
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && s(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - s(j)));
      }
      if (!std::isfinite(alpha)) break;
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && x(j) <= 1e-15) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
      s = solve_passive(a, b, passive);
    }
    x = s;
    w = a.transpose() * (b - a * x);
  }
  return x.cwiseMax(0.0);
}

}  // namespace conelab
