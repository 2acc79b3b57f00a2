#include "conelab/decomposition.hpp"

#include <cmath>
#include <string>

namespace conelab {

namespace {

void check_cone_element(const HSOperator& m, const char* which, std::size_t i) {
  const std::string where = std::string("decomposition term ") + std::to_string(i) + ": " + which;
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidInput(where + " is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermiticity_defect(m) > kPsdInputTol * scale) throw InvalidInput(where + " is not Hermitian");
  if (!(m.norm() > 0.0)) throw InvalidInput(where + " is zero");
  if (min_eigenvalue(m) < -kPsdInputTol * scale) throw InvalidInput(where + " is not PSD");
}

}  // namespace

SeparableDecomposition::SeparableDecomposition(std::vector<DecompositionTerm> terms,
                                               bool normalized)
    : terms_(std::move(terms)), normalized_(normalized) {
  if (terms_.empty()) throw InvalidInput("decomposition has no terms");
  dims_ = {static_cast<int>(terms_.front().x.rows()), static_cast<int>(terms_.front().y.rows())};
  double total = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const DecompositionTerm& t = terms_[i];
    if (!(t.lambda > 0.0) || !std::isfinite(t.lambda)) {
      throw InvalidInput("decomposition term " + std::to_string(i) + ": weight must be positive");
    }
    check_cone_element(t.x, "x", i);
    check_cone_element(t.y, "y", i);
    if (t.x.rows() != dims_.left || t.y.rows() != dims_.right) {
      throw InvalidInput("decomposition term " + std::to_string(i) + ": inconsistent dimensions");
    }
    if (normalized_ && (std::abs(t.x.norm() - 1.0) > 1e-10 || std::abs(t.y.norm() - 1.0) > 1e-10)) {
      throw InvalidInput("decomposition term " + std::to_string(i) + ": factor is not unit norm");
    }
    total += t.lambda;
  }
  if (normalized_ && std::abs(total - 1.0) > 1e-12) {
    throw InvalidInput("normalized decomposition weights do not sum to 1");
  }
}

SeparableDecomposition SeparableDecomposition::normalize(std::vector<DecompositionTerm> terms) {
  double total = 0.0;
  for (DecompositionTerm& t : terms) {
    const double nx = t.x.norm();
    const double ny = t.y.norm();
    if (!(nx > 0.0) || !(ny > 0.0)) throw InvalidInput("decomposition factor is zero");
    t.x /= nx;
    t.y /= ny;
    t.lambda *= nx * nx * ny * ny;
    total += t.lambda;
  }
  if (!(total > 0.0)) throw InvalidInput("decomposition weights must be positive");
  for (DecompositionTerm& t : terms) t.lambda /= total;
  return SeparableDecomposition(std::move(terms), true);
}

HSOperator SeparableDecomposition::cone_vector() const {
  HSOperator v = HSOperator::Zero(dims_.total(), dims_.total());
  for (const DecompositionTerm& t : terms_) v += t.lambda * kron(t.x, t.y);
  return v;
}

HSOperator SeparableDecomposition::state_matrix() const {
  HSOperator s = HSOperator::Zero(dims_.total(), dims_.total());
  for (const DecompositionTerm& t : terms_) s += t.lambda * kron(HSOperator(t.x * t.x), HSOperator(t.y * t.y));
  return 0.5 * (s + s.adjoint());
}

}  // namespace conelab
