#include "conelab/standard_form.hpp"

#include <cmath>

namespace conelab {

StandardForm make_standard_form(const DensityMatrix& rho, double floor) {
  const double lowest = min_eigenvalue(rho.matrix());
  if (lowest < floor) {
    throw NotFaithful("reference state not faithful: minimum eigenvalue " +
                      std::to_string(lowest) + " below floor " + std::to_string(floor));
  }
  return StandardForm(rho, floor, mat_power(rho.matrix(), Power::quarter),
                      mat_power(rho.matrix(), Power::half));
}

CompositeForm make_composite(const StandardForm& left, const StandardForm& right) {
  return CompositeForm{left, right, kron(left.rho_half(), right.rho_half())};
}

DensityMatrix gibbs_state(const HSOperator& hamiltonian, double beta) {
  if (!(beta >= 0.0)) throw InvalidInput("gibbs_state: beta must be nonnegative");
  const HermitianEig eig = hermitian_eig(hamiltonian);
  const double ground = eig.values(0);
  RVector weights(eig.values.size());
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    weights(i) = std::exp(-beta * (eig.values(i) - ground));
  }
  weights /= weights.sum();
  const HSOperator rho =
      eig.vectors * weights.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  // Rounding in the change of basis can leave a trace error near 1e-16.
  return DensityMatrix(rho / rho.trace().real());
}

HSOperator cone_map(const StandardForm& sf, const HSOperator& a) {
  if (a.rows() != sf.dim() || a.cols() != sf.dim()) {
    throw InvalidInput("cone_map: dimension mismatch");
  }
  if (!is_hermitian(a, kPsdInputTol * std::max(1.0, a.cwiseAbs().maxCoeff())) ||
      min_eigenvalue(a) < -kPsdInputTol) {
    throw InvalidInput("cone_map: argument is not PSD");
  }
  return sf.rho_quarter() * a * sf.rho_quarter();
}

HSOperator representative_vector(const DensityMatrix& d) {
  return mat_power(d.matrix(), Power::half);
}

HSOperator left_multiply(const HSOperator& a, const HSOperator& v) {
  if (a.cols() != v.rows()) throw InvalidInput("left_multiply: dimension mismatch");
  return a * v;
}

}  // namespace conelab
