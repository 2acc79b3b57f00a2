#pragma once

// Standard form (K, M, P, rho^{1/2}) of the full matrix algebra B(H) with a
// faithful reference state, and of the composite of two such algebras.
//
// K is HS(H); M acts by left multiplication (see left_multiply); P is the
// natural cone, which for a faithful reference state in finite dimensions is
// the PSD cone viewed inside K; rho^{1/2} is the distinguished cone vector.

#include "conelab/hs_core.hpp"

namespace conelab {

inline constexpr double kDefaultFaithfulFloor = 1e-9;

/// Raised when a reference state is not invertible (its smallest eigenvalue
/// falls below the configured floor).
class NotFaithful : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

class StandardForm {
public:
  int dim() const { return rho_.dim(); }
  double floor() const { return floor_; }
  const DensityMatrix& rho() const { return rho_; }
  const HSOperator& rho_quarter() const { return rho_quarter_; }
  const HSOperator& rho_half() const { return rho_half_; }

private:
  friend StandardForm make_standard_form(const DensityMatrix& rho, double floor);
  StandardForm(DensityMatrix rho, double floor, HSOperator quarter, HSOperator half)
      : rho_(std::move(rho)), floor_(floor), rho_quarter_(std::move(quarter)),
        rho_half_(std::move(half)) {}

  DensityMatrix rho_;
  double floor_;
  HSOperator rho_quarter_;
  HSOperator rho_half_;
};

/// Builds the quadruple for reference state `rho`. Throws NotFaithful if the
/// minimum eigenvalue of rho is below `floor`.
StandardForm make_standard_form(const DensityMatrix& rho, double floor = kDefaultFaithfulFloor);

struct CompositeForm {
  StandardForm left;
  StandardForm right;
  HSOperator rho_half;  // left.rho_half (x) right.rho_half

  int dim() const { return left.dim() * right.dim(); }
  Dims dims() const { return {left.dim(), right.dim()}; }
};

CompositeForm make_composite(const StandardForm& left, const StandardForm& right);

/// exp(-beta H) / Tr exp(-beta H), computed spectrally with the ground energy
/// shifted out so large beta does not underflow.
DensityMatrix gibbs_state(const HSOperator& hamiltonian, double beta);

/// rho^{1/4} a rho^{1/4} for PSD `a`: the generator of the natural cone.
HSOperator cone_map(const StandardForm& sf, const HSOperator& a);

/// The unique natural-cone vector v with Tr(A d) = (v, A v) for all A, namely
/// the PSD square root of d. Faithfulness of d is not required.
HSOperator representative_vector(const DensityMatrix& d);

/// Action of an observable a, as an element of M, on a vector v of K.
HSOperator left_multiply(const HSOperator& a, const HSOperator& v);

}  // namespace conelab
