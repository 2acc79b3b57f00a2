#pragma once

// Separable decompositions and their cone vectors: product-state
// expectations computed on H1 (x) H2 and as a trace over the doubled space K,
// the strict positivity of pairings with the simple tensors of a
// decomposition, the rescaled form of a separable cone vector, and an
// experiment on whether the representative vector of a separable state lies in
// the separable cone.

#include "conelab/cones.hpp"
#include "conelab/decomposition.hpp"
#include "conelab/hs_core.hpp"

#include <string>
#include <vector>

namespace conelab {

/// A density operator on K = HS(H1 (x) H2), stored as a (d1 d2)^2 square
/// matrix in the row-major flattening used by `flatten`.
class KDensity {
public:
  KDensity(HSOperator entries, Dims dims);

  Dims dims() const { return dims_; }
  int dim_k() const { return static_cast<int>(m_.rows()); }
  const HSOperator& matrix() const { return m_; }

private:
  HSOperator m_;
  Dims dims_;
};

/// sum lambda_i x_i^2 (x) y_i^2 for a normalized decomposition.
DensityMatrix state_from_decomposition(const SeparableDecomposition& dec);

/// sum lambda_i |x_i (x) y_i><x_i (x) y_i| on K. The simple tensors need not be
/// orthogonal, so the weights are generally not its eigenvalues.
KDensity k_density_from_decomposition(const SeparableDecomposition& dec);

/// sum lambda_i (x_i, A x_i)(y_i, B y_i).
double expectation_via_decomposition(const SeparableDecomposition& dec, const HSOperator& a,
                                     const HSOperator& b);

/// Matrix of mu -> c mu on K in the row-major flattening, i.e. c (x) I.
HSOperator left_multiplication_superoperator(const HSOperator& c);

/// Tr over K of rho0 times the left multiplication by A (x) B.
double expectation_via_k_density(const KDensity& rho0, const HSOperator& a, const HSOperator& b);

/// (v, x_i (x) y_i) for every term of `dec`, where v is the cone vector the
/// raw terms assemble to.
std::vector<double> strict_positivity_check(const SeparableDecomposition& dec, const HSOperator& v);

/// Raised when a pairing that must be strictly positive is not.
class ConsistencyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// v = sum lambda0_i x_i (x) y_i rewritten as
/// v = sum lambda_i (x_i (x) y_i, v) x_i (x) y_i with
/// lambda_i = lambda0_i / (x_i (x) y_i, v).
struct RescaledForm {
  SeparableDecomposition decomposition;  // weights lambda_i (not normalized)
  std::vector<double> pairings;          // (x_i (x) y_i, v)
  HSOperator vector;                     // v

  /// sum lambda_i * pairing_i * x_i (x) y_i.
  HSOperator resynthesize() const;
};

RescaledForm rescale_decomposition(std::vector<DecompositionTerm> raw_terms);

/// One record of the representative-vector membership experiment.
struct SqrtMembershipRecord {
  std::string input_hash;
  DensityMatrix input;
  HSOperator representative;
  ConeVerdict verdict;
};

/// Tests whether the PSD square root of a separable density lies in the
/// separable cone. The outcome is recorded, never asserted. Rejects inputs
/// that in_sep_cone does not certify as members.
SqrtMembershipRecord experiment_sqrt_membership(const DensityMatrix& d_separable, Dims dims,
                                                const ConeParams& params = {});

/// Stable hex digest of a matrix's bit pattern (FNV-1a over the doubles).
std::string matrix_hash(const HSOperator& m);

}  // namespace conelab
