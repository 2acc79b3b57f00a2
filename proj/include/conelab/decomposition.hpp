#pragma once

#include "conelab/hs_core.hpp"

#include <vector>

namespace conelab {

/// One weighted simple tensor lambda * x (x) y with x, y in the natural cones
/// of the two factors. The product state it represents is x^2 (x) y^2.
struct DecompositionTerm {
  double lambda = 0.0;
  HSOperator x;
  HSOperator y;
};

/// A convex (or, before normalization, conic) combination of simple tensors.
///
/// Invariants, checked on construction: every lambda > 0, every x and y a
/// nonzero PSD matrix with consistent dimensions. A normalized decomposition
/// additionally has weights summing to 1 (within 1e-12) and unit HS-norm
/// factors, so each x^2 and y^2 is a density matrix.
class SeparableDecomposition {
public:
  SeparableDecomposition(std::vector<DecompositionTerm> terms, bool normalized);

  /// Folds the factor norms into the weights and rescales them to sum to 1.
  static SeparableDecomposition normalize(std::vector<DecompositionTerm> terms);

  const std::vector<DecompositionTerm>& terms() const { return terms_; }
  bool normalized() const { return normalized_; }
  Dims dims() const { return dims_; }
  std::size_t size() const { return terms_.size(); }

  /// Sum of lambda_i x_i (x) y_i as a vector of K1 (x) K2.
  HSOperator cone_vector() const;

  /// Sum of lambda_i x_i^2 (x) y_i^2, the operator on H1 (x) H2 whose
  /// expectations are those of the mixture of product states.
  HSOperator state_matrix() const;

private:
  std::vector<DecompositionTerm> terms_;
  bool normalized_;
  Dims dims_;
};

}  // namespace conelab
