#pragma once

// Dense complex linear algebra on finite-dimensional Hilbert spaces and on the
// Hilbert-Schmidt space of operators built over them.
//
// An operator on H is stored as a dense Eigen matrix. The same matrix doubles
// as a vector of the Hilbert-Schmidt space K = HS(H), with inner product
// (a, b) = Tr a* b. Tensor products K1 (x) K2 are realized as HS(H1 (x) H2)
// through the Kronecker product, so a single representation covers both levels.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace conelab {

using Complex = std::complex<double>;
using HSOperator = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Raised whenever an operation receives input outside its contract.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Factor dimensions of a bipartite space H1 (x) H2.
struct Dims {
  int left = 1;
  int right = 1;

  int total() const { return left * right; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

// Tolerances shared across the library.
inline constexpr double kHermitianTol = 1e-12;    // density matrix invariants
inline constexpr double kPsdInputTol = 1e-10;     // PSD/Hermitian preconditions
inline constexpr double kUnitNormTol = 1e-12;

/// Largest entry of |a - a^dagger|. Zero for Hermitian input.
double hermiticity_defect(const HSOperator& a);

/// True if `a` is square and Hermitian within `tol` (absolute).
bool is_hermitian(const HSOperator& a, double tol);

/// Hilbert-Schmidt inner product Tr(a^dagger b), antilinear in the first slot.
Complex hs_inner(const HSOperator& a, const HSOperator& b);

/// sqrt(Tr a^dagger a).
double hs_norm(const HSOperator& a);

/// Row-major flattening of an operator into a vector of K, so that
/// hs_inner(a, b) == flatten(a).dot(flatten(b)).
CVector flatten(const HSOperator& a);

/// Inverse of `flatten` for an n x m operator.
HSOperator unflatten(const CVector& v, int rows, int cols);

struct HermitianEig {
  RVector values;   // ascending
  HSOperator vectors;  // orthonormal columns
};

/// Spectral decomposition of a Hermitian matrix. Rejects input that is not
/// Hermitian within 1e-10 (scaled by the magnitude of the entries).
HermitianEig hermitian_eig(const HSOperator& a);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const HSOperator& a);

/// Unit eigenvector for the smallest eigenvalue with a deterministic choice
/// inside a degenerate eigenspace: the subspace vector with the largest
/// possible modulus in the first coordinate it can reach, phase-fixed so that
/// amplitude is real positive.
struct MinEigenpair {
  double value;
  CVector vector;
};
MinEigenpair min_eigenpair(const HSOperator& a, double degeneracy_tol = 1e-10);

enum class Power { quarter, half };

/// a^(1/4) or a^(1/2) of a PSD matrix. Eigenvalues in [-1e-10, 0) (relative to
/// the spectral scale) are clamped to zero; anything more negative is rejected.
HSOperator mat_power(const HSOperator& a, Power p);

/// Applies a real function to the spectrum of a Hermitian matrix.
template <typename F>
HSOperator spectral_apply(const HSOperator& a, F&& f) {
  const HermitianEig eig = hermitian_eig(a);
  RVector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) mapped(i) = f(eig.values(i));
  return eig.vectors * mapped.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

/// Kronecker product a (x) b.
HSOperator kron(const HSOperator& a, const HSOperator& b);
CVector kron(const CVector& a, const CVector& b);

HSOperator identity(int dim);

/// A unit vector of C^dim.
class PureVector {
public:
  /// Rejects vectors whose Euclidean norm differs from 1 by more than `tol`.
  explicit PureVector(CVector amplitudes, double tol = kUnitNormTol);

  /// Normalizes a nonzero vector.
  static PureVector normalized(const CVector& v);

  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }

private:
  CVector amps_;
};

/// A Hermitian, PSD, unit-trace matrix.
class DensityMatrix {
public:
  /// Validates the invariants (Hermitian and trace within 1e-12, eigenvalues
  /// >= -1e-12) and stores the Hermitian part.
  explicit DensityMatrix(const HSOperator& entries);

  /// Pure state |psi><psi|.
  static DensityMatrix pure(const PureVector& psi);

  /// PSD input divided by its trace.
  static DensityMatrix normalized(const HSOperator& psd);

  int dim() const { return static_cast<int>(m_.rows()); }
  const HSOperator& matrix() const { return m_; }

private:
  HSOperator m_;
};

/// |x><y| on H. With x == y this is the projector onto x.
HSOperator rank_one(const PureVector& x, const PureVector& y);
HSOperator rank_one(const CVector& x, const CVector& y);

/// |x><y| on K, the operator mu -> (y, mu)_K x, as a matrix acting on
/// flattened operators.
HSOperator rank_one_k(const HSOperator& x, const HSOperator& y);

/// Transposes the chosen tensor factor (side 1 or 2) of an operator on
/// H1 (x) H2 with the given dims.
HSOperator partial_transpose(const HSOperator& a, Dims dims, int side);

/// Traces out one factor, keeping side `keep` (1 or 2).
HSOperator partial_trace(const HSOperator& a, Dims dims, int keep);

/// Random sampling. Every function has a seed overload (fresh generator) and
/// an engine overload (for drawing many objects from one stream).
using Rng = std::mt19937_64;

HSOperator ginibre(int rows, int cols, Rng& rng);
HSOperator random_psd(int dim, Rng& rng);
HSOperator random_psd(int dim, std::uint64_t seed);
DensityMatrix random_density(int dim, Rng& rng);
DensityMatrix random_density(int dim, std::uint64_t seed);
PureVector random_pure(int dim, Rng& rng);
PureVector random_pure(int dim, std::uint64_t seed);
HSOperator random_hermitian(int dim, Rng& rng);
HSOperator random_unitary(int dim, Rng& rng);

/// SplitMix64 step; used to derive independent sub-seeds from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace conelab
