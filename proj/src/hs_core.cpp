#include "conelab/hs_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conelab {

namespace {

void require_square(const HSOperator& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw InvalidInput(std::string(what) + ": expected a nonempty square matrix");
  }
}

double entry_scale(const HSOperator& a) {
  return std::max(1.0, a.cwiseAbs().maxCoeff());
}

}  // namespace

double hermiticity_defect(const HSOperator& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const HSOperator& a, double tol) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

Complex hs_inner(const HSOperator& a, const HSOperator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("hs_inner: dimension mismatch");
  }
  return (a.conjugate().cwiseProduct(b)).sum();
}

double hs_norm(const HSOperator& a) { return a.norm(); }

CVector flatten(const HSOperator& a) {
  CVector v(a.size());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  return v;
}

HSOperator unflatten(const CVector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    throw InvalidInput("unflatten: size mismatch");
  }
  HSOperator a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = v(i * cols + j);
  return a;
}

HermitianEig hermitian_eig(const HSOperator& a) {
  require_square(a, "hermitian_eig");
  if (hermiticity_defect(a) > 1e-10 * entry_scale(a)) {
    throw InvalidInput("hermitian_eig: matrix is not Hermitian");
  }
  const HSOperator h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<HSOperator> solver(h);
  if (solver.info() != Eigen::Success) {
    throw InvalidInput("hermitian_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const HSOperator& a) { return hermitian_eig(a).values(0); }

MinEigenpair min_eigenpair(const HSOperator& a, double degeneracy_tol) {
  const HermitianEig eig = hermitian_eig(a);
  const double lowest = eig.values(0);
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  Eigen::Index k = 1;
  while (k < eig.values.size() && eig.values(k) - lowest <= degeneracy_tol * scale) ++k;
  const HSOperator basis = eig.vectors.leftCols(k);

  // Project the standard basis vectors onto the eigenspace; the first one with
  // a nonzero shadow gives the vector with the largest attainable first
  // nonzero amplitude.
  CVector chosen = basis.col(0);
  Eigen::Index lead = 0;
  for (Eigen::Index i = 0; i < basis.rows(); ++i) {
    const CVector shadow = basis * basis.row(i).adjoint();
    if (shadow.norm() > 1e-8) {
      chosen = shadow.normalized();
      lead = i;
      break;
    }
  }
  const Complex amp = chosen(lead);
  if (std::abs(amp) > 0.0) chosen *= std::conj(amp) / std::abs(amp);
  return {lowest, chosen};
}

HSOperator mat_power(const HSOperator& a, Power p) {
  const HermitianEig eig = hermitian_eig(a);
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  if (eig.values(0) < -1e-10 * scale) {
    throw InvalidInput("mat_power: matrix has a negative eigenvalue " +
                       std::to_string(eig.values(0)));
  }
  const double exponent = p == Power::quarter ? 0.25 : 0.5;
  // Eigenvalues at the eigensolver's rounding level are zeros; a fractional
  // power would inflate 1e-17 to 1e-9.
  const double zero_floor =
      4.0 * static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() * scale;
  RVector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) {
    mapped(i) = eig.values(i) <= zero_floor ? 0.0 : std::pow(eig.values(i), exponent);
  }
  return eig.vectors * mapped.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

HSOperator kron(const HSOperator& a, const HSOperator& b) {
  HSOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

HSOperator identity(int dim) {
  if (dim < 1) throw InvalidInput("identity: dim must be positive");
  return HSOperator::Identity(dim, dim);
}

PureVector::PureVector(CVector amplitudes, double tol) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw InvalidInput("PureVector: empty vector");
  if (std::abs(amps_.norm() - 1.0) > tol) {
    throw InvalidInput("PureVector: vector is not normalized");
  }
}

PureVector PureVector::normalized(const CVector& v) {
  const double n = v.norm();
  if (v.size() == 0 || !(n > 0.0)) throw InvalidInput("PureVector: zero vector");
  return PureVector(v / n);
}

DensityMatrix::DensityMatrix(const HSOperator& entries) {
  require_square(entries, "DensityMatrix");
  if (hermiticity_defect(entries) > kHermitianTol) {
    throw InvalidInput("DensityMatrix: not Hermitian");
  }
  m_ = 0.5 * (entries + entries.adjoint());
  if (std::abs(m_.trace() - Complex(1.0)) > kHermitianTol) {
    throw InvalidInput("DensityMatrix: trace differs from 1");
  }
  if (min_eigenvalue(m_) < -kHermitianTol) {
    throw InvalidInput("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const PureVector& psi) {
  return DensityMatrix(rank_one(psi, psi));
}

DensityMatrix DensityMatrix::normalized(const HSOperator& psd) {
  require_square(psd, "DensityMatrix::normalized");
  const HSOperator h = 0.5 * (psd + psd.adjoint());
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw InvalidInput("DensityMatrix::normalized: trace is not positive");
  return DensityMatrix(h / tr);
}

HSOperator rank_one(const PureVector& x, const PureVector& y) {
  return rank_one(x.amplitudes(), y.amplitudes());
}

HSOperator rank_one(const CVector& x, const CVector& y) {
  if (x.size() != y.size()) throw InvalidInput("rank_one: space mismatch");
  return x * y.adjoint();
}

HSOperator rank_one_k(const HSOperator& x, const HSOperator& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw InvalidInput("rank_one_k: space mismatch");
  }
  return flatten(x) * flatten(y).adjoint();
}

namespace {

void require_bipartite(const HSOperator& a, Dims dims, const char* what) {
  if (dims.left < 1 || dims.right < 1) throw InvalidInput(std::string(what) + ": bad dims");
  if (a.rows() != a.cols() || a.rows() != dims.total()) {
    throw InvalidInput(std::string(what) + ": matrix size does not match dims");
  }
}

}  // namespace

HSOperator partial_transpose(const HSOperator& a, Dims dims, int side) {
  require_bipartite(a, dims, "partial_transpose");
  if (side != 1 && side != 2) throw InvalidInput("partial_transpose: side must be 1 or 2");
  const int d1 = dims.left, d2 = dims.right;
  HSOperator out(a.rows(), a.cols());
  for (int i1 = 0; i1 < d1; ++i1)
    for (int i2 = 0; i2 < d2; ++i2)
      for (int j1 = 0; j1 < d1; ++j1)
        for (int j2 = 0; j2 < d2; ++j2) {
          const Complex v = a(i1 * d2 + i2, j1 * d2 + j2);
          if (side == 2)
            out(i1 * d2 + j2, j1 * d2 + i2) = v;
          else
            out(j1 * d2 + i2, i1 * d2 + j2) = v;
        }
  return out;
}

HSOperator partial_trace(const HSOperator& a, Dims dims, int keep) {
  require_bipartite(a, dims, "partial_trace");
  if (keep != 1 && keep != 2) throw InvalidInput("partial_trace: keep must be 1 or 2");
  const int d1 = dims.left, d2 = dims.right;
  if (keep == 1) {
    HSOperator out = HSOperator::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k) out(i, j) += a(i * d2 + k, j * d2 + k);
    return out;
  }
  HSOperator out = HSOperator::Zero(d2, d2);
  for (int i = 0; i < d2; ++i)
    for (int j = 0; j < d2; ++j)
      for (int k = 0; k < d1; ++k) out(i, j) += a(k * d2 + i, k * d2 + j);
  return out;
}

HSOperator ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  HSOperator g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

HSOperator random_psd(int dim, Rng& rng) {
  if (dim < 1) throw InvalidInput("random_psd: dim must be positive");
  const HSOperator g = ginibre(dim, dim, rng);
  const HSOperator p = g * g.adjoint();
  return 0.5 * (p + p.adjoint());
}

HSOperator random_psd(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_psd(dim, rng);
}

DensityMatrix random_density(int dim, Rng& rng) {
  if (dim < 1) throw InvalidInput("random_density: dim must be positive");
  return DensityMatrix::normalized(random_psd(dim, rng));
}

DensityMatrix random_density(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dim, rng);
}

PureVector random_pure(int dim, Rng& rng) {
  if (dim < 1) throw InvalidInput("random_pure: dim must be positive");
  return PureVector::normalized(ginibre(dim, 1, rng).col(0));
}

PureVector random_pure(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(dim, rng);
}

HSOperator random_hermitian(int dim, Rng& rng) {
  if (dim < 1) throw InvalidInput("random_hermitian: dim must be positive");
  const HSOperator g = ginibre(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

HSOperator random_unitary(int dim, Rng& rng) {
  if (dim < 1) throw InvalidInput("random_unitary: dim must be positive");
  Eigen::HouseholderQR<HSOperator> qr(ginibre(dim, dim, rng));
  HSOperator q = qr.householderQ();
  const HSOperator r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Haar measure needs the phases of diag(R) divided out.
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace conelab
