#include "conelab/correspondence.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <sstream>

namespace conelab {

KDensity::KDensity(HSOperator entries, Dims dims) : m_(std::move(entries)), dims_(dims) {
  const Eigen::Index n = static_cast<Eigen::Index>(dims.total()) * dims.total();
  if (m_.rows() != n || m_.cols() != n) throw InvalidInput("KDensity: size must be (d1 d2)^2");
  if (hermiticity_defect(m_) > kHermitianTol) throw InvalidInput("KDensity: not Hermitian");
  m_ = 0.5 * (m_ + m_.adjoint());
  if (std::abs(m_.trace() - Complex(1.0)) > kHermitianTol) {
    throw InvalidInput("KDensity: trace differs from 1");
  }
  if (min_eigenvalue(m_) < -kHermitianTol) throw InvalidInput("KDensity: not PSD");
}

namespace {

void require_normalized(const SeparableDecomposition& dec, const char* what) {
  if (!dec.normalized()) throw InvalidInput(std::string(what) + ": decomposition is not normalized");
}

void require_observables(const SeparableDecomposition& dec, const HSOperator& a,
                         const HSOperator& b) {
  const Dims dims = dec.dims();
  if (a.rows() != dims.left || a.cols() != dims.left || b.rows() != dims.right ||
      b.cols() != dims.right) {
    throw InvalidInput("observable dimensions do not match the decomposition");
  }
}

}  // namespace

DensityMatrix state_from_decomposition(const SeparableDecomposition& dec) {
  require_normalized(dec, "state_from_decomposition");
  return DensityMatrix(dec.state_matrix());
}

KDensity k_density_from_decomposition(const SeparableDecomposition& dec) {
  require_normalized(dec, "k_density_from_decomposition");
  const Eigen::Index n = static_cast<Eigen::Index>(dec.dims().total()) * dec.dims().total();
  HSOperator rho0 = HSOperator::Zero(n, n);
  for (const DecompositionTerm& t : dec.terms()) {
    const CVector w = flatten(kron(t.x, t.y));
    if (std::abs(w.norm() - 1.0) > 1e-10) {
      throw InvalidInput("k_density_from_decomposition: simple tensor is not a unit vector");
    }
    rho0 += t.lambda * (w * w.adjoint());
  }
  return KDensity(std::move(rho0), dec.dims());
}

double expectation_via_decomposition(const SeparableDecomposition& dec, const HSOperator& a,
                                     const HSOperator& b) {
  require_observables(dec, a, b);
  Complex total = 0.0;
  for (const DecompositionTerm& t : dec.terms()) {
    total += t.lambda * hs_inner(t.x, a * t.x) * hs_inner(t.y, b * t.y);
  }
  return total.real();
}

HSOperator left_multiplication_superoperator(const HSOperator& c) {
  return kron(c, identity(static_cast<int>(c.cols())));
}

double expectation_via_k_density(const KDensity& rho0, const HSOperator& a, const HSOperator& b) {
  const Dims dims = rho0.dims();
  if (a.rows() != dims.left || a.cols() != dims.left || b.rows() != dims.right ||
      b.cols() != dims.right) {
    throw InvalidInput("expectation_via_k_density: observable dimensions do not match");
  }
  const HSOperator lift = left_multiplication_superoperator(kron(a, b));
  return (rho0.matrix() * lift).trace().real();
}

std::vector<double> strict_positivity_check(const SeparableDecomposition& dec, const HSOperator& v) {
  if (v.rows() != dec.dims().total() || v.cols() != dec.dims().total()) {
    throw InvalidInput("strict_positivity_check: vector dimension does not match");
  }
  std::vector<double> pairings;
  pairings.reserve(dec.size());
  for (const DecompositionTerm& t : dec.terms()) pairings.push_back(hs_inner(v, kron(t.x, t.y)).real());
  return pairings;
}

HSOperator RescaledForm::resynthesize() const {
  const Dims dims = decomposition.dims();
  HSOperator out = HSOperator::Zero(dims.total(), dims.total());
  const auto& terms = decomposition.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    out += (terms[i].lambda * pairings[i]) * kron(terms[i].x, terms[i].y);
  }
  return out;
}

RescaledForm rescale_decomposition(std::vector<DecompositionTerm> raw_terms) {
  SeparableDecomposition raw(std::move(raw_terms), false);
  const HSOperator v = raw.cone_vector();
  std::vector<double> pairings = strict_positivity_check(raw, v);
  std::vector<DecompositionTerm> rescaled = raw.terms();
  for (std::size_t i = 0; i < rescaled.size(); ++i) {
    if (!(pairings[i] > 0.0)) {
      throw ConsistencyError("rescale_decomposition: pairing " + std::to_string(i) +
                             " is not strictly positive");
    }
    rescaled[i].lambda /= pairings[i];
  }
  return RescaledForm{SeparableDecomposition(std::move(rescaled), false), std::move(pairings), v};
}

std::string matrix_hash(const HSOperator& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  feed(static_cast<double>(m.rows()));
  feed(static_cast<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      feed(m(i, j).real());
      feed(m(i, j).imag());
    }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

SqrtMembershipRecord experiment_sqrt_membership(const DensityMatrix& d_separable, Dims dims,
                                                const ConeParams& params) {
  const ConeVerdict certified = in_sep_cone(d_separable.matrix(), dims, params);
  if (certified.verdict != Verdict::member) {
    throw InvalidInput("experiment_sqrt_membership: input is not certified separable");
  }
  HSOperator root = mat_power(d_separable.matrix(), Power::half);
  ConeVerdict verdict = in_sep_cone(root, dims, params);
  return {matrix_hash(d_separable.matrix()), d_separable, std::move(root), std::move(verdict)};
}

}  // namespace conelab
