#include "conelab/cones.hpp"
#include "conelab/nnls.hpp"
#include "conelab/parallel.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace conelab;

namespace {

HSOperator product_psd(int d1, int d2, Rng& rng) { return kron(random_psd(d1, rng), random_psd(d2, rng)); }

void check_certificate(const HSOperator& input, const ConeVerdict& v, Dims dims) {
  CHECK(std::abs(reevaluate_certificate(input, v.certificate, dims) - v.margin) <= 1e-8);
}

}  // namespace

TEST_CASE("nnls matches a known nonnegative solution") {
  Eigen::MatrixXd a(4, 3);
  a << 1, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1;
  Eigen::VectorXd x_true(3);
  x_true << 0.5, 0.0, 2.0;
  const Eigen::VectorXd x = nnls(a, a * x_true);
  CHECK((x - x_true).norm() < 1e-12);

  // Unconstrained optimum is negative in one coordinate; NNLS pins it to 0.
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd b(2);
  b << 1.0, -3.0;
  const Eigen::VectorXd y = nnls(id, b);
  CHECK(y(0) == doctest::Approx(1.0));
  CHECK(y(1) == 0.0);
}

TEST_CASE("in_natural_cone") {
  Rng rng(20);
  const DensityMatrix d = random_density(4, rng);
  const ConeVerdict dv = in_natural_cone(d.matrix());
  CHECK(dv.verdict == Verdict::member);
  CHECK(dv.margin >= 0.0);

  const ConeVerdict sv = in_natural_cone(oracle::sigma_2x2());
  CHECK(sv.verdict == Verdict::non_member);
  CHECK(std::abs(sv.margin + 1.0) < 1e-12);
  CHECK(certificate_kind(sv.certificate) == "eigen");
  check_certificate(oracle::sigma_2x2(), sv, {2, 2});
  const auto& eig = std::get<EigenCertificate>(sv.certificate);
  CHECK((oracle::sigma_2x2() * eig.vector - eig.value * eig.vector).norm() < 1e-8);

  const ConeVerdict tv = in_natural_cone(oracle::theta_2x2());
  CHECK(tv.verdict == Verdict::member);
  CHECK(std::abs(tv.margin) < 1e-10);

  HSOperator skew = identity(2);
  skew(0, 1) = 0.5;
  CHECK(in_natural_cone(skew).verdict == Verdict::non_member);
}

TEST_CASE("self-duality of the natural cone") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 + trial % 3;
    const HSOperator v = random_psd(dim, rng), w = random_psd(dim, rng);
    CHECK(hs_inner(v, w).real() >= -1e-12);
  }
  for (int trial = 0; trial < 50; ++trial) {
    const HSOperator h = random_hermitian(3, rng);
    const MinEigenpair low = min_eigenpair(h);
    if (low.value >= 0.0) continue;
    // The negative eigenprojector is a PSD element pairing negatively with h.
    const HSOperator w = low.vector * low.vector.adjoint();
    CHECK(hs_inner(h, w).real() < 0.0);
    CHECK(in_natural_cone(h).verdict == Verdict::non_member);
  }
}

TEST_CASE("ppt_min_eigenvalue") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(ppt_min_eigenvalue(product_psd(2, 3, rng), {2, 3}) >= -1e-12);
  }
  CHECK(std::abs(ppt_min_eigenvalue(oracle::max_entangled(), {2, 2}) + 0.5) < 1e-12);
  CHECK(std::abs(ppt_min_eigenvalue(oracle::werner(0.5), {2, 2}) + 0.125) < 1e-12);
  for (double p : {0.0, 0.2, 1.0 / 3.0, 0.6, 0.9}) {
    CHECK(std::abs(ppt_min_eigenvalue(oracle::werner(p), {2, 2}) - oracle::werner_ppt_min(p)) < 1e-12);
    // Independent route through the block-transpose oracle.
    CHECK(std::abs(min_eigenvalue(oracle::partial_transpose_2(oracle::werner(p), 2, 2)) -
                   oracle::werner_ppt_min(p)) < 1e-12);
  }
  CHECK_THROWS_AS(ppt_min_eigenvalue(oracle::sigma_2x2(), {2, 2}), InvalidInput);
  CHECK(ppt_decisive({2, 2}));
  CHECK(ppt_decisive({3, 2}));
  CHECK(ppt_decisive({1, 7}));
  CHECK_FALSE(ppt_decisive({3, 3}));
  CHECK_FALSE(ppt_decisive({2, 4}));
}

TEST_CASE("seesaw_min_product on known minima") {
  SUBCASE("identity") {
    const SeesawResult r = seesaw_min_product(identity(4), {2, 2});
    CHECK(std::abs(r.value - 1.0) < 1e-12);
  }
  SUBCASE("sigma attains zero") {
    const SeesawResult r = seesaw_min_product(oracle::sigma_2x2(), {2, 2});
    CHECK(std::abs(r.value) < 1e-10);
    REQUIRE(r.grid_value.has_value());
    CHECK(std::abs(*r.grid_value) < 1e-10);
    CHECK(r.monotone);
    // u = v = f attains it exactly.
    CHECK(product_expectation(oracle::sigma_2x2(), CVector::Unit(2, 0), CVector::Unit(2, 0)) == 0.0);
    // Brute force over a Bloch grid never goes below zero.
    CHECK(oracle::product_min_grid(oracle::sigma_2x2(), 16) >= -1e-12);
  }
  SUBCASE("swap has minimum zero at orthogonal u, v") {
    const HSOperator swap = partial_transpose(oracle::theta_2x2(), {2, 2}, 2);
    const SeesawResult r = seesaw_min_product(swap, {2, 2});
    CHECK(std::abs(r.value) < 1e-10);
    CHECK(std::abs(r.u.amplitudes().dot(r.v.amplitudes())) < 1e-5);
  }
}

TEST_CASE("seesaw returns a reproducible pair and never undercuts brute force") {
  Rng rng(23);
  SeesawParams params;
  params.restarts = 16;
  for (int trial = 0; trial < 20; ++trial) {
    const HSOperator h = random_hermitian(4, rng);
    params.seed = static_cast<std::uint64_t>(trial);
    const SeesawResult r = seesaw_min_product(h, {2, 2}, params);
    CHECK(std::abs(product_expectation(h, r.u.amplitudes(), r.v.amplitudes()) - r.value) <= 1e-10);
    CHECK(r.monotone);
    for (std::size_t i = 1; i < r.best_history.size(); ++i) {
      CHECK(r.best_history[i] <= r.best_history[i - 1] + 1e-12);
    }
    CHECK(std::abs(r.u.amplitudes().norm() - 1.0) < 1e-10);
    CHECK(std::abs(r.v.amplitudes().norm() - 1.0) < 1e-10);
    const double brute = oracle::product_min_grid(h, 12);
    // The true minimum lies below both; the see-saw should find it.
    CHECK(r.value <= brute + 1e-9);
  }
}

TEST_CASE("seesaw result does not depend on the worker count") {
  Rng rng(24);
  const HSOperator h = random_hermitian(6, rng);
  SeesawParams params;
  params.seed = 7;
  params.restarts = 12;
  ::setenv("CONELAB_THREADS", "0", 1);
  const SeesawResult seq = seesaw_min_product(h, {2, 3}, params);
  ::setenv("CONELAB_THREADS", "4", 1);
  CHECK(worker_count() == 4);
  const SeesawResult par = seesaw_min_product(h, {2, 3}, params);
  ::unsetenv("CONELAB_THREADS");
  CHECK(seq.value == par.value);
  CHECK(seq.u.amplitudes() == par.u.amplitudes());
  CHECK(seq.v.amplitudes() == par.v.amplitudes());
}

TEST_CASE("seesaw rejects non-Hermitian input") {
  HSOperator m = identity(4);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(seesaw_min_product(m, {2, 2}), InvalidInput);
  CHECK_THROWS_AS(seesaw_min_product(identity(4), {2, 3}), InvalidInput);
}

TEST_CASE("in_dual_sep_cone") {
  const ConeVerdict sv = in_dual_sep_cone(oracle::sigma_2x2(), {2, 2});
  CHECK(sv.verdict == Verdict::member);
  CHECK(std::abs(sv.margin) <= 1e-8);
  CHECK(certificate_kind(sv.certificate) == "product_pair");

  const ConeVerdict nv = in_dual_sep_cone(-identity(4), {2, 2});
  CHECK(nv.verdict == Verdict::non_member);
  CHECK(nv.margin == doctest::Approx(-1.0));
  check_certificate(-identity(4), nv, {2, 2});
  const auto& pair = std::get<ProductPairCertificate>(nv.certificate);
  CHECK(std::abs(pair.u.amplitudes().norm() - 1.0) < 1e-10);

  Rng rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    const HSOperator p = random_psd(6, rng);
    CHECK(in_dual_sep_cone(p, {2, 3}).verdict == Verdict::member);
    CHECK(in_dual_sep_cone(random_psd(16, rng), {4, 4}).verdict == Verdict::member);
  }

  // theta is PSD but its partial transpose (swap) is only block-positive.
  const HSOperator swap = partial_transpose(oracle::theta_2x2(), {2, 2}, 2);
  CHECK(in_dual_sep_cone(swap, {2, 2}).verdict == Verdict::member);
  // Max product overlap with P_Omega is 1/2, so the shift 1/2 is the boundary.
  const HSOperator witness = 0.5 * identity(4) - oracle::max_entangled() * 1.0;
  CHECK(in_dual_sep_cone(witness, {2, 2}).verdict == Verdict::member);
  const HSOperator too_much = 0.4 * identity(4) - oracle::max_entangled();
  const ConeVerdict tv = in_dual_sep_cone(too_much, {2, 2});
  CHECK(tv.verdict == Verdict::non_member);
  check_certificate(too_much, tv, {2, 2});
}

TEST_CASE("in_dual_sep_cone is inconclusive without grid corroboration") {
  // A block-positive, non-PSD operator on 4x4: swap. No grid above 3x3.
  HSOperator swap = HSOperator::Zero(16, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) swap(i * 4 + j, j * 4 + i) = 1.0;
  ConeParams params;
  params.seesaw.restarts = 8;
  const ConeVerdict v = in_dual_sep_cone(swap, {4, 4}, params);
  CHECK(v.verdict == Verdict::inconclusive);
  CHECK(v.margin >= -1e-9);
}

TEST_CASE("dual pairing of separable members with product elements") {
  Rng rng(26);
  for (Dims dims : {Dims{2, 2}, Dims{2, 3}}) {
    for (int trial = 0; trial < 500; ++trial) {
      HSOperator v = HSOperator::Zero(dims.total(), dims.total());
      for (int t = 0; t < 3; ++t) v += product_psd(dims.left, dims.right, rng);
      if (trial % 50 == 0) REQUIRE(in_sep_cone(v, dims).verdict == Verdict::member);
      const HSOperator x = random_psd(dims.left, rng), y = random_psd(dims.right, rng);
      CHECK(hs_inner(v, kron(x, y)).real() >= -1e-10);
    }
  }
}

TEST_CASE("in_sep_cone decision ladder") {
  Rng rng(27);
  SUBCASE("simple tensors are members") {
    for (int trial = 0; trial < 10; ++trial) {
      CHECK(in_sep_cone(product_psd(2, 2, rng), {2, 2}).verdict == Verdict::member);
      CHECK(in_sep_cone(product_psd(2, 3, rng), {2, 3}).verdict == Verdict::member);
    }
  }
  SUBCASE("theta is rejected with the unnormalized PPT margin") {
    const ConeVerdict v = in_sep_cone(oracle::theta_2x2(), {2, 2});
    CHECK(v.verdict == Verdict::non_member);
    CHECK(std::abs(v.margin + 1.0) < 1e-10);
    CHECK(certificate_kind(v.certificate) == "ppt");
    check_certificate(oracle::theta_2x2(), v, {2, 2});
  }
  SUBCASE("symmetric entangled projector") {
    CVector eta(4);
    eta << 0.0, 1.0, 1.0, 0.0;
    eta /= std::sqrt(2.0);
    const HSOperator p = eta * eta.adjoint();
    const ConeVerdict v = in_sep_cone(p, {2, 2});
    CHECK(v.verdict == Verdict::non_member);
    CHECK(std::abs(v.margin + 0.5) < 1e-10);
  }
  SUBCASE("Werner states") {
    CHECK(in_sep_cone(oracle::werner(0.25), {2, 2}).verdict == Verdict::member);
    const ConeVerdict v = in_sep_cone(oracle::werner(0.5), {2, 2});
    CHECK(v.verdict == Verdict::non_member);
    CHECK(std::abs(v.margin + 0.125) < 1e-10);
  }
  SUBCASE("non-decisive dims fall through to the decomposition search") {
    HSOperator m = HSOperator::Zero(9, 9);
    for (int t = 0; t < 3; ++t) m += product_psd(3, 3, rng);
    const ConeVerdict v = in_sep_cone(m, {3, 3});
    CHECK(v.verdict == Verdict::member);
    CHECK(certificate_kind(v.certificate) == "decomposition");
    check_certificate(m, v, {3, 3});
  }
  SUBCASE("prefer_decomposition attaches an explicit certificate in decisive dims") {
    ConeParams params;
    params.prefer_decomposition = true;
    const HSOperator prod = product_psd(2, 2, rng);
    const ConeVerdict v = in_sep_cone(prod, {2, 2}, params);
    CHECK(v.verdict == Verdict::member);
    CHECK(certificate_kind(v.certificate) == "decomposition");
    check_certificate(prod, v, {2, 2});
  }
  SUBCASE("input errors") {
    CHECK_THROWS_AS(in_sep_cone(oracle::sigma_2x2(), {2, 2}), InvalidInput);
    CHECK_THROWS_AS(in_sep_cone(identity(4), {2, 3}), InvalidInput);
  }
}

TEST_CASE("non_member certificates re-evaluate to their margins") {
  Rng rng(28);
  int seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix d = random_density(4, rng);
    const ConeVerdict v = in_sep_cone(d.matrix(), {2, 2});
    if (v.verdict != Verdict::non_member) continue;
    ++seen;
    check_certificate(d.matrix(), v, {2, 2});
    const auto& ppt = std::get<PptCertificate>(v.certificate);
    const HSOperator pt = partial_transpose(d.matrix(), {2, 2}, 2);
    CHECK((pt * ppt.vector - ppt.min_eigenvalue * ppt.vector).norm() < 1e-8);
  }
  CHECK(seen > 10);
}

TEST_CASE("decomposition_search") {
  Rng rng(29);
  SUBCASE("product density with rank(A) * rank(B) terms") {
    const HSOperator a = random_density(2, rng).matrix(), b = random_density(3, rng).matrix();
    DecompositionParams params;
    params.k = 6;
    const DecompositionOutcome out = decomposition_search(DensityMatrix(kron(a, b)), {2, 3}, params);
    REQUIRE(out.decomposition.has_value());
    CHECK(out.decomposition->size() <= 6);
    CHECK(out.residual <= 1e-8);
  }
  SUBCASE("pure product state with a single term") {
    const CVector u = random_pure(2, rng).amplitudes(), v = random_pure(2, rng).amplitudes();
    const CVector w = kron(u, v);
    DecompositionParams params;
    params.k = 1;
    const DecompositionOutcome out = decomposition_search(DensityMatrix(w * w.adjoint()), {2, 2}, params);
    REQUIRE(out.decomposition.has_value());
    CHECK(out.decomposition->size() == 1);
  }
  SUBCASE("maximally mixed state") {
    const DecompositionOutcome out = decomposition_search(DensityMatrix(identity(4) / 4.0), {2, 2});
    REQUIRE(out.decomposition.has_value());
    CHECK(out.residual <= 1e-8);
  }
  SUBCASE("Werner state at p = 1/4") {
    const DecompositionOutcome out = decomposition_search(DensityMatrix(oracle::werner(0.25)), {2, 2});
    REQUIRE(out.decomposition.has_value());
    CHECK(out.residual <= 1e-6);
    const SeparableDecomposition& dec = *out.decomposition;
    CHECK(dec.normalized());
    CHECK((dec.state_matrix() - oracle::werner(0.25)).norm() <= 1e-6);
  }
  SUBCASE("entangled input fails") {
    DecompositionParams params;
    params.iters = 200;
    const DecompositionOutcome out = decomposition_search(DensityMatrix(oracle::werner(0.6)), {2, 2}, params);
    CHECK_FALSE(out.decomposition.has_value());
    CHECK(out.residual > 1e-3);
  }
  SUBCASE("k < 1 is rejected") {
    DecompositionParams params;
    params.k = -1;
    CHECK_THROWS_AS(decomposition_search(DensityMatrix(identity(4) / 4.0), {2, 2}, params), InvalidInput);
  }
}
