#include "conelab/standard_form.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace conelab;

namespace {

HSOperator diag2(double a, double b) {
  HSOperator m = HSOperator::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("make_standard_form") {
  const StandardForm mixed = make_standard_form(DensityMatrix(identity(2) / 2.0));
  CHECK(oracle::max_diff(mixed.rho_half(), identity(2) / std::sqrt(2.0)) < 1e-12);
  CHECK(oracle::max_diff(mixed.rho_quarter(), std::pow(2.0, -0.25) * identity(2)) < 1e-12);

  const StandardForm skewed = make_standard_form(DensityMatrix(diag2(0.9, 0.1)));
  CHECK(oracle::max_diff(skewed.rho_half(), diag2(std::sqrt(0.9), std::sqrt(0.1))) < 1e-12);
  CHECK(skewed.floor() == kDefaultFaithfulFloor);

  CHECK_THROWS_AS(make_standard_form(DensityMatrix(diag2(1.0, 0.0))), NotFaithful);
  CHECK_THROWS_AS(make_standard_form(DensityMatrix(diag2(1.0 - 1e-10, 1e-10))), NotFaithful);

  Rng rng(11);
  for (int dim : {2, 3, 4}) {
    const StandardForm sf = make_standard_form(random_density(dim, rng));
    const HSOperator& q = sf.rho_quarter();
    CHECK((q * q * q * q - sf.rho().matrix()).norm() < 1e-9);
    CHECK((sf.rho_half() * sf.rho_half() - sf.rho().matrix()).norm() < 1e-9);
    CHECK(min_eigenvalue(sf.rho_half()) >= 0.0);
  }
}

TEST_CASE("gibbs_state") {
  Rng rng(12);
  const HSOperator h = random_hermitian(3, rng);
  CHECK(oracle::max_diff(gibbs_state(h, 0.0).matrix(), identity(3) / 3.0) < 1e-12);

  for (double beta : {0.1, 1.0, 3.7}) {
    const double energy = 2.5;
    const double z = 1.0 + std::exp(-beta * energy);
    const DensityMatrix g = gibbs_state(diag2(0.0, energy), beta);
    CHECK(oracle::max_diff(g.matrix(), diag2(1.0 / z, std::exp(-beta * energy) / z)) < 1e-12);
  }

  CHECK_THROWS_AS(gibbs_state(h, -1.0), InvalidInput);
}

TEST_CASE("gibbs_state is faithful when beta times spread stays moderate") {
  Rng rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + trial % 3;
    const double beta = 50.0 * unit(rng);
    const HSOperator raw = random_hermitian(dim, rng);
    const HermitianEig e = hermitian_eig(raw);
    const double spread = e.values(dim - 1) - e.values(0);
    // Rescale so beta * spread <= 18 and spread <= 20.
    const double target = std::min(20.0, 18.0 / std::max(beta, 1e-12)) * unit(rng);
    const HSOperator h = raw * (target / spread);
    const DensityMatrix g = gibbs_state(h, beta);
    CHECK(min_eigenvalue(g.matrix()) >= kDefaultFaithfulFloor);
    CHECK_NOTHROW(make_standard_form(g));
  }

  // At beta = 50 with spread 20 the excited weight underflows: still a state,
  // no longer a faithful reference.
  const DensityMatrix cold = gibbs_state(diag2(0.0, 20.0), 50.0);
  CHECK(min_eigenvalue(cold.matrix()) >= 0.0);
  CHECK_THROWS_AS(make_standard_form(cold), NotFaithful);
}

TEST_CASE("cone_map") {
  Rng rng(14);
  const StandardForm sf = make_standard_form(random_density(3, rng));
  CHECK(oracle::max_diff(cone_map(sf, identity(3)), sf.rho_half()) < 1e-12);

  const StandardForm flat = make_standard_form(DensityMatrix(identity(3) / 3.0));
  const HSOperator a = random_psd(3, rng);
  CHECK(oracle::max_diff(cone_map(flat, a), a / std::sqrt(3.0)) < 1e-12);

  for (int trial = 0; trial < 20; ++trial) {
    CHECK(min_eigenvalue(cone_map(sf, random_psd(3, rng))) >= -1e-10);
  }

  CHECK_THROWS_AS(cone_map(sf, -identity(3)), InvalidInput);
  CHECK_THROWS_AS(cone_map(sf, identity(2)), InvalidInput);
}

TEST_CASE("cone_map reaches every PSD target through inverse quarter powers") {
  Rng rng(15);
  for (int dim : {2, 3, 4}) {
    const StandardForm sf = make_standard_form(random_density(dim, rng));
    const HSOperator inv_quarter =
        spectral_apply(sf.rho().matrix(), [](double x) { return std::pow(x, -0.25); });
    for (int trial = 0; trial < 10; ++trial) {
      const HSOperator w = random_psd(dim, rng);
      const HSOperator a = inv_quarter * w * inv_quarter;
      CHECK(min_eigenvalue(0.5 * (a + a.adjoint())) >= -1e-10 * a.norm());
      CHECK((cone_map(sf, 0.5 * (a + a.adjoint())) - w).norm() <= 1e-9 * std::max(1.0, w.norm()));
    }
  }
}

TEST_CASE("representative_vector") {
  Rng rng(16);
  const PureVector psi = random_pure(3, rng);
  const DensityMatrix pure = DensityMatrix::pure(psi);
  CHECK(oracle::max_diff(representative_vector(pure), pure.matrix()) < 1e-10);
  CHECK(oracle::max_diff(representative_vector(DensityMatrix(identity(4) / 4.0)), identity(4) / 2.0) < 1e-12);
}

TEST_CASE("representative_vector reproduces expectations by left multiplication") {
  Rng rng(17);
  for (int dim : {2, 3, 4}) {
    for (int trial = 0; trial < 100; ++trial) {
      const DensityMatrix d = random_density(dim, rng);
      const HSOperator a = random_hermitian(dim, rng);
      const HSOperator v = representative_vector(d);
      const Complex lhs = hs_inner(v, left_multiply(a, v));
      const Complex rhs = (a * d.matrix()).trace();
      CHECK(std::abs(lhs - rhs) <= 1e-10);
      CHECK((v * v - d.matrix()).norm() <= 1e-9);
    }
  }
}

TEST_CASE("left_multiply") {
  Rng rng(18);
  const HSOperator v = ginibre(3, 3, rng);
  CHECK(oracle::max_diff(left_multiply(identity(3), v), v) == 0.0);

  const HSOperator a = ginibre(2, 2, rng), b = ginibre(3, 3, rng);
  const HSOperator x = ginibre(2, 2, rng), y = ginibre(3, 3, rng);
  CHECK(oracle::max_diff(left_multiply(kron(a, b), kron(x, y)), kron(HSOperator(a * x), HSOperator(b * y))) < 1e-12);

  CHECK_THROWS_AS(left_multiply(identity(2), v), InvalidInput);
}

TEST_CASE("make_composite") {
  const StandardForm half = make_standard_form(DensityMatrix(identity(2) / 2.0));
  const CompositeForm both = make_composite(half, half);
  CHECK(oracle::max_diff(both.rho_half, identity(4) / 2.0) < 1e-12);

  Rng rng(19);
  const StandardForm s2 = make_standard_form(random_density(2, rng));
  const StandardForm s3 = make_standard_form(random_density(3, rng));
  const CompositeForm c = make_composite(s2, s3);
  CHECK(c.dim() == 6);
  CHECK(c.dims() == Dims{2, 3});

  for (int trial = 0; trial < 20; ++trial) {
    const StandardForm l = make_standard_form(random_density(2 + trial % 2, rng));
    const StandardForm r = make_standard_form(random_density(2 + trial % 3, rng));
    const CompositeForm comp = make_composite(l, r);
    const StandardForm direct = make_standard_form(DensityMatrix(kron(l.rho().matrix(), r.rho().matrix())));
    CHECK(oracle::max_diff(comp.rho_half, direct.rho_half()) < 1e-10);
  }
}
