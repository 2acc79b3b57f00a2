#pragma once

// Explicit constructions of the canonical objects: the block-positive but
// indefinite operator sigma, the PSD but entangled operator theta, the pure
// entangled vector eta, and classical-quantum states; plus the end-to-end run
// that checks every sign claim made about them.

#include "conelab/cones.hpp"
#include "conelab/hs_core.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace conelab {

/// |f><f|(x)|g><g| + |g><g|(x)|f><f| - |f><g|(x)|f><g| - |g><f|(x)|g><f| on
/// H0 (x) H0 with f = e1, g = e2, zero outside span{f, g}.
HSOperator build_sigma(int d0);

/// |f><f|(x)|f><f| + |g><f|(x)|g><f| + |f><g|(x)|f><g| + |g><g|(x)|g><g|,
/// i.e. |Omega><Omega| with Omega = f(x)f + g(x)g.
HSOperator build_theta(int d0);

/// (lambda1 x(x)y + lambda2 y(x)x) normalized, with x = e1, y = e2.
PureVector build_eta(Complex lambda1, Complex lambda2, int d1, int d2);

/// sum_i p_i |i><i| (x) block_i: the general state when the first factor is
/// classical (diagonal algebra).
DensityMatrix classical_quantum_state(std::span<const double> probs,
                                      std::span<const DensityMatrix> blocks);

struct ReplicationParams {
  int d0 = 2;
  double tol = 1e-9;
  int restarts = 64;
  int iters = 200;
  std::uint64_t seed = 0;
  int classical_cases = 200;
};

struct ReplicationReport {
  int d0 = 2;
  double sigma_min_eig = 0.0;
  double sigma_theta_pairing = 0.0;
  double sigma_theta_pairing_imag = 0.0;
  double seesaw_min = 0.0;
  double eta_ppt_min = 0.0;
  double theta_ppt_min = 0.0;
  double classical_suite_pass_rate = 0.0;
  int classical_cases = 0;
};

/// Thrown by run_replication when a sign claim fails; carries the report and
/// the offending claim.
class ReplicationFailure : public std::runtime_error {
public:
  ReplicationFailure(ReplicationReport report, std::string claim, double value);

  const ReplicationReport& report() const { return report_; }
  const std::string& claim() const { return claim_; }
  double value() const { return value_; }

private:
  ReplicationReport report_;
  std::string claim_;
  double value_;
};

/// Classical-quantum suite: `cases` seeded states split between dims (2,2)
/// and (2,3); returns the fraction in_sep_cone reports as members.
double classical_suite_pass_rate(int cases, std::uint64_t seed, const ConeParams& params = {});

/// Draws one classical-quantum state with `labels` classical outcomes and
/// blocks of dimension `block_dim`.
DensityMatrix random_classical_quantum(int labels, int block_dim, Rng& rng);

ReplicationReport run_replication(const ReplicationParams& params = {});

}  // namespace conelab
