#include "conelab/replication.hpp"

#include <cmath>
#include <vector>

namespace conelab {

namespace {

HSOperator dyad(int d0, int row, int col) {
  HSOperator m = HSOperator::Zero(d0, d0);
  m(row, col) = 1.0;
  return m;
}

void require_d0(int d0, const char* what) {
  if (d0 < 2) throw InvalidInput(std::string(what) + ": d0 must be at least 2");
}

constexpr int kF = 0;
constexpr int kG = 1;

}  // namespace

HSOperator build_sigma(int d0) {
  require_d0(d0, "build_sigma");
  return kron(dyad(d0, kF, kF), dyad(d0, kG, kG)) + kron(dyad(d0, kG, kG), dyad(d0, kF, kF)) -
         kron(dyad(d0, kF, kG), dyad(d0, kF, kG)) - kron(dyad(d0, kG, kF), dyad(d0, kG, kF));
}

HSOperator build_theta(int d0) {
  require_d0(d0, "build_theta");
  return kron(dyad(d0, kF, kF), dyad(d0, kF, kF)) + kron(dyad(d0, kG, kF), dyad(d0, kG, kF)) +
         kron(dyad(d0, kF, kG), dyad(d0, kF, kG)) + kron(dyad(d0, kG, kG), dyad(d0, kG, kG));
}

PureVector build_eta(Complex lambda1, Complex lambda2, int d1, int d2) {
  if (d1 < 2 || d2 < 2) throw InvalidInput("build_eta: both factors need dimension >= 2");
  if (lambda1 == 0.0 && lambda2 == 0.0) throw InvalidInput("build_eta: both coefficients are zero");
  const CVector x1 = CVector::Unit(d1, kF), y1 = CVector::Unit(d1, kG);
  const CVector x2 = CVector::Unit(d2, kF), y2 = CVector::Unit(d2, kG);
  return PureVector::normalized(lambda1 * kron(x1, y2) + lambda2 * kron(y1, x2));
}

DensityMatrix classical_quantum_state(std::span<const double> probs,
                                      std::span<const DensityMatrix> blocks) {
  if (probs.empty() || probs.size() != blocks.size()) {
    throw InvalidInput("classical_quantum_state: need one block per classical label");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw InvalidInput("classical_quantum_state: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidInput("classical_quantum_state: probabilities do not sum to 1");
  }
  const int labels = static_cast<int>(probs.size());
  const int block_dim = blocks.front().dim();
  HSOperator state = HSOperator::Zero(labels * block_dim, labels * block_dim);
  for (int i = 0; i < labels; ++i) {
    if (blocks[i].dim() != block_dim) throw InvalidInput("classical_quantum_state: block size mismatch");
    state.block(i * block_dim, i * block_dim, block_dim, block_dim) = probs[i] * blocks[i].matrix();
  }
  return DensityMatrix(state / state.trace().real());
}

DensityMatrix random_classical_quantum(int labels, int block_dim, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> probs(static_cast<std::size_t>(labels));
  double total = 0.0;
  for (double& p : probs) total += (p = expo(rng));
  for (double& p : probs) p /= total;
  std::vector<DensityMatrix> blocks;
  blocks.reserve(probs.size());
  for (int i = 0; i < labels; ++i) blocks.push_back(random_density(block_dim, rng));
  // Renormalize the simplex exactly; division can leave ~1e-16 of slack.
  total = 0.0;
  for (double p : probs) total += p;
  probs.back() += 1.0 - total;
  return classical_quantum_state(probs, blocks);
}

double classical_suite_pass_rate(int cases, std::uint64_t seed, const ConeParams& params) {
  if (cases < 1) throw InvalidInput("classical_suite_pass_rate: cases must be positive");
  Rng rng(seed);
  int passed = 0;
  for (int c = 0; c < cases; ++c) {
    const Dims dims = c % 2 == 0 ? Dims{2, 2} : Dims{2, 3};
    const DensityMatrix state = random_classical_quantum(dims.left, dims.right, rng);
    if (in_sep_cone(state.matrix(), dims, params).verdict == Verdict::member) ++passed;
  }
  return static_cast<double>(passed) / cases;
}

ReplicationFailure::ReplicationFailure(ReplicationReport report, std::string claim, double value)
    : std::runtime_error("replication claim violated: " + claim + " (value " +
                         std::to_string(value) + ")"),
      report_(report), claim_(std::move(claim)), value_(value) {}

ReplicationReport run_replication(const ReplicationParams& params) {
  ConeParams cone;
  cone.tol = params.tol;
  cone.seesaw.restarts = params.restarts;
  cone.seesaw.max_iters = params.iters;
  cone.seesaw.seed = params.seed;

  const int d0 = params.d0;
  const Dims dims{d0, d0};
  const HSOperator sigma = build_sigma(d0);
  const HSOperator theta = build_theta(d0);
  const PureVector eta = build_eta(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), d0, d0);
  const HSOperator eta_projector = rank_one(eta, eta);

  ReplicationReport report;
  report.d0 = d0;
  const ConeVerdict sigma_in_p = in_natural_cone(sigma, params.tol);
  report.sigma_min_eig = sigma_in_p.margin;
  const Complex pairing = hs_inner(sigma, theta);
  report.sigma_theta_pairing = pairing.real();
  report.sigma_theta_pairing_imag = pairing.imag();
  const ConeVerdict sigma_dual = in_dual_sep_cone(sigma, dims, cone);
  report.seesaw_min = sigma_dual.margin;
  const ConeVerdict eta_sep = in_sep_cone(eta_projector, dims, cone);
  report.eta_ppt_min = ppt_min_eigenvalue(eta_projector, dims);
  const ConeVerdict theta_sep = in_sep_cone(theta, dims, cone);
  report.theta_ppt_min = ppt_min_eigenvalue(theta, dims);
  const ConeVerdict theta_in_p = in_natural_cone(theta, params.tol);
  report.classical_cases = params.classical_cases;
  report.classical_suite_pass_rate =
      classical_suite_pass_rate(params.classical_cases, mix_seed(params.seed, 0xC1A55), cone);

  if (std::abs(report.sigma_theta_pairing_imag) > 1e-12)
    throw ReplicationFailure(report, "pairing is real", report.sigma_theta_pairing_imag);
  if (!(report.sigma_theta_pairing < 0.0))
    throw ReplicationFailure(report, "(sigma, theta) < 0", report.sigma_theta_pairing);
  if (!(report.seesaw_min >= -params.tol) || sigma_dual.verdict == Verdict::non_member)
    throw ReplicationFailure(report, "sigma pairs nonnegatively with P1 (x) P2", report.seesaw_min);
  if (sigma_in_p.verdict != Verdict::non_member)
    throw ReplicationFailure(report, "sigma not in P", report.sigma_min_eig);
  if (theta_in_p.verdict != Verdict::member)
    throw ReplicationFailure(report, "theta in P", theta_in_p.margin);
  if (theta_sep.verdict != Verdict::non_member)
    throw ReplicationFailure(report, "theta not in P1 (x) P2", report.theta_ppt_min);
  if (eta_sep.verdict != Verdict::non_member)
    throw ReplicationFailure(report, "P_eta not in P1 (x) P2", report.eta_ppt_min);
  if (report.classical_suite_pass_rate != 1.0)
    throw ReplicationFailure(report, "classical-quantum states are separable",
                             report.classical_suite_pass_rate);
  return report;
}

}  // namespace conelab
