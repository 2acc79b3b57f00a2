#pragma once

// Membership tests for the natural cone P, the separable sub-cone P1 (x) P2
// and its dual, each returning a verdict with a certificate that can be
// re-checked against the input independently of how it was found.

#include "conelab/decomposition.hpp"
#include "conelab/hs_core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace conelab {

enum class Verdict { member, non_member, inconclusive };

std::string to_string(Verdict v);

/// Minimal eigenpair of the input (natural cone) or of a Hermitian matrix.
struct EigenCertificate {
  double value;
  CVector vector;
};

/// Product vectors u (x) v and the value <u(x)v|A|u(x)v>.
struct ProductPairCertificate {
  double value;
  PureVector u;
  PureVector v;
};

/// Explicit separable decomposition of the trace-normalized input.
struct DecompositionCertificate {
  SeparableDecomposition decomposition;
  double residual;  // HS distance to the input, in the input's scale
};

/// Minimal eigenpair of the partial transpose (second factor).
struct PptCertificate {
  double min_eigenvalue;
  CVector vector;
};

using WitnessCertificate =
    std::variant<EigenCertificate, ProductPairCertificate, DecompositionCertificate, PptCertificate>;

std::string certificate_kind(const WitnessCertificate& c);

struct ConeVerdict {
  Verdict verdict;
  double margin;
  WitnessCertificate certificate;
};

/// Recomputes a certificate's margin from scratch against `input`:
/// eigen -> Re <w|A|w>, product_pair -> Re <u(x)v|A|u(x)v>,
/// ppt -> Re <w|A^{T_2}|w>, decomposition -> -||A - Tr(A) * state||_HS.
double reevaluate_certificate(const HSOperator& input, const WitnessCertificate& c, Dims dims);

struct SeesawParams {
  int restarts = 64;
  int max_iters = 200;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  /// Corroborate with a deterministic grid over the smaller factor when both
  /// factor dims are at most 3.
  bool grid_refinement = true;
  int grid_points = 24;
};

struct SeesawResult {
  double value;
  PureVector u;
  PureVector v;
  double seesaw_value;                 // best over random restarts alone
  std::optional<double> grid_value;    // set when the grid ran
  bool monotone;                       // every run was non-increasing
  std::vector<double> best_history;    // objective per iteration, best run
};

/// Upper bound on min over unit u, v of <u(x)v|sigma|u(x)v> by alternating
/// minimal-eigenvector steps. Restarts are independent and merged by
/// (value, restart index), so the result does not depend on thread count.
SeesawResult seesaw_min_product(const HSOperator& sigma, Dims dims, const SeesawParams& params = {});

/// <u(x)v|a|u(x)v>, real part.
double product_expectation(const HSOperator& a, const CVector& u, const CVector& v);

struct DecompositionParams {
  int k = 0;  // term budget; 0 selects (d1*d2)^2
  int iters = 2000;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

struct DecompositionOutcome {
  std::optional<SeparableDecomposition> decomposition;
  double residual;  // ||d - sum lambda_i P_{u_i} (x) P_{v_i}||_HS after renormalizing weights
  int iterations;
};

/// Searches for d = sum lambda_i P_{u_i} (x) P_{v_i} with at most k terms.
/// Weights are refit by nonnegative least squares after every change to the
/// atom set; atoms are added along the steepest product direction of the
/// residual and, once the budget is full, the lightest atom is re-optimized
/// against the residual with itself removed.
DecompositionOutcome decomposition_search(const DensityMatrix& d, Dims dims,
                                          const DecompositionParams& params = {});

struct ConeParams {
  double tol = 1e-9;
  SeesawParams seesaw;
  DecompositionParams decomposition;
  /// In PPT-decisive dims, also try to attach an explicit decomposition.
  bool prefer_decomposition = false;
};

/// Hermitian and min eigenvalue >= -tol. Margin is the min eigenvalue of the
/// Hermitian part; the certificate is its eigenpair.
ConeVerdict in_natural_cone(const HSOperator& v, double tol = 1e-9);

/// Min eigenvalue of the second-factor partial transpose of a PSD operator.
double ppt_min_eigenvalue(const HSOperator& d, Dims dims);

/// True where PPT is necessary and sufficient for separability.
bool ppt_decisive(Dims dims);

/// Membership of a Hermitian operator in the dual of P1 (x) P2 (block
/// positivity). Definite answers: PSD input (member), a product pair with
/// negative value (non_member), or a non-negative see-saw value corroborated
/// by the grid (member). Otherwise inconclusive.
ConeVerdict in_dual_sep_cone(const HSOperator& sigma, Dims dims, const ConeParams& params = {});

/// Membership of a PSD operator in P1 (x) P2: PPT test, exact in decisive
/// dims, then decomposition search.
ConeVerdict in_sep_cone(const HSOperator& v, Dims dims, const ConeParams& params = {});

}  // namespace conelab
