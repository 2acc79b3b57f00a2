#include "conelab/cones.hpp"

#include "conelab/nnls.hpp"
#include "conelab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conelab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::member: return "member";
    case Verdict::non_member: return "non_member";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string certificate_kind(const WitnessCertificate& c) {
  struct Kind {
    std::string operator()(const EigenCertificate&) const { return "eigen"; }
    std::string operator()(const ProductPairCertificate&) const { return "product_pair"; }
    std::string operator()(const DecompositionCertificate&) const { return "decomposition"; }
    std::string operator()(const PptCertificate&) const { return "ppt"; }
  };
  return std::visit(Kind{}, c);
}

double product_expectation(const HSOperator& a, const CVector& u, const CVector& v) {
  const CVector w = kron(u, v);
  if (a.rows() != w.size() || a.cols() != w.size()) {
    throw InvalidInput("product_expectation: dimension mismatch");
  }
  return w.dot(a * w).real();
}

double reevaluate_certificate(const HSOperator& input, const WitnessCertificate& c, Dims dims) {
  if (const auto* e = std::get_if<EigenCertificate>(&c)) {
    return e->vector.dot(input * e->vector).real();
  }
  if (const auto* p = std::get_if<ProductPairCertificate>(&c)) {
    return product_expectation(input, p->u.amplitudes(), p->v.amplitudes());
  }
  if (const auto* t = std::get_if<PptCertificate>(&c)) {
    return t->vector.dot(partial_transpose(input, dims, 2) * t->vector).real();
  }
  const auto& d = std::get<DecompositionCertificate>(c);
  const double tr = input.trace().real();
  return -(input - tr * d.decomposition.state_matrix()).norm();
}

// ---------------------------------------------------------------------------
// See-saw

namespace {

// M[i,j] = sum_{k,l} conj(v_k) sigma[(i,k),(j,l)] v_l, an operator on H1.
HSOperator contract_second(const HSOperator& sigma, Dims dims, const CVector& v) {
  const int d1 = dims.left, d2 = dims.right;
  HSOperator m(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      m(i, j) = v.dot(sigma.block(i * d2, j * d2, d2, d2) * v);
  return 0.5 * (m + m.adjoint());
}

// N[k,l] = sum_{i,j} conj(u_i) sigma[(i,k),(j,l)] u_j, an operator on H2.
HSOperator contract_first(const HSOperator& sigma, Dims dims, const CVector& u) {
  const int d1 = dims.left, d2 = dims.right;
  HSOperator n = HSOperator::Zero(d2, d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      n += std::conj(u(i)) * u(j) * sigma.block(i * d2, j * d2, d2, d2);
  return 0.5 * (n + n.adjoint());
}

struct Run {
  double value;
  CVector u;
  CVector v;
  std::vector<double> history;
  bool monotone = true;
};

Run alternate(const HSOperator& sigma, Dims dims, CVector u, CVector v, int max_iters, double tol) {
  Run run{product_expectation(sigma, u, v), std::move(u), std::move(v), {}, true};
  run.history.push_back(run.value);
  const double slack = 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff());
  for (int it = 0; it < max_iters; ++it) {
    run.u = min_eigenpair(contract_second(sigma, dims, run.v)).vector;
    run.v = min_eigenpair(contract_first(sigma, dims, run.u)).vector;
    const double next = product_expectation(sigma, run.u, run.v);
    if (next > run.value + slack) run.monotone = false;
    const double gain = run.value - next;
    run.value = std::min(run.value, next);
    run.history.push_back(next);
    if (gain < tol) break;
  }
  // The last step is the returned pair; re-evaluate so the value is exactly
  // reproducible from (u, v).
  run.value = product_expectation(sigma, run.u, run.v);
  return run;
}

// Unit vector on the grid: d-1 magnitude angles in [0, pi/2] and d-1 phases.
CVector grid_vector(int dim, int points, std::size_t index) {
  std::vector<int> digits(2 * (dim - 1));
  for (int& dgt : digits) {
    dgt = static_cast<int>(index % points);
    index /= points;
  }
  CVector w(dim);
  double tail = 1.0;
  for (int c = 0; c < dim; ++c) {
    double mag = tail;
    if (c < dim - 1) {
      const double angle = (std::numbers::pi / 2.0) * digits[c] / (points - 1);
      mag = tail * std::cos(angle);
      tail *= std::sin(angle);
    }
    const double phase = c == 0 ? 0.0 : 2.0 * std::numbers::pi * digits[dim - 1 + c - 1] / points;
    w(c) = std::polar(mag, phase);
  }
  return w;
}

struct GridBest {
  double value;
  CVector u;
  CVector v;
};

GridBest grid_search(const HSOperator& sigma, Dims dims, int points) {
  const bool over_first = dims.left <= dims.right;
  const int gdim = over_first ? dims.left : dims.right;
  std::size_t total = 1;
  for (int i = 0; i < 2 * (gdim - 1); ++i) total *= static_cast<std::size_t>(points);

  GridBest best{std::numeric_limits<double>::infinity(), {}, {}};
  for (std::size_t idx = 0; idx < total; ++idx) {
    const CVector g = grid_vector(gdim, points, idx);
    const MinEigenpair inner = over_first ? min_eigenpair(contract_first(sigma, dims, g))
                                          : min_eigenpair(contract_second(sigma, dims, g));
    if (inner.value < best.value) {
      best.value = inner.value;
      best.u = over_first ? g : inner.vector;
      best.v = over_first ? inner.vector : g;
    }
  }
  best.value = product_expectation(sigma, best.u, best.v);
  return best;
}

}  // namespace

SeesawResult seesaw_min_product(const HSOperator& sigma, Dims dims, const SeesawParams& params) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != dims.total()) {
    throw InvalidInput("seesaw_min_product: matrix size does not match dims");
  }
  if (!is_hermitian(sigma, kPsdInputTol * std::max(1.0, sigma.cwiseAbs().maxCoeff()))) {
    throw InvalidInput("seesaw_min_product: sigma is not Hermitian");
  }
  if (params.restarts < 1 || params.max_iters < 0) {
    throw InvalidInput("seesaw_min_product: restarts must be positive");
  }
  const HSOperator h = 0.5 * (sigma + sigma.adjoint());

  std::vector<Run> runs(static_cast<std::size_t>(params.restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    Rng rng(mix_seed(params.seed, r));
    CVector u = random_pure(dims.left, rng).amplitudes();
    CVector v = random_pure(dims.right, rng).amplitudes();
    runs[r] = alternate(h, dims, std::move(u), std::move(v), params.max_iters, params.tol);
  });

  std::size_t best = 0;
  bool monotone = true;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    monotone = monotone && runs[r].monotone;
    if (runs[r].value < runs[best].value) best = r;
  }
  const double seesaw_value = runs[best].value;
  Run chosen = std::move(runs[best]);

  std::optional<double> grid_value;
  if (params.grid_refinement && dims.left <= 3 && dims.right <= 3 && params.grid_points >= 2) {
    const GridBest g = grid_search(h, dims, params.grid_points);
    grid_value = g.value;
    Run polished = alternate(h, dims, g.u, g.v, params.max_iters, params.tol);
    monotone = monotone && polished.monotone;
    if (g.value < polished.value) {
      polished.value = g.value;
      polished.u = g.u;
      polished.v = g.v;
    }
    if (polished.value < chosen.value) chosen = std::move(polished);
  }

  return SeesawResult{chosen.value,
                      PureVector::normalized(chosen.u),
                      PureVector::normalized(chosen.v),
                      seesaw_value,
                      grid_value,
                      monotone,
                      std::move(chosen.history)};
}

// ---------------------------------------------------------------------------
// Decomposition search

namespace {

struct Atom {
  CVector u;
  CVector v;
};

Eigen::VectorXd real_coords(const HSOperator& m) {
  Eigen::VectorXd out(2 * m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    out(2 * i) = m.data()[i].real();
    out(2 * i + 1) = m.data()[i].imag();
  }
  return out;
}

HSOperator atom_matrix(const Atom& a) {
  const CVector w = kron(a.u, a.v);
  return w * w.adjoint();
}

// Product direction with the largest overlap with `r`: the see-saw minimum of -r.
Atom best_product_direction(const HSOperator& r, Dims dims, std::uint64_t seed, double& overlap) {
  SeesawParams p;
  p.restarts = 4;
  p.max_iters = 50;
  p.tol = 1e-14;
  p.seed = seed;
  p.grid_refinement = false;
  const HSOperator neg = -0.5 * (r + r.adjoint());
  // Restarts inside the search stay sequential; callers parallelize above.
  std::vector<Run> runs(static_cast<std::size_t>(p.restarts));
  for (int s = 0; s < p.restarts; ++s) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
    CVector u = random_pure(dims.left, rng).amplitudes();
    CVector v = random_pure(dims.right, rng).amplitudes();
    runs[s] = alternate(neg, dims, std::move(u), std::move(v), p.max_iters, p.tol);
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < runs.size(); ++s)
    if (runs[s].value < runs[best].value) best = s;
  overlap = -runs[best].value;
  return Atom{runs[best].u, runs[best].v};
}

}  // namespace

DecompositionOutcome decomposition_search(const DensityMatrix& d, Dims dims,
                                          const DecompositionParams& params) {
  if (d.dim() != dims.total()) throw InvalidInput("decomposition_search: dims do not match");
  const int k = params.k == 0 ? dims.total() * dims.total() : params.k;
  if (k < 1) throw InvalidInput("decomposition_search: k must be at least 1");
  if (params.iters < 0) throw InvalidInput("decomposition_search: iters must be nonnegative");

  const HSOperator& target = d.matrix();
  const Eigen::VectorXd b = real_coords(target);
  Rng rng(params.seed);
  std::uint64_t draws = 0;

  std::vector<Atom> atoms;
  Eigen::VectorXd weights;
  auto refit = [&] {
    Eigen::MatrixXd a(b.size(), static_cast<Eigen::Index>(atoms.size()));
    for (std::size_t i = 0; i < atoms.size(); ++i) a.col(i) = real_coords(atom_matrix(atoms[i]));
    weights = atoms.empty() ? Eigen::VectorXd() : nnls(a, b);
    std::vector<Atom> kept;
    std::vector<double> kept_w;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (weights(i) > 0.0) {
        kept.push_back(std::move(atoms[i]));
        kept_w.push_back(weights(i));
      }
    }
    atoms = std::move(kept);
    weights = Eigen::Map<Eigen::VectorXd>(kept_w.data(), static_cast<Eigen::Index>(kept_w.size()));
  };
  auto residual_matrix = [&] {
    HSOperator r = target;
    for (std::size_t i = 0; i < atoms.size(); ++i) r -= weights(i) * atom_matrix(atoms[i]);
    return r;
  };

  // Start from the product eigenbases of the marginals plus random samples.
  const HermitianEig m1 = hermitian_eig(partial_trace(target, dims, 1));
  const HermitianEig m2 = hermitian_eig(partial_trace(target, dims, 2));
  for (int i = dims.left - 1; i >= 0 && static_cast<int>(atoms.size()) < k; --i)
    for (int j = dims.right - 1; j >= 0 && static_cast<int>(atoms.size()) < k; --j)
      atoms.push_back({m1.vectors.col(i), m2.vectors.col(j)});
  while (static_cast<int>(atoms.size()) < std::min(k, 2 * dims.total())) {
    atoms.push_back({random_pure(dims.left, rng).amplitudes(), random_pure(dims.right, rng).amplitudes()});
  }
  refit();

  int it = 0;
  double res = residual_matrix().norm();
  for (; it < params.iters && res > 0.5 * params.tol; ++it) {
    const HSOperator r = residual_matrix();
    if (static_cast<int>(atoms.size()) < k) {
      double overlap = 0.0;
      Atom next = best_product_direction(r, dims, mix_seed(params.seed, ++draws), overlap);
      if (overlap <= 1e-15) break;  // no product direction reduces the residual
      atoms.push_back(std::move(next));
    } else {
      Eigen::Index lightest = 0;
      weights.minCoeff(&lightest);
      const HSOperator without = r + weights(lightest) * atom_matrix(atoms[lightest]);
      double overlap = 0.0;
      atoms[lightest] = best_product_direction(without, dims, mix_seed(params.seed, ++draws), overlap);
    }
    refit();
    res = residual_matrix().norm();
  }

  if (atoms.empty()) return {std::nullopt, target.norm(), it};
  const double total = weights.sum();
  std::vector<DecompositionTerm> terms;
  terms.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const CVector u = atoms[i].u.normalized();
    const CVector v = atoms[i].v.normalized();
    terms.push_back({weights(i) / total, u * u.adjoint(), v * v.adjoint()});
  }
  // Exact renormalization of the weights for the invariant check.
  double sum = 0.0;
  for (const auto& t : terms) sum += t.lambda;
  for (auto& t : terms) t.lambda /= sum;

  SeparableDecomposition dec(std::move(terms), true);
  const double final_res = (target - dec.state_matrix()).norm();
  const bool ok = final_res <= params.tol && std::abs(total - 1.0) <= params.tol;
  if (!ok) return {std::nullopt, final_res, it};
  return {std::move(dec), final_res, it};
}

// ---------------------------------------------------------------------------
// Membership tests

bool ppt_decisive(Dims dims) {
  return std::min(dims.left, dims.right) == 1 || dims.total() <= 6;
}

namespace {

void require_psd(const HSOperator& v, const char* what) {
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  if (v.rows() != v.cols() || v.rows() == 0 || !is_hermitian(v, kPsdInputTol * scale) ||
      min_eigenvalue(v) < -kPsdInputTol * scale) {
    throw InvalidInput(std::string(what) + ": input is not PSD");
  }
}

}  // namespace

ConeVerdict in_natural_cone(const HSOperator& v, double tol) {
  if (v.rows() != v.cols() || v.rows() == 0) throw InvalidInput("in_natural_cone: not square");
  const double defect = hermiticity_defect(v);
  const MinEigenpair low = min_eigenpair(0.5 * (v + v.adjoint()));
  const bool member = defect <= tol && low.value >= -tol;
  return {member ? Verdict::member : Verdict::non_member, low.value,
          EigenCertificate{low.value, low.vector}};
}

double ppt_min_eigenvalue(const HSOperator& d, Dims dims) {
  require_psd(d, "ppt_min_eigenvalue");
  return min_eigenvalue(partial_transpose(0.5 * (d + d.adjoint()), dims, 2));
}

ConeVerdict in_dual_sep_cone(const HSOperator& sigma, Dims dims, const ConeParams& params) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != dims.total()) {
    throw InvalidInput("in_dual_sep_cone: matrix size does not match dims");
  }
  if (!is_hermitian(sigma, kPsdInputTol * std::max(1.0, sigma.cwiseAbs().maxCoeff()))) {
    throw InvalidInput("in_dual_sep_cone: sigma is not Hermitian");
  }
  const double scale = sigma.norm();
  if (scale == 0.0) {
    return {Verdict::member, 0.0, EigenCertificate{0.0, CVector::Unit(dims.total(), 0)}};
  }
  const HSOperator s = (0.5 * (sigma + sigma.adjoint())) / scale;

  // The PSD cone is inside the dual of every subcone.
  const MinEigenpair low = min_eigenpair(s);
  if (low.value >= -params.tol) {
    return {Verdict::member, low.value * scale, EigenCertificate{low.value * scale, low.vector}};
  }

  const SeesawResult r = seesaw_min_product(s, dims, params.seesaw);
  const double margin = product_expectation(sigma, r.u.amplitudes(), r.v.amplitudes());
  ProductPairCertificate cert{margin, r.u, r.v};
  if (r.value < -params.tol) return {Verdict::non_member, margin, std::move(cert)};
  return {r.grid_value ? Verdict::member : Verdict::inconclusive, margin, std::move(cert)};
}

ConeVerdict in_sep_cone(const HSOperator& v, Dims dims, const ConeParams& params) {
  if (v.rows() != dims.total()) throw InvalidInput("in_sep_cone: matrix size does not match dims");
  require_psd(v, "in_sep_cone");
  const HSOperator h = 0.5 * (v + v.adjoint());
  const double tr = h.trace().real();
  if (tr <= 0.0) {
    return {Verdict::member, 0.0, PptCertificate{0.0, CVector::Unit(dims.total(), 0)}};
  }
  const HSOperator n = h / tr;

  const MinEigenpair pt = min_eigenpair(partial_transpose(n, dims, 2));
  const double ppt_margin = pt.value * tr;
  PptCertificate ppt{ppt_margin, pt.vector};
  if (pt.value < -params.tol) return {Verdict::non_member, ppt_margin, std::move(ppt)};

  const bool decisive = ppt_decisive(dims);
  if (decisive && !params.prefer_decomposition) return {Verdict::member, ppt_margin, std::move(ppt)};

  // Clamp rounding-level negative eigenvalues so the search sees a valid state.
  const DensityMatrix state =
      DensityMatrix::normalized(spectral_apply(n, [](double x) { return std::max(0.0, x); }));
  DecompositionOutcome found = decomposition_search(state, dims, params.decomposition);
  if (found.decomposition) {
    DecompositionCertificate cert{std::move(*found.decomposition), 0.0};
    cert.residual = (h - tr * cert.decomposition.state_matrix()).norm();
    return {Verdict::member, -cert.residual, std::move(cert)};
  }
  return {decisive ? Verdict::member : Verdict::inconclusive, ppt_margin, std::move(ppt)};
}

}  // namespace conelab
