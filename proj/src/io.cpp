#include "conelab/io.hpp"

#include <cmath>

namespace conelab {

namespace {

int positive_int(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw FormatError(std::string("matrix: missing integer field '") + key + "'");
  }
  const auto v = j.at(key).get<long long>();
  if (v < 1 || v > 1 << 16) throw FormatError(std::string("matrix: field '") + key + "' out of range");
  return static_cast<int>(v);
}

double finite_number(const json& j) {
  if (!j.is_number()) throw FormatError("matrix: entry is not a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw FormatError("matrix: entry is not finite");
  return x;
}

}  // namespace

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

json matrix_to_json(const HSOperator& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

HSOperator matrix_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("matrix: expected an object");
  const int rows = positive_int(j, "rows");
  const int cols = positive_int(j, "cols");
  if (!j.contains("data") || !j.at("data").is_array()) throw FormatError("matrix: missing 'data' array");
  const json& data = j.at("data");
  if (data.size() != static_cast<std::size_t>(rows) * cols) {
    throw FormatError("matrix: 'data' length does not equal rows * cols");
  }
  HSOperator m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const json& e = data.at(static_cast<std::size_t>(i) * cols + k);
      if (!e.is_array() || e.size() != 2) throw FormatError("matrix: entry must be [re, im]");
      m(i, k) = Complex(finite_number(e[0]), finite_number(e[1]));
    }
  return m;
}

json vector_to_json(const CVector& v) { return matrix_to_json(v); }

CVector vector_from_json(const json& j) {
  const HSOperator m = matrix_from_json(j);
  if (m.cols() != 1) throw FormatError("vector: expected cols = 1");
  return m.col(0);
}

json decomposition_to_json(const SeparableDecomposition& dec) {
  json terms = json::array();
  for (const DecompositionTerm& t : dec.terms()) {
    terms.push_back({{"lambda", t.lambda}, {"x", matrix_to_json(t.x)}, {"y", matrix_to_json(t.y)}});
  }
  return json{{"normalized", dec.normalized()}, {"terms", std::move(terms)}};
}

SeparableDecomposition decomposition_from_json(const json& j) {
  if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array()) {
    throw FormatError("decomposition: expected an object with a 'terms' array");
  }
  bool normalized = false;
  if (j.contains("normalized")) {
    if (!j.at("normalized").is_boolean()) throw FormatError("decomposition: 'normalized' must be a bool");
    normalized = j.at("normalized").get<bool>();
  }
  std::vector<DecompositionTerm> terms;
  for (const json& t : j.at("terms")) {
    if (!t.is_object() || !t.contains("lambda") || !t.contains("x") || !t.contains("y")) {
      throw FormatError("decomposition: term needs 'lambda', 'x' and 'y'");
    }
    terms.push_back({finite_number(t.at("lambda")), matrix_from_json(t.at("x")),
                     matrix_from_json(t.at("y"))});
  }
  return SeparableDecomposition(std::move(terms), normalized);
}

json standard_form_to_json(const StandardForm& sf) {
  return json{{"dim", sf.dim()}, {"rho", matrix_to_json(sf.rho().matrix())}, {"floor", sf.floor()}};
}

StandardForm standard_form_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("rho")) {
    throw FormatError("standard form: expected 'dim' and 'rho'");
  }
  const int dim = positive_int(j, "dim");
  const double floor = j.contains("floor") ? finite_number(j.at("floor")) : kDefaultFaithfulFloor;
  StandardForm sf = make_standard_form(DensityMatrix(matrix_from_json(j.at("rho"))), floor);
  if (sf.dim() != dim) throw InvalidInput("standard form: 'dim' does not match 'rho'");
  return sf;
}

json certificate_to_json(const WitnessCertificate& c) {
  json out{{"kind", certificate_kind(c)}};
  if (const auto* e = std::get_if<EigenCertificate>(&c)) {
    out["eigenvalue"] = e->value;
    out["eigenvector"] = vector_to_json(e->vector);
  } else if (const auto* p = std::get_if<ProductPairCertificate>(&c)) {
    out["value"] = p->value;
    out["u"] = vector_to_json(p->u.amplitudes());
    out["v"] = vector_to_json(p->v.amplitudes());
  } else if (const auto* t = std::get_if<PptCertificate>(&c)) {
    out["min_eigenvalue"] = t->min_eigenvalue;
    out["eigenvector"] = vector_to_json(t->vector);
  } else {
    const auto& d = std::get<DecompositionCertificate>(c);
    out["residual"] = d.residual;
    out["decomposition"] = decomposition_to_json(d.decomposition);
  }
  return out;
}

json verdict_to_json(const ConeVerdict& v) {
  return json{{"verdict", to_string(v.verdict)},
              {"margin", v.margin},
              {"certificate", certificate_to_json(v.certificate)}};
}

json report_to_json(const ReplicationReport& r) {
  return json{{"d0", r.d0},
              {"sigma_min_eig", r.sigma_min_eig},
              {"sigma_theta_pairing", r.sigma_theta_pairing},
              {"sigma_theta_pairing_imag", r.sigma_theta_pairing_imag},
              {"seesaw_min", r.seesaw_min},
              {"eta_ppt_min", r.eta_ppt_min},
              {"theta_ppt_min", r.theta_ppt_min},
              {"classical_suite_pass_rate", r.classical_suite_pass_rate},
              {"classical_cases", r.classical_cases}};
}

json sqrt_record_to_json(const SqrtMembershipRecord& r) {
  json out = verdict_to_json(r.verdict);
  out["input_hash"] = r.input_hash;
  out["input"] = matrix_to_json(r.input.matrix());
  out["representative"] = matrix_to_json(r.representative);
  return out;
}

}  // namespace conelab
