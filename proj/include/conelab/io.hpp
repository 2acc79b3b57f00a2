#pragma once

// JSON encodings shared by the library and the CLI.
//
// Matrix: {"rows": n, "cols": m, "data": [[re, im], ...]} in row-major order.
// Vectors use the same encoding with cols = 1.

#include "conelab/cones.hpp"
#include "conelab/correspondence.hpp"
#include "conelab/replication.hpp"
#include "conelab/standard_form.hpp"

#include <json.hpp>

#include <stdexcept>

namespace conelab {

using json = nlohmann::json;

/// Structurally malformed document (wrong shape, missing keys, bad numbers).
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

json matrix_to_json(const HSOperator& m);
HSOperator matrix_from_json(const json& j);

json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);

json decomposition_to_json(const SeparableDecomposition& dec);
SeparableDecomposition decomposition_from_json(const json& j);

json standard_form_to_json(const StandardForm& sf);
StandardForm standard_form_from_json(const json& j);

json certificate_to_json(const WitnessCertificate& c);
json verdict_to_json(const ConeVerdict& v);

json report_to_json(const ReplicationReport& r);

json sqrt_record_to_json(const SqrtMembershipRecord& r);

/// Parses text into JSON, mapping parser errors to FormatError.
json parse_json(const std::string& text);

}  // namespace conelab
