#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cstar/linalg.hpp"

namespace cstar::io {

using Json = nlohmann::ordered_json;

/// {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
Json matrix_to_json(const CMat& m);

/// Throws Error(MalformedInput) on any schema or value problem.
CMat matrix_from_json(const Json& j);

CMat parse_matrix(const std::string& path);
CMat parse_matrix_text(const std::string& text);

Json complex_to_json(Complex z);

/// Writes the report to path, or to out when path is empty.
void emit_report(const Json& report, const std::string& path, std::ostream& out);

}  // namespace cstar::io
