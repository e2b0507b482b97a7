#include "cstar/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cstar::io {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedInput, what);
}

double finite_number(const Json& j, const char* what) {
  if (!j.is_number()) malformed(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) malformed(std::string(what) + " must be finite");
  return v;
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const CMat& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
  }
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["data"] = std::move(data);
  return out;
}

CMat matrix_from_json(const Json& j) {
  if (!j.is_object()) malformed("matrix file must be a JSON object");
  for (const char* key : {"rows", "cols", "data"}) {
    if (!j.contains(key)) malformed(std::string("missing key \"") + key + "\"");
  }
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
    malformed("rows and cols must be integers");
  }
  const auto rows = j["rows"].get<long long>();
  const auto cols = j["cols"].get<long long>();
  if (rows < 1 || cols < 1) malformed("rows and cols must be positive");
  const Json& data = j["data"];
  if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols) {
    malformed("data must hold rows*cols entries");
  }
  CMat m(rows, cols);
  for (long long k = 0; k < rows * cols; ++k) {
    const Json& entry = data[static_cast<std::size_t>(k)];
    if (!entry.is_array() || entry.size() != 2) malformed("each entry must be [re, im]");
    m(k / cols, k % cols) = Complex(finite_number(entry[0], "real part"),
                                    finite_number(entry[1], "imaginary part"));
  }
  return m;
}

CMat parse_matrix_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

CMat parse_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_text(buf.str());
}

void emit_report(const Json& report, const std::string& path, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) malformed("cannot write " + path);
  file << text;
}

}  // namespace cstar::io
