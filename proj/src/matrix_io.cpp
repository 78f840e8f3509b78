#include "ergoloc/matrix_io.hpp"

#include <fstream>

namespace ergoloc {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      entries.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries")) {
    throw InvalidInput("matrix JSON needs \"rows\", \"cols\" and \"entries\"");
  }
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
    throw InvalidInput("matrix rows/cols must be integers");
  }
  const long rows = j["rows"].get<long>();
  const long cols = j["cols"].get<long>();
  if (rows < 0 || cols < 0) throw InvalidInput("matrix rows/cols must be non-negative");
  const json& e = j["entries"];
  if (!e.is_array() || static_cast<long>(e.size()) != rows * cols) {
    throw InvalidInput("matrix entry count does not equal rows*cols");
  }
  ComplexMatrix m(rows, cols);
  for (long k = 0; k < rows * cols; ++k) {
    const json& z = e[k];
    double re = 0.0, im = 0.0;
    if (z.is_number()) {
      re = z.get<double>();
    } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
      re = z[0].get<double>();
      im = z[1].get<double>();
    } else {
      throw InvalidInput("matrix entry " + std::to_string(k) + " is not [re, im]");
    }
    m(k / cols, k % cols) = cplx(re, im);
  }
  return m;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& ex) {
    throw InvalidInput(path + ": " + ex.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << j.dump(2) << '\n';
}

ComplexMatrix read_matrix_file(const std::string& path) {
  return matrix_from_json(read_json_file(path));
}

void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
  write_json_file(path, matrix_to_json(m));
}

}  // namespace ergoloc
