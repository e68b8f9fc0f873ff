#include "rowlift/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rowlift {

using nlohmann::json;

namespace {

json matrix_to_node(const Mat& A) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < A.rows(); ++r)
    for (Eigen::Index c = 0; c < A.cols(); ++c) {
      const Complex& v = A(r, c);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument("matrix_to_json: non-finite entry");
      entries.push_back(json::array({v.real(), v.imag()}));
    }
  return json{{"rows", A.rows()}, {"cols", A.cols()}, {"entries", std::move(entries)}};
}

Mat matrix_from_node(const json& node) {
  const Eigen::Index rows = node.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = node.at("cols").get<Eigen::Index>();
  const json& entries = node.at("entries");
  if (rows < 0 || cols < 0 || entries.size() != static_cast<std::size_t>(rows * cols))
    throw std::invalid_argument("matrix_from_json: entries length != rows*cols");
  Mat A(rows, cols);
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, ++i) {
      const json& e = entries[i];
      double re = e.at(0).get<double>(), im = e.at(1).get<double>();
      if (!std::isfinite(re) || !std::isfinite(im))
        throw std::invalid_argument("matrix_from_json: non-finite entry");
      A(r, c) = Complex(re, im);
    }
  return A;
}

json vector_to_node(const Vec& v) {
  Mat m(v.size(), 1);
  m.col(0) = v;
  return matrix_to_node(m);
}

}  // namespace

std::string matrix_to_json(const Mat& A) { return matrix_to_node(A).dump(2); }

Mat matrix_from_json(const std::string& text) { return matrix_from_node(json::parse(text)); }

void write_matrix_file(const std::string& path, const Mat& A) {
  write_text_file(path, matrix_to_json(A) + "\n");
}

Mat read_matrix_file(const std::string& path) { return matrix_from_json(read_text_file(path)); }

std::string row_operator_to_json(const RowOperator& T) {
  json blocks = json::array();
  for (const Mat& b : T.blocks()) blocks.push_back(matrix_to_node(b));
  return json{{"n", T.n()}, {"dim", T.dim()}, {"blocks", std::move(blocks)}}.dump(2);
}

RowOperator row_operator_from_json(const std::string& text) {
  json node = json::parse(text);
  std::vector<Mat> blocks;
  for (const json& b : node.at("blocks")) blocks.push_back(matrix_from_node(b));
  RowOperator T(std::move(blocks));
  if (node.contains("n") && node.at("n").get<int>() != T.n())
    throw std::invalid_argument("row_operator_from_json: inconsistent block count");
  return T;
}

void write_row_operator_file(const std::string& path, const RowOperator& T) {
  write_text_file(path, row_operator_to_json(T) + "\n");
}

RowOperator read_row_operator_file(const std::string& path) {
  return row_operator_from_json(read_text_file(path));
}

std::string pick_system_to_json(const PickSystem& sys) {
  json nodes = json::array();
  for (const Vec& x : sys.nodes) nodes.push_back(vector_to_node(x));
  json targets = json::array();
  for (const Mat& w : sys.targets) targets.push_back(matrix_to_node(w));
  return json{{"n", sys.n()}, {"nodes", std::move(nodes)}, {"targets", std::move(targets)}}
      .dump(2);
}

PickSystem pick_system_from_json(const std::string& text) {
  json node = json::parse(text);
  PickSystem sys;
  for (const json& x : node.at("nodes")) {
    Mat m = matrix_from_node(x);
    if (m.cols() != 1) throw std::invalid_argument("pick_system_from_json: node must be a column");
    sys.nodes.push_back(m.col(0));
  }
  for (const json& w : node.at("targets")) {
    // scalar shorthand: [re, im]
    if (w.is_array()) {
      Mat m(1, 1);
      m(0, 0) = Complex(w.at(0).get<double>(), w.at(1).get<double>());
      sys.targets.push_back(m);
    } else {
      sys.targets.push_back(matrix_from_node(w));
    }
  }
  validate(sys);
  return sys;
}

PickSystem read_pick_system_file(const std::string& path) {
  return pick_system_from_json(read_text_file(path));
}

void write_pick_system_file(const std::string& path, const PickSystem& sys) {
  write_text_file(path, pick_system_to_json(sys) + "\n");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rowlift
