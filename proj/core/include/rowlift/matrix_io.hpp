#ifndef ROWLIFT_MATRIX_IO_HPP
#define ROWLIFT_MATRIX_IO_HPP

/// JSON serialization: complex matrices as {rows, cols, entries} with
/// row-major [re, im] pairs, row operators as arrays of matrices, and
/// Pick systems as node/target lists. Round trips are bit-exact.

#include <string>
#include <vector>

#include "rowlift/linalg.hpp"
#include "rowlift/pick.hpp"
#include "rowlift/row_operator.hpp"

namespace rowlift {

std::string matrix_to_json(const Mat& A);
Mat matrix_from_json(const std::string& text);

void write_matrix_file(const std::string& path, const Mat& A);
Mat read_matrix_file(const std::string& path);

std::string row_operator_to_json(const RowOperator& T);
RowOperator row_operator_from_json(const std::string& text);
void write_row_operator_file(const std::string& path, const RowOperator& T);
RowOperator read_row_operator_file(const std::string& path);

std::string pick_system_to_json(const PickSystem& sys);
PickSystem pick_system_from_json(const std::string& text);
PickSystem read_pick_system_file(const std::string& path);
void write_pick_system_file(const std::string& path, const PickSystem& sys);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rowlift

#endif
