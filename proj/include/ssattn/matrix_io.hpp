#pragma once

#include <ssattn/matrix.hpp>

#include <string>

namespace ssattn {

enum class MatrixFormat { csv, mat1 };

/// ".mat1" / ".bin" select MAT1, everything else CSV.
MatrixFormat format_from_path(const std::string& path);

/// CSV: one row per line, comma separated, lines starting with '#' ignored.
/// MAT1: "MAT1", u32 LE rows, u32 LE cols, rows*cols f64 LE row-major.
/// Throws IoError with a line number or byte offset on malformed input.
DenseMatrix read_matrix(const std::string& path, MatrixFormat format);
DenseMatrix read_matrix(const std::string& path);

/// CSV values are written with 17 significant digits.
void write_matrix(const std::string& path, const DenseMatrix& m, MatrixFormat format);
void write_matrix(const std::string& path, const DenseMatrix& m);

DenseMatrix parse_csv(const std::string& text, const std::string& source = "<memory>");
std::string format_csv(const DenseMatrix& m);
DenseMatrix parse_mat1(const std::string& bytes, const std::string& source = "<memory>");
std::string format_mat1(const DenseMatrix& m);

}  // namespace ssattn
