#include <ssattn/matrix_io.hpp>

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace ssattn {

namespace {

constexpr char kMagic[4] = {'M', 'A', 'T', '1'};
constexpr std::size_t kHeaderBytes = 12;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::uint32_t load_u32(const std::string& bytes, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[off + std::size_t(i)]);
  return v;
}

void store_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

double load_f64(const std::string& bytes, std::size_t off) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(bytes[off + std::size_t(i)]);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

void store_f64(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path + ": write failed");
}

void require_shape(const DenseMatrix& m) {
  if (m.rows() < 1 || m.cols() < 1) throw UsageError("matrix must have rows, cols >= 1, got " + shape_str(m));
  if (m.rows() > 0xffffffffLL || m.cols() > 0xffffffffLL) throw UsageError("matrix too large for MAT1");
}

}  // namespace

MatrixFormat format_from_path(const std::string& path) {
  return ends_with(path, ".mat1") || ends_with(path, ".bin") ? MatrixFormat::mat1 : MatrixFormat::csv;
}

DenseMatrix parse_csv(const std::string& text, const std::string& source) {
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    Index count = 0;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = t.find(',', pos);
      const std::string field = trim(std::string_view(t).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw IoError(source + ": line " + std::to_string(line_no) + ": cannot parse field " + std::to_string(count + 1) +
                      " ('" + field + "') as a number");
      }
      values.push_back(v);
      ++count;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (cols < 0) {
      cols = count;
    } else if (count != cols) {
      throw IoError(source + ": line " + std::to_string(line_no) + ": ragged row with " + std::to_string(count) +
                    " fields, expected " + std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) throw IoError(source + ": no data rows (matrix must be at least 1x1)");
  DenseMatrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

std::string format_csv(const DenseMatrix& m) {
  require_shape(m);
  std::string out;
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, m(i, j), std::chars_format::general, 17);
      (void)ec;
      out.append(buf, ptr);
    }
    out.push_back('\n');
  }
  return out;
}

DenseMatrix parse_mat1(const std::string& bytes, const std::string& source) {
  if (bytes.size() < kHeaderBytes) {
    throw IoError(source + ": truncated header at byte offset " + std::to_string(bytes.size()) + " (need " +
                  std::to_string(kHeaderBytes) + " bytes)");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw IoError(source + ": bad magic at byte offset 0, expected MAT1");
  const std::uint32_t rows = load_u32(bytes, 4);
  const std::uint32_t cols = load_u32(bytes, 8);
  if (rows == 0 || cols == 0) {
    throw IoError(source + ": invalid shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                  " at byte offset 4 (rows, cols must be >= 1)");
  }
  const std::uint64_t need = kHeaderBytes + 8ull * rows * cols;
  if (bytes.size() < need) {
    throw IoError(source + ": truncated payload at byte offset " + std::to_string(bytes.size()) + ", expected " +
                  std::to_string(need) + " bytes");
  }
  if (bytes.size() > need) {
    throw IoError(source + ": trailing data at byte offset " + std::to_string(need));
  }
  DenseMatrix m(rows, cols);
  for (std::size_t k = 0; k < std::size_t(rows) * cols; ++k) m.data()[k] = load_f64(bytes, kHeaderBytes + 8 * k);
  return m;
}

std::string format_mat1(const DenseMatrix& m) {
  require_shape(m);
  std::string out(kMagic, 4);
  out.reserve(kHeaderBytes + 8 * std::size_t(m.size()));
  store_u32(out, static_cast<std::uint32_t>(m.rows()));
  store_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (Index k = 0; k < m.size(); ++k) store_f64(out, m.data()[k]);
  return out;
}

DenseMatrix read_matrix(const std::string& path, MatrixFormat format) {
  const std::string bytes = slurp(path);
  return format == MatrixFormat::mat1 ? parse_mat1(bytes, path) : parse_csv(bytes, path);
}

DenseMatrix read_matrix(const std::string& path) { return read_matrix(path, format_from_path(path)); }

void write_matrix(const std::string& path, const DenseMatrix& m, MatrixFormat format) {
  spill(path, format == MatrixFormat::mat1 ? format_mat1(m) : format_csv(m));
}

void write_matrix(const std::string& path, const DenseMatrix& m) { write_matrix(path, m, format_from_path(path)); }

}  // namespace ssattn
