#include "rgsvd/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rgsvd/errors.hpp"

namespace rgsvd::io {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw IoError("empty numeric field");
  const std::string l = lower(t);
  if (l == "nan") return std::nan("");
  if (l == "inf" || l == "+inf") return INFINITY;
  if (l == "-inf") return -INFINITY;
  double value = 0.0;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  const auto res = std::from_chars(begin, t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw IoError("malformed number '" + t + "'");
  }
  return value;
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& m,
                         MarketFormat format) {
  auto out = open_out(path);
  if (format == MarketFormat::array) {
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i < m.rows(); ++i) out << format_double(m(i, j)) << '\n';
    }
  } else {
    std::vector<Triplet> triplets;
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i < m.rows(); ++i) {
        if (m(i, j) != 0.0) triplets.push_back({i, j, m(i, j)});
      }
    }
    out.close();
    write_matrix_market_triplets(path, m.rows(), m.cols(), triplets);
    return;
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_matrix_market_triplets(const std::filesystem::path& path, Index rows,
                                  Index cols, const std::vector<Triplet>& triplets) {
  auto out = open_out(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << rows << ' ' << cols << ' ' << triplets.size() << '\n';
  for (const auto& t : triplets) {
    out << (t.row + 1) << ' ' << (t.col + 1) << ' ' << format_double(t.value) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix read_matrix_market(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string header;
  if (!std::getline(in, header)) throw IoError(path.string() + ": empty file");

  std::istringstream hs(lower(header));
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix") {
    throw IoError(path.string() + ": not a Matrix Market matrix");
  }
  if (field != "real" && field != "integer" && field != "double") {
    throw IoError(path.string() + ": unsupported field '" + field + "'");
  }
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") {
    throw IoError(path.string() + ": unsupported symmetry '" + symmetry + "'");
  }

  std::string line;
  do {
    if (!std::getline(in, line)) throw IoError(path.string() + ": missing size line");
    line = trim(line);
  } while (line.empty() || line[0] == '%');

  std::istringstream size_line(line);
  Index rows = 0, cols = 0, nnz = 0;
  size_line >> rows >> cols;
  if (format == "coordinate") size_line >> nnz;
  if (!size_line || rows < 0 || cols < 0) {
    throw IoError(path.string() + ": malformed size line");
  }

  Matrix m = Matrix::Zero(rows, cols);
  auto next_token_line = [&](std::string& dst) {
    while (std::getline(in, dst)) {
      dst = trim(dst);
      if (!dst.empty() && dst[0] != '%') return true;
    }
    return false;
  };

  if (format == "array") {
    for (Index j = 0; j < cols; ++j) {
      const Index start = symmetric ? j : 0;
      for (Index i = start; i < rows; ++i) {
        if (!next_token_line(line)) throw IoError(path.string() + ": truncated data");
        m(i, j) = parse_double(line);
        if (symmetric) m(j, i) = m(i, j);
      }
    }
  } else if (format == "coordinate") {
    for (Index k = 0; k < nnz; ++k) {
      if (!next_token_line(line)) throw IoError(path.string() + ": truncated data");
      std::istringstream es(line);
      Index i = 0, j = 0;
      std::string value;
      es >> i >> j >> value;
      if (!es || i < 1 || j < 1 || i > rows || j > cols) {
        throw IoError(path.string() + ": bad entry '" + line + "'");
      }
      m(i - 1, j - 1) = parse_double(value);
      if (symmetric) m(j - 1, i - 1) = m(i - 1, j - 1);
    }
  } else {
    throw IoError(path.string() + ": unsupported format '" + format + "'");
  }
  return m;
}

void write_csv(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix read_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& f : split_csv_line(line)) row.push_back(parse_double(f));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(path.string() + ": ragged CSV row");
    }
    rows.push_back(std::move(row));
  }
  const Index r = static_cast<Index>(rows.size());
  const Index c = r ? static_cast<Index>(rows.front().size()) : 0;
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_csv(const std::filesystem::path& path, const Vector& v) {
  auto out = open_out(path);
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

Vector read_csv_vector(const std::filesystem::path& path) {
  const Matrix m = read_csv(path);
  if (m.cols() > 1 && m.rows() > 1) {
    throw IoError(path.string() + ": expected a single row or column");
  }
  Vector v(m.size());
  for (Index k = 0; k < m.size(); ++k) v(k) = m.data()[k];
  return v;
}

void write_key_values(const std::filesystem::path& path, const KeyValues& kv) {
  auto out = open_out(path);
  out << "key,value\n";
  for (const auto& [k, v] : kv) out << k << ',' << v << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::map<std::string, std::string> kv;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == "key,value") continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(path.string() + ": bad line '" + line + "'");
    kv[trim(line.substr(0, comma))] = trim(line.substr(comma + 1));
  }
  return kv;
}

}  // namespace rgsvd::io
