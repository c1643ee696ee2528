#pragma once

// Matrix Market and CSV serialization for dense matrices and vectors.
//
// Numbers are written with the shortest representation that round-trips
// exactly, so write -> read reproduces every entry bit for bit.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rgsvd/dense.hpp"

namespace rgsvd::io {

enum class MarketFormat { array, coordinate };

/// Shortest round-trip decimal form of a double ("nan", "inf" for
/// non-finite values).
std::string format_double(double value);

/// Parses a double written by format_double (or any strtod-compatible
/// form). Throws IoError on trailing garbage.
double parse_double(const std::string& text);

/// Writes `real general` Matrix Market. Coordinate output lists only
/// nonzero entries.
void write_matrix_market(const std::filesystem::path& path, const Matrix& m,
                         MarketFormat format = MarketFormat::array);

/// Reads `matrix array|coordinate real|integer general|symmetric` files into
/// a dense matrix.
Matrix read_matrix_market(const std::filesystem::path& path);

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Writes triplets (0-based in memory, 1-based on disk) as coordinate format.
void write_matrix_market_triplets(const std::filesystem::path& path, Index rows,
                                  Index cols, const std::vector<Triplet>& triplets);

/// Row-per-line, comma-separated, '.' decimal point.
void write_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_csv(const std::filesystem::path& path);

/// A vector is one value per line.
void write_csv(const std::filesystem::path& path, const Vector& v);
Vector read_csv_vector(const std::filesystem::path& path);

/// Two-column `key,value` sidecar files used for manifests.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
void write_key_values(const std::filesystem::path& path, const KeyValues& kv);
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

}  // namespace rgsvd::io
