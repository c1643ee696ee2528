#pragma once

// Experiment driver: generate problems, factor, choose lambda, solve and
// record relative errors and timings.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rgsvd/problems.hpp"
#include "rgsvd/tikhonov.hpp"

namespace rgsvd {

enum class BenchMethod { gsvd, tgsvd, rgsvd_alg3, rgsvd_alg4, exact };

const char* to_string(BenchMethod method);
BenchMethod parse_bench_method(const std::string& text);

struct Selector {
  enum class Kind { gcv, lcurve, fixed };
  Kind kind = Kind::gcv;
  double value = 0.0;  // lambda for Kind::fixed

  /// "gcv", "lcurve" or "fixed:<lambda>".
  static Selector parse(const std::string& text);
  std::string to_string() const;
};

struct BenchConfig {
  std::vector<std::string> problems;
  Index n = 2048;
  std::optional<Index> m;
  double delta = 1e-3;
  double epsilon = 1e-2;
  Index blocksize = 4;
  std::vector<std::uint64_t> seeds;
  Selector selector;
  std::vector<BenchMethod> methods = {BenchMethod::rgsvd_alg3};
  GcvRows gcv_rows = GcvRows::projected;
  std::string output_path;
  std::optional<std::string> dump_dir;

  /// Throws ArgumentError for empty problem, seed or method lists and
  /// out-of-range numbers.
  void validate() const;
};

struct BenchRecord {
  std::string problem;
  std::string method;
  std::string selector;
  double lambda = 0.0;
  double rel_error = 0.0;
  double wall_time_s = 0.0;
  Index l1 = 0;
  Index l2 = 0;
  std::uint64_t seed = 0;
  /// Empty for a successful run; error rows carry NaN numbers.
  std::string error;

  bool ok() const { return error.empty(); }
};

/// Seed handed to the range finder for a given problem seed.
std::uint64_t sampler_seed(std::uint64_t seed);

struct MethodResult {
  BenchRecord record;
  Vector x;
};

/// Runs one method on an already generated problem. Failures are returned
/// as error records rather than thrown.
MethodResult run_method(const TikhonovProblem& prob, BenchMethod method, const BenchConfig& cfg,
                        std::uint64_t seed);

/// Every (problem, seed, method) combination, sorted by (problem, method,
/// seed). Writes the CSV report when cfg.output_path is set and the
/// solution vectors when cfg.dump_dir is set.
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg);

inline constexpr const char* kReportHeader =
    "problem,method,selector,lambda,rel_error,wall_time_s,l1,l2,seed";

void emit_report(const std::vector<BenchRecord>& records, const std::filesystem::path& path);
std::vector<BenchRecord> read_report(const std::filesystem::path& path);

/// Sorts in report order: (problem, method, seed).
void sort_records(std::vector<BenchRecord>& records);

}  // namespace rgsvd
