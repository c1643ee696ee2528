#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "rgsvd/bench.hpp"
#include "rgsvd/errors.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma - start);
    std::size_t used = 0;
    try {
      if (item.empty() || item.front() == '-') throw std::invalid_argument(item);
      out.push_back(std::stoull(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw rgsvd::ArgumentError("--seeds: '" + item + "' is not a nonnegative integer");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run regularized solvers on the test problems and write a CSV report"};

  std::vector<std::string> problems;
  std::vector<std::string> methods = {"rgsvd_alg3"};
  std::string seeds = "0";
  std::string selector = "gcv";
  std::string gcv_rows = "projected";
  long long n = 2048;
  long long m = 0;
  rgsvd::BenchConfig cfg;
  std::string dump_dir;

  app.set_config("--config", "", "Read options from a `key = value` file (flags override it)");
  app.add_option("--problems", problems,
                 "Comma-separated problem names: baart deriv2 foxgood gravity heat phillips shaw tomo")
      ->delimiter(',')
      ->required();
  app.add_option("--n", n, "Unknowns (grid side N for tomo)")->capture_default_str();
  app.add_option("--m", m, "Row count; below n truncates rows (0 keeps the square problem)");
  app.add_option("--delta", cfg.delta, "Relative noise level")->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "Range-finder tolerance")->capture_default_str();
  app.add_option("--blocksize", cfg.blocksize, "Range-finder block size")->capture_default_str();
  app.add_option("--seeds", seeds, "Comma-separated seeds")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join)
      ->capture_default_str();
  app.add_option("--selector", selector, "gcv, lcurve or fixed:<lambda>")->capture_default_str();
  app.add_option("--method", methods, "Comma-separated: gsvd tgsvd rgsvd_alg3 rgsvd_alg4 exact")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--gcv-rows", gcv_rows, "Row count in the randomized GCV: projected or ambient")
      ->capture_default_str();
  app.add_option("--out", cfg.output_path, "CSV report path (stdout when empty)");
  app.add_option("--dump-solutions", dump_dir, "Directory for x_true and solution vectors");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.problems = problems;
    cfg.n = n;
    if (m > 0) cfg.m = m;
    cfg.seeds = parse_seeds(seeds);
    cfg.selector = rgsvd::Selector::parse(selector);
    cfg.gcv_rows = rgsvd::parse_gcv_rows(gcv_rows);
    cfg.methods.clear();
    for (const auto& s : methods) cfg.methods.push_back(rgsvd::parse_bench_method(s));
    if (!dump_dir.empty()) cfg.dump_dir = dump_dir;
    cfg.validate();
  } catch (const rgsvd::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  }

  const auto records = rgsvd::run_benchmark(cfg);
  bool failed = false;
  std::cout << rgsvd::kReportHeader << '\n';
  for (const auto& r : records) {
    std::printf("%s,%s,%s,%.6g,%.6g,%.6g,%lld,%lld,%llu\n", r.problem.c_str(), r.method.c_str(),
                r.selector.c_str(), r.lambda, r.rel_error, r.wall_time_s,
                static_cast<long long>(r.l1), static_cast<long long>(r.l2),
                static_cast<unsigned long long>(r.seed));
    if (!r.ok()) {
      failed = true;
      std::cerr << "error: " << r.problem << " / " << r.method << " / seed " << r.seed << ": "
                << r.error << '\n';
    }
  }
  return failed ? 1 : 0;
}
