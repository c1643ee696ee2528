#include "rgsvd/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include "rgsvd/errors.hpp"
#include "rgsvd/io.hpp"
#include "rgsvd/sampling.hpp"

namespace rgsvd {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double select_lambda(const FilterModel& model, const Selector& selector) {
  switch (selector.kind) {
    case Selector::Kind::gcv: return gcv_lambda(model).lambda;
    case Selector::Kind::lcurve: return lcurve_lambda(model).lambda;
    case Selector::Kind::fixed: return selector.value;
  }
  return kNan;
}

GsvdFactors full_factors(const TikhonovProblem& prob) {
  return gsvd_numerical_rank(prob.n() <= GmpPair::kVerifyLimit
                                 ? GmpPair(prob.a, prob.l)
                                 : GmpPair::trusted(prob.a, prob.l));
}

// Generalized singular value at the truncation boundary, reported as the
// equivalent lambda of a TGSVD run.
double truncation_lambda(const GsvdFactors& f, Index kept) {
  const Index j = f.k() - kept;
  const Index z = f.zero_alpha_count();
  const double beta = f.beta_at(z + j);
  return beta > 0.0 ? f.alpha(j) / beta : std::numeric_limits<double>::infinity();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

const char* to_string(BenchMethod method) {
  switch (method) {
    case BenchMethod::gsvd: return "gsvd";
    case BenchMethod::tgsvd: return "tgsvd";
    case BenchMethod::rgsvd_alg3: return "rgsvd_alg3";
    case BenchMethod::rgsvd_alg4: return "rgsvd_alg4";
    case BenchMethod::exact: return "exact";
  }
  return "unknown";
}

BenchMethod parse_bench_method(const std::string& text) {
  for (auto m : {BenchMethod::gsvd, BenchMethod::tgsvd, BenchMethod::rgsvd_alg3,
                 BenchMethod::rgsvd_alg4, BenchMethod::exact}) {
    if (text == to_string(m)) return m;
  }
  throw ArgumentError("unknown method '" + text +
                      "' (expected gsvd, tgsvd, rgsvd_alg3, rgsvd_alg4 or exact)");
}

Selector Selector::parse(const std::string& text) {
  Selector s;
  if (text == "gcv") return s;
  if (text == "lcurve") {
    s.kind = Kind::lcurve;
    return s;
  }
  const std::string prefix = "fixed:";
  if (text.rfind(prefix, 0) == 0) {
    s.kind = Kind::fixed;
    try {
      s.value = io::parse_double(text.substr(prefix.size()));
    } catch (const IoError&) {
      throw ArgumentError("selector '" + text + "': malformed lambda");
    }
    if (!(s.value > 0.0) || !std::isfinite(s.value)) {
      throw ArgumentError("selector '" + text + "': lambda must be positive");
    }
    return s;
  }
  throw ArgumentError("unknown selector '" + text + "' (expected gcv, lcurve or fixed:<lambda>)");
}

std::string Selector::to_string() const {
  switch (kind) {
    case Kind::gcv: return "gcv";
    case Kind::lcurve: return "lcurve";
    case Kind::fixed: return "fixed:" + io::format_double(value);
  }
  return "unknown";
}

void BenchConfig::validate() const {
  if (problems.empty()) throw ArgumentError("bench config: no problems given");
  if (seeds.empty()) throw ArgumentError("bench config: no seeds given");
  if (methods.empty()) throw ArgumentError("bench config: no methods given");
  for (const auto& p : problems) {
    const auto& names = problem_names();
    if (std::find(names.begin(), names.end(), p) == names.end()) {
      throw ArgumentError("bench config: unknown problem '" + p + "'");
    }
  }
  if (n < 2) throw ArgumentError("bench config: n must be at least 2");
  if (m && *m < 1) throw ArgumentError("bench config: m must be positive");
  if (!(delta >= 0.0)) throw ArgumentError("bench config: delta must be nonnegative");
  if (!(epsilon > 0.0)) throw ArgumentError("bench config: epsilon must be positive");
  if (blocksize < 1) throw ArgumentError("bench config: blocksize must be positive");
}

std::uint64_t sampler_seed(std::uint64_t seed) { return mix64(seed ^ 0x73616d706c6572ULL); }

MethodResult run_method(const TikhonovProblem& prob, BenchMethod method, const BenchConfig& cfg,
                        std::uint64_t seed) {
  MethodResult out;
  BenchRecord& rec = out.record;
  rec.problem = prob.name;
  rec.method = to_string(method);
  rec.selector = cfg.selector.to_string();
  rec.seed = seed;

  try {
    const auto start = std::chrono::steady_clock::now();
    switch (method) {
      case BenchMethod::gsvd: {
        const GsvdFactors f = full_factors(prob);
        rec.lambda = select_lambda(filter_model(f, prob.b), cfg.selector);
        out.x = solve_gsvd(f, prob.b, rec.lambda).x;
        break;
      }
      case BenchMethod::tgsvd: {
        const GsvdFactors f = full_factors(prob);
        Index k = 0;
        switch (cfg.selector.kind) {
          case Selector::Kind::gcv: k = tgsvd_gcv(f, prob.b).k; break;
          case Selector::Kind::lcurve: k = tgsvd_lcurve(f, prob.b).k; break;
          case Selector::Kind::fixed: k = tgsvd_truncation_for_lambda(f, cfg.selector.value); break;
        }
        const RegularizedSolution sol = solve_tgsvd(f, prob.b, k);
        out.x = sol.x;
        rec.l1 = *sol.truncation;
        rec.lambda = truncation_lambda(f, *sol.truncation);
        break;
      }
      case BenchMethod::rgsvd_alg3:
      case BenchMethod::rgsvd_alg4: {
        const bool over = method == BenchMethod::rgsvd_alg3;
        if (over && prob.m() < prob.n()) {
          throw DimensionError("rgsvd_alg3 needs m >= n (got " + std::to_string(prob.m()) + "x" +
                               std::to_string(prob.n()) + ")");
        }
        if (!over && prob.m() >= prob.n()) {
          throw DimensionError("rgsvd_alg4 needs m < n (got " + std::to_string(prob.m()) + "x" +
                               std::to_string(prob.n()) + ")");
        }
        SamplerConfig sc;
        sc.epsilon = cfg.epsilon;
        sc.blocksize = cfg.blocksize;
        sc.seed = sampler_seed(seed);
        const ApproxGsvd approx = over ? rgsvd_overdetermined(prob.a, prob.l, sc)
                                       : rgsvd_underdetermined(prob.a, prob.l, sc);
        rec.l1 = approx.l1;
        rec.l2 = approx.l2;
        rec.lambda = select_lambda(filter_model(approx, prob.b, cfg.gcv_rows), cfg.selector);
        out.x = solve_rgsvd(approx, prob.b, rec.lambda, RgsvdSolvePath::filter).x;
        break;
      }
      case BenchMethod::exact: {
        if (cfg.selector.kind == Selector::Kind::fixed) {
          rec.lambda = cfg.selector.value;
        } else {
          rec.lambda = select_lambda(filter_model(full_factors(prob), prob.b), cfg.selector);
        }
        out.x = solve_exact(prob, rec.lambda).x;
        break;
      }
    }
    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.rel_error = prob.x_true ? relative_error(out.x, *prob.x_true) : kNan;
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.lambda = kNan;
    rec.rel_error = kNan;
    rec.wall_time_s = kNan;
    out.x = Vector();
  }
  return out;
}

void sort_records(std::vector<BenchRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const BenchRecord& a, const BenchRecord& b) {
    return std::tie(a.problem, a.method, a.seed) < std::tie(b.problem, b.method, b.seed);
  });
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  std::vector<BenchRecord> records;
  for (const auto& name : cfg.problems) {
    for (const auto seed : cfg.seeds) {
      TestProblemSpec spec;
      spec.name = name;
      spec.n = cfg.n;
      spec.m = cfg.m;
      spec.delta = cfg.delta;
      spec.seed = seed;

      TikhonovProblem prob;
      try {
        prob = generate(spec);
      } catch (const std::exception& e) {
        for (const auto method : cfg.methods) {
          BenchRecord rec;
          rec.problem = name;
          rec.method = to_string(method);
          rec.selector = cfg.selector.to_string();
          rec.seed = seed;
          rec.lambda = rec.rel_error = rec.wall_time_s = kNan;
          rec.error = e.what();
          records.push_back(rec);
        }
        continue;
      }

      std::filesystem::path dump;
      if (cfg.dump_dir) {
        dump = std::filesystem::path(*cfg.dump_dir) / (name + "_seed" + std::to_string(seed));
        if (prob.x_true) io::write_csv(dump / "x_true.csv", *prob.x_true);
      }
      for (const auto method : cfg.methods) {
        MethodResult res = run_method(prob, method, cfg, seed);
        if (cfg.dump_dir && res.record.ok()) {
          io::write_csv(dump / (std::string(to_string(method)) + ".csv"), res.x);
        }
        records.push_back(std::move(res.record));
      }
    }
  }
  sort_records(records);
  if (!cfg.output_path.empty()) emit_report(records, cfg.output_path);
  return records;
}

void emit_report(const std::vector<BenchRecord>& records, const std::filesystem::path& path) {
  if (records.empty()) throw ArgumentError("emit_report: no records");
  std::vector<BenchRecord> sorted = records;
  sort_records(sorted);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kReportHeader << '\n';
  for (const auto& r : sorted) {
    out << r.problem << ',' << r.method << ',' << r.selector << ','
        << io::format_double(r.lambda) << ',' << io::format_double(r.rel_error) << ','
        << io::format_double(r.wall_time_s) << ',' << r.l1 << ',' << r.l2 << ',' << r.seed
        << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<BenchRecord> read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) {
    throw IoError(path.string() + ": missing or unexpected header");
  }
  std::vector<BenchRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 9) throw IoError(path.string() + ": expected 9 fields in '" + line + "'");
    BenchRecord r;
    r.problem = f[0];
    r.method = f[1];
    r.selector = f[2];
    r.lambda = io::parse_double(f[3]);
    r.rel_error = io::parse_double(f[4]);
    r.wall_time_s = io::parse_double(f[5]);
    r.l1 = std::stoll(f[6]);
    r.l2 = std::stoll(f[7]);
    r.seed = std::stoull(f[8]);
    if (std::isnan(r.rel_error) && std::isnan(r.wall_time_s)) r.error = "error row";
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace rgsvd
