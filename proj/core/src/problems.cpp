#include "rgsvd/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "rgsvd/errors.hpp"
#include "rgsvd/sampling.hpp"

namespace rgsvd {

namespace {

constexpr double kPi = std::numbers::pi;

void require_size(Index n, Index multiple, const char* name) {
  if (n < 8) throw ArgumentError(std::string(name) + ": n must be at least 8");
  if (n % multiple != 0) {
    throw ArgumentError(std::string(name) + ": n must be a multiple of " +
                        std::to_string(multiple));
  }
}

double sinc(double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; }

std::uint64_t phantom_seed_for(std::uint64_t seed) { return mix64(seed ^ 0x7068616e746f6dULL); }

}  // namespace

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {"baart",  "deriv2",   "foxgood", "gravity",
                                                 "heat",   "phillips", "shaw",    "tomo"};
  return names;
}

Discretization shaw(Index n) {
  require_size(n, 2, "shaw");
  const double h = kPi / static_cast<double>(n);
  Vector co(n), psi(n), t(n);
  for (Index i = 0; i < n; ++i) {
    t(i) = -kPi / 2 + (static_cast<double>(i) + 0.5) * h;
    co(i) = std::cos(t(i));
    psi(i) = kPi * std::sin(t(i));
  }
  Discretization d;
  d.a.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      const double v = (co(i) + co(j)) * sinc(psi(i) + psi(j));
      d.a(i, j) = h * v * v;
      d.a(j, i) = d.a(i, j);
    }
  }
  d.x_true.resize(n);
  for (Index i = 0; i < n; ++i) {
    d.x_true(i) = 2.0 * std::exp(-6.0 * std::pow(t(i) - 0.8, 2)) +
                  std::exp(-2.0 * std::pow(t(i) + 0.5, 2));
  }
  return d;
}

Discretization baart(Index n) {
  require_size(n, 1, "baart");
  const double hs = kPi / (2.0 * static_cast<double>(n));
  const double ht = kPi / static_cast<double>(n);
  const double c = 1.0 / (3.0 * std::numbers::sqrt2);

  // Exact integral over s-cell i of exp(s * co).
  auto cell = [&](Index i, double co) {
    const double s0 = static_cast<double>(i) * hs;
    const double s1 = s0 + hs;
    if (std::abs(co) < 1e-15) return hs;
    return (std::exp(s1 * co) - std::exp(s0 * co)) / co;
  };

  Discretization d;
  d.a.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    const double co_left = std::cos(static_cast<double>(j) * ht);
    const double co_mid = std::cos((static_cast<double>(j) + 0.5) * ht);
    // cos(pi / 2) is not exactly zero in floating point; use the limit.
    const double co_right = 2 * (j + 1) == n ? 0.0 : std::cos(static_cast<double>(j + 1) * ht);
    for (Index i = 0; i < n; ++i) {
      d.a(i, j) = c * (cell(i, co_left) + 4.0 * cell(i, co_mid) + cell(i, co_right));
    }
  }
  d.x_true.resize(n);
  for (Index j = 0; j < n; ++j) {
    d.x_true(j) = (std::cos(static_cast<double>(j) * ht) -
                   std::cos(static_cast<double>(j + 1) * ht)) /
                  std::sqrt(ht);
  }
  return d;
}

Discretization deriv2(Index n) {
  require_size(n, 1, "deriv2");
  const double h = 1.0 / static_cast<double>(n);
  const double h2 = h * h;
  Discretization d;
  d.a.resize(n, n);
  for (Index i1 = 1; i1 <= n; ++i1) {
    const double i = static_cast<double>(i1);
    d.a(i1 - 1, i1 - 1) = h2 * ((i * i - i + 0.25) * h - (i - 2.0 / 3.0));
    for (Index j1 = 1; j1 < i1; ++j1) {
      const double v = h2 * (static_cast<double>(j1) - 0.5) * ((i - 0.5) * h - 1.0);
      d.a(i1 - 1, j1 - 1) = v;
      d.a(j1 - 1, i1 - 1) = v;
    }
  }
  d.x_true.resize(n);
  const double h32 = h * std::sqrt(h);
  for (Index i = 0; i < n; ++i) d.x_true(i) = h32 * (static_cast<double>(i) + 0.5);
  return d;
}

Discretization foxgood(Index n) {
  require_size(n, 1, "foxgood");
  const double h = 1.0 / static_cast<double>(n);
  Vector t(n);
  for (Index i = 0; i < n; ++i) t(i) = h * (static_cast<double>(i) + 0.5);
  Discretization d;
  d.a.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) d.a(i, j) = h * std::sqrt(t(i) * t(i) + t(j) * t(j));
  }
  d.x_true = t;
  return d;
}

Discretization gravity(Index n) {
  require_size(n, 1, "gravity");
  const double dt = 1.0 / static_cast<double>(n);
  const double depth = 0.25;
  Vector t(n);
  for (Index i = 0; i < n; ++i) t(i) = dt * (static_cast<double>(i) + 0.5);
  Discretization d;
  d.a.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double diff = t(i) - t(j);
      d.a(i, j) = dt * depth / std::pow(depth * depth + diff * diff, 1.5);
    }
  }
  d.x_true.resize(n);
  for (Index i = 0; i < n; ++i) {
    d.x_true(i) = std::sin(kPi * t(i)) + 0.5 * std::sin(2.0 * kPi * t(i));
  }
  return d;
}

Discretization heat(Index n) {
  require_size(n, 2, "heat");
  const double kappa = 1.0;
  const double h = 1.0 / static_cast<double>(n);
  const double c = h / (2.0 * kappa * std::sqrt(kPi));
  const double dd = 1.0 / (4.0 * kappa * kappa);
  Vector k(n);
  for (Index i = 0; i < n; ++i) {
    const double t = h / 2.0 + static_cast<double>(i) * h;
    k(i) = c * std::pow(t, -1.5) * std::exp(-dd / t);
  }
  Discretization d;
  d.a = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) d.a(i, j) = k(i - j);
  }
  d.x_true = Vector::Zero(n);
  for (Index i1 = 1; i1 <= n / 2; ++i1) {
    const double ti = static_cast<double>(i1) * 20.0 / static_cast<double>(n);
    double v;
    if (ti < 2.0) {
      v = 0.75 * ti * ti / 4.0;
    } else if (ti < 3.0) {
      v = 0.75 + (ti - 2.0) * (3.0 - ti);
    } else {
      v = 0.75 * std::exp(-(ti - 3.0) * 2.0);
    }
    d.x_true(i1 - 1) = v;
  }
  return d;
}

Discretization phillips(Index n) {
  require_size(n, 4, "phillips");
  const double h = 12.0 / static_cast<double>(n);
  const Index n4 = n / 4;
  const double w = 4.0 * kPi / static_cast<double>(n);
  const double scale = 9.0 / (h * kPi * kPi);
  Vector r = Vector::Zero(n);
  for (Index k = 0; k < n4; ++k) {
    const double kk = static_cast<double>(k);
    r(k) = h + scale * (2.0 * std::cos(kk * w) - std::cos((kk - 1.0) * w) -
                        std::cos((kk + 1.0) * w));
  }
  r(n4) = h / 2.0 + scale * (std::cos(w) - 1.0);

  Discretization d;
  d.a.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) d.a(i, j) = r(std::abs(i - j));
  }

  // Cell averages (times sqrt(h)) of 1 + cos(pi t / 3) on |t| < 3.
  const double c = kPi / 3.0;
  d.x_true = Vector::Zero(n);
  for (Index k = 0; k < n4; ++k) {
    const double t0 = static_cast<double>(k) * h;
    const double t1 = t0 + h;
    const double v = (h + (std::sin(c * t1) - std::sin(c * t0)) / c) / std::sqrt(h);
    d.x_true(2 * n4 + k) = v;
    d.x_true(2 * n4 - 1 - k) = v;
  }
  return d;
}

Matrix first_difference(Index n) {
  if (n < 2) throw ArgumentError("first_difference: n must be at least 2");
  Matrix l = Matrix::Zero(n - 1, n);
  for (Index i = 0; i < n - 1; ++i) {
    l(i, i) = 1.0;
    l(i, i + 1) = -1.0;
  }
  return l;
}

Vector add_noise(const Vector& b, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw ArgumentError("add_noise: delta must be a finite nonnegative number");
  }
  const double b_norm = b.norm();
  if (delta == 0.0 || b_norm == 0.0) return b;
  CounterRng rng(seed);
  Vector zeta(b.size());
  for (Index i = 0; i < b.size(); ++i) zeta(i) = rng.next_normal();
  return b + (delta * b_norm / zeta.norm()) * zeta;
}

namespace {

TikhonovProblem assemble(std::string name, Discretization d, double delta, std::uint64_t seed) {
  TikhonovProblem prob;
  prob.name = std::move(name);
  prob.a = std::move(d.a);
  prob.x_true = std::move(d.x_true);
  prob.b_clean = prob.a * *prob.x_true;
  prob.l = first_difference(prob.a.cols());
  prob.delta = delta;
  prob.b = add_noise(*prob.b_clean, delta, seed);
  prob.metadata["seed"] = std::to_string(seed);
  return prob;
}

}  // namespace

TikhonovProblem generate(const TestProblemSpec& spec) {
  if (!(spec.delta >= 0.0)) throw ArgumentError("generate: delta must be nonnegative");
  const std::string& name = spec.name;
  Discretization d;
  if (name == "shaw") {
    d = shaw(spec.n);
  } else if (name == "baart") {
    d = baart(spec.n);
  } else if (name == "deriv2") {
    d = deriv2(spec.n);
  } else if (name == "foxgood") {
    d = foxgood(spec.n);
  } else if (name == "gravity") {
    d = gravity(spec.n);
  } else if (name == "heat") {
    d = heat(spec.n);
  } else if (name == "phillips") {
    d = phillips(spec.n);
  } else if (name == "tomo") {
    if (spec.n < 2) throw ArgumentError("tomo: grid side must be at least 2");
    std::vector<double> angles;
    for (int deg = 0; deg < 180; deg += 12) angles.push_back(deg);
    TomographyProblem t =
        parallel_tomo(spec.n, angles, 4 * spec.n, phantom_seed_for(spec.seed));
    d.a = t.op.to_dense();
    d.x_true = std::move(t.phantom);
  } else {
    throw ArgumentError("generate: unknown problem '" + name + "'");
  }

  TikhonovProblem prob = assemble(name, std::move(d), spec.delta, spec.seed);
  if (name == "tomo") {
    prob.metadata["grid"] = std::to_string(spec.n);
    prob.metadata["angles_deg"] = "0:12:179";
    prob.metadata["rays"] = std::to_string(4 * spec.n);
  }
  if (spec.m) {
    if (*spec.m > prob.m()) {
      throw ArgumentError("generate: m = " + std::to_string(*spec.m) + " exceeds " +
                          std::to_string(prob.m()) + " available rows");
    }
    if (*spec.m < prob.m()) prob = make_underdetermined(prob, *spec.m, spec.seed);
  }
  return prob;
}

TikhonovProblem make_underdetermined(const TikhonovProblem& prob, Index m, std::uint64_t seed) {
  if (m >= prob.n()) {
    throw ArgumentError("make_underdetermined: m = " + std::to_string(m) +
                        " must be below n = " + std::to_string(prob.n()));
  }
  if (m < 1 || m > prob.m()) throw ArgumentError("make_underdetermined: m out of range");
  TikhonovProblem out = prob;
  out.a = prob.a.topRows(m);
  out.b = prob.b.head(m);
  if (prob.b_clean) out.b_clean = prob.b_clean->head(m);
  out.metadata["construction"] = "row truncation: first " + std::to_string(m) + " of " +
                                 std::to_string(prob.m()) + " rows";
  out.metadata["truncation_seed"] = std::to_string(seed);
  return out;
}

void SparseOperator::validate() const {
  if (rows < 0 || cols < 0) throw DimensionError("SparseOperator: negative size");
  std::set<std::pair<Index, Index>> seen;
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw DimensionError("SparseOperator: entry (" + std::to_string(t.row) + ", " +
                           std::to_string(t.col) + ") out of range");
    }
    if (!std::isfinite(t.value)) throw FiniteError("SparseOperator: non-finite value");
    if (!seen.insert({t.row, t.col}).second) {
      throw ArgumentError("SparseOperator: duplicate entry (" + std::to_string(t.row) + ", " +
                          std::to_string(t.col) + ")");
    }
  }
}

Matrix SparseOperator::to_dense() const {
  Matrix m = Matrix::Zero(rows, cols);
  for (const auto& t : triplets) m(t.row, t.col) += t.value;
  return m;
}

std::vector<std::pair<Index, double>> trace_ray(Index n_grid, double px, double py, double dx,
                                                double dy) {
  if (n_grid < 1) throw ArgumentError("trace_ray: n_grid must be positive");
  const double norm = std::hypot(dx, dy);
  if (!(norm > 0.0)) throw ArgumentError("trace_ray: zero direction");
  dx /= norm;
  dy /= norm;
  const double half = static_cast<double>(n_grid) / 2.0;
  const double tol = 1e-10;

  struct Crossing {
    double s, x, y;
  };
  std::vector<Crossing> pts;
  auto inside = [&](double x, double y) {
    return x >= -half - tol && x <= half + tol && y >= -half - tol && y <= half + tol;
  };
  for (Index k = 0; k <= n_grid; ++k) {
    const double line = -half + static_cast<double>(k);
    if (std::abs(dx) > 1e-14) {
      const double s = (line - px) / dx;
      const double y = py + s * dy;
      if (inside(line, y)) pts.push_back({s, line, y});
    }
    if (std::abs(dy) > 1e-14) {
      const double s = (line - py) / dy;
      const double x = px + s * dx;
      if (inside(x, line)) pts.push_back({s, x, line});
    }
  }
  std::sort(pts.begin(), pts.end(), [](const Crossing& a, const Crossing& b) { return a.s < b.s; });

  std::vector<Crossing> unique;
  for (const auto& p : pts) {
    if (!unique.empty() && std::abs(p.x - unique.back().x) <= tol &&
        std::abs(p.y - unique.back().y) <= tol) {
      continue;
    }
    unique.push_back(p);
  }

  auto on_line = [](double v) { return std::abs(v - std::round(v)) < 1e-9; };
  std::vector<std::pair<Index, double>> out;
  for (std::size_t i = 0; i + 1 < unique.size(); ++i) {
    const double len = std::hypot(unique[i + 1].x - unique[i].x, unique[i + 1].y - unique[i].y);
    if (len <= tol) continue;
    const double cx = 0.5 * (unique[i].x + unique[i + 1].x) + half;
    const double cy = 0.5 * (unique[i].y + unique[i + 1].y) + half;
    Index col;
    if (on_line(cx)) {
      col = std::max<Index>(static_cast<Index>(std::llround(cx)) - 1, 0);
    } else {
      col = static_cast<Index>(std::floor(cx));
    }
    Index ycell = on_line(cy) ? static_cast<Index>(std::llround(cy))
                              : static_cast<Index>(std::floor(cy));
    col = std::clamp<Index>(col, 0, n_grid - 1);
    ycell = std::clamp<Index>(ycell, 0, n_grid - 1);
    const Index row = n_grid - 1 - ycell;
    out.emplace_back(col * n_grid + row, len);
  }
  return out;
}

TomographyProblem parallel_tomo(Index n_grid, const std::vector<double>& angles_deg, Index rays,
                                std::uint64_t phantom_seed) {
  if (n_grid < 2) throw ArgumentError("parallel_tomo: n_grid must be at least 2");
  if (rays < 1) throw ArgumentError("parallel_tomo: need at least one ray");
  if (angles_deg.empty()) throw ArgumentError("parallel_tomo: no angles");

  const double width = std::numbers::sqrt2 * static_cast<double>(n_grid);
  TomographyProblem out;
  out.op.rows = static_cast<Index>(angles_deg.size()) * rays;
  out.op.cols = n_grid * n_grid;
  for (std::size_t a = 0; a < angles_deg.size(); ++a) {
    if (!std::isfinite(angles_deg[a])) throw ArgumentError("parallel_tomo: non-finite angle");
    const double theta = angles_deg[a] * kPi / 180.0;
    const double ct = std::cos(theta), st = std::sin(theta);
    for (Index j = 0; j < rays; ++j) {
      const double offset =
          rays == 1 ? 0.0
                    : -width / 2.0 + width * static_cast<double>(j) / static_cast<double>(rays - 1);
      const Index row = static_cast<Index>(a) * rays + j;
      for (const auto& [col, len] : trace_ray(n_grid, offset * ct, offset * st, -st, ct)) {
        out.op.triplets.push_back({row, col, len});
      }
    }
  }
  out.phantom = synthetic_phantom(n_grid, phantom_seed);
  return out;
}

Vector synthetic_phantom(Index n_grid, std::uint64_t seed) {
  if (n_grid < 1) throw ArgumentError("synthetic_phantom: n_grid must be positive");
  const double side = static_cast<double>(n_grid);
  const double half = side / 2.0;
  CounterRng rng(seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_unit(); };

  struct Shape {
    bool disk;
    double cx, cy, sx, sy, value;
  };
  std::vector<Shape> shapes(8);
  for (auto& s : shapes) {
    s.disk = rng.next_unit() < 0.5;
    s.cx = uniform(-0.35 * side, 0.35 * side);
    s.cy = uniform(-0.35 * side, 0.35 * side);
    s.sx = uniform(0.05 * side, 0.2 * side);
    s.sy = s.disk ? s.sx : uniform(0.05 * side, 0.2 * side);
    s.value = uniform(0.3, 1.0);
  }

  Vector img = Vector::Zero(n_grid * n_grid);
  for (Index col = 0; col < n_grid; ++col) {
    for (Index row = 0; row < n_grid; ++row) {
      const double x = -half + static_cast<double>(col) + 0.5;
      const double y = half - static_cast<double>(row) - 0.5;
      double v = 0.0;
      for (const auto& s : shapes) {
        const double ux = (x - s.cx) / s.sx, uy = (y - s.cy) / s.sy;
        const bool hit = s.disk ? ux * ux + uy * uy <= 1.0 : std::abs(ux) <= 1.0 && std::abs(uy) <= 1.0;
        if (hit) v = std::max(v, s.value);
      }
      img(col * n_grid + row) = v;
    }
  }
  return img;
}

void save_problem_bundle(const std::filesystem::path& dir, const TikhonovProblem& prob,
                         bool sparse) {
  std::filesystem::create_directories(dir);
  const auto format = sparse ? io::MarketFormat::coordinate : io::MarketFormat::array;
  io::write_matrix_market(dir / "a.mtx", prob.a, format);
  io::write_matrix_market(dir / "l.mtx", prob.l, io::MarketFormat::coordinate);
  io::write_csv(dir / "b.csv", prob.b);
  if (prob.x_true) io::write_csv(dir / "x_true.csv", *prob.x_true);
  if (prob.b_clean) io::write_csv(dir / "b_clean.csv", *prob.b_clean);
  io::KeyValues meta = {{"name", prob.name},
                        {"m", std::to_string(prob.m())},
                        {"n", std::to_string(prob.n())},
                        {"delta", io::format_double(prob.delta)}};
  for (const auto& [k, v] : prob.metadata) meta.emplace_back(k, v);
  io::write_key_values(dir / "meta.csv", meta);
}

TikhonovProblem load_problem_bundle(const std::filesystem::path& dir) {
  TikhonovProblem prob;
  prob.a = io::read_matrix_market(dir / "a.mtx");
  prob.b = io::read_csv_vector(dir / "b.csv");
  prob.l = std::filesystem::exists(dir / "l.mtx") ? io::read_matrix_market(dir / "l.mtx")
                                                  : first_difference(prob.a.cols());
  if (std::filesystem::exists(dir / "x_true.csv")) {
    prob.x_true = io::read_csv_vector(dir / "x_true.csv");
  }
  if (std::filesystem::exists(dir / "b_clean.csv")) {
    prob.b_clean = io::read_csv_vector(dir / "b_clean.csv");
  }
  prob.name = dir.filename().string();
  if (std::filesystem::exists(dir / "meta.csv")) {
    for (const auto& [k, v] : io::read_key_values(dir / "meta.csv")) {
      if (k == "name") {
        prob.name = v;
      } else if (k == "delta") {
        prob.delta = io::parse_double(v);
      } else if (k != "m" && k != "n") {
        prob.metadata[k] = v;
      }
    }
  }
  if (prob.a.cols() != prob.l.cols() || prob.b.size() != prob.a.rows() ||
      (prob.x_true && prob.x_true->size() != prob.a.cols())) {
    throw IoError(dir.string() + ": bundle components have inconsistent sizes");
  }
  return prob;
}

}  // namespace rgsvd
