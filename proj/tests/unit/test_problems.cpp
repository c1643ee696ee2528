#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "rgsvd/dense.hpp"
#include "rgsvd/errors.hpp"
#include "rgsvd/problems.hpp"
#include "test_support.hpp"

using namespace rgsvd;
namespace support = rgsvd::support;

namespace {

struct Entry {
  Index i;
  Index j;
  double value;
};

struct Frozen {
  Discretization (*make)(Index);
  double rel_tol;
  std::vector<Entry> a;
  std::vector<std::pair<Index, double>> x;
};

// Values at n = 32 from independent adaptive quadrature of each kernel.
const std::map<std::string, Frozen>& frozen() {
  static const std::map<std::string, Frozen> table = {
      {"shaw",
       {shaw,
        1e-12,
        {{0, 0, 1.3751010548893722e-09},
         {3, 7, 0.002522109736561373},
         {12, 12, 0.05675040261762573},
         {20, 5, 0.1029800033725739},
         {31, 30, 1.3771432315506396e-07}},
        {{0, 0.12396223420615816}, {9, 0.9625640824524507}, {17, 0.5877865937898805},
         {31, 0.0881395224448988}}}},
      {"baart",
       {baart,
        1e-6,
        {{0, 0, 0.07114926771359553},
         {3, 7, 0.07884506753268303},
         {12, 12, 0.08536627723411977},
         {20, 5, 0.16453697464857153},
         {31, 30, 0.015050211381472176}},
        {{0, 0.015368128977199759}, {9, 0.251566782172827}, {17, 0.30981277174289484},
         {31, 0.015368128977199762}}}},
      {"deriv2",
       {deriv2,
        1e-12,
        {{0, 0, -0.00031789143880208326},
         {3, 7, -0.00261688232421875},
         {12, 12, -0.007275899251302082},
         {20, 5, -0.0019302368164062502},
         {31, 30, -0.00046539306640625}},
        {{0, 0.002762135864009951}, {9, 0.05248058141618907}, {17, 0.09667475524034828},
         {31, 0.1740145594326269}}}},
      {"foxgood",
       {foxgood,
        1e-12,
        {{0, 0, 0.0006905339660024879},
         {3, 7, 0.008082492850218188},
         {12, 12, 0.017263349150062196},
         {20, 5, 0.02072752468436633},
         {31, 30, 0.04281867435233155}},
        {{0, 0.015625}, {9, 0.296875}, {17, 0.546875}, {31, 0.984375}}}},
      {"gravity",
       {gravity,
        1e-12,
        {{0, 0, 0.5},
         {3, 7, 0.35777087639996635},
         {12, 12, 0.5},
         {20, 5, 0.05210665581111337},
         {31, 30, 0.4885060316128825}},
        {{0, 0.09807624449219832}, {9, 1.2816776993467494}, {17, 0.84403417133755},
         {31, 5.910416263771312e-05}}}},
      {"heat",
       {heat,
        1e-12,
        {{0, 0, 5.079293868746623e-07},
         {3, 7, 0.0},
         {12, 12, 5.079293868746623e-07},
         {20, 5, 0.01560703912978012},
         {31, 30, 0.004193686212138185}},
        {{0, 0.0732421875}, {9, 0.0011275793947331794}, {17, 0.0}, {31, 0.0}}}},
      {"phillips",
       {phillips,
        1e-12,
        {{0, 0, 0.7452055615374968},
         {3, 7, 0.375},
         {12, 12, 0.7452055615374968},
         {20, 5, 0.0},
         {31, 30, 0.717025341126341}},
        {{0, 0.0}, {9, 0.10646874105257917}, {17, 1.11827613033901}, {31, 0.0}}}},
  };
  return table;
}

void expect_close(double actual, double expected, double rel_tol, const std::string& what) {
  EXPECT_NEAR(actual, expected, rel_tol * std::max(std::abs(expected), 1e-300) + 1e-18) << what;
}

}  // namespace

class FrozenEntries : public ::testing::TestWithParam<std::string> {};

TEST_P(FrozenEntries, MatchIndependentQuadrature) {
  const auto& f = frozen().at(GetParam());
  const Discretization d = f.make(32);
  ASSERT_EQ(d.a.rows(), 32);
  ASSERT_EQ(d.a.cols(), 32);
  for (const auto& e : f.a) {
    expect_close(d.a(e.i, e.j), e.value, f.rel_tol,
                 "A(" + std::to_string(e.i) + "," + std::to_string(e.j) + ")");
  }
  for (const auto& [i, v] : f.x) {
    expect_close(d.x_true(i), v, f.rel_tol, "x(" + std::to_string(i) + ")");
  }
}

INSTANTIATE_TEST_SUITE_P(AllKernels, FrozenEntries,
                         ::testing::Values("shaw", "baart", "deriv2", "foxgood", "gravity",
                                           "heat", "phillips"));

TEST(Generators, ShawIsSymmetricAndIllConditioned) {
  const auto d = shaw(64);
  EXPECT_LE((d.a - d.a.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  const Vector s = singular_values(d.a);
  EXPECT_GT(s(0) / s(s.size() - 1), 1e15);
}

TEST(Generators, SizeRequirements) {
  EXPECT_THROW(shaw(6), ArgumentError);
  EXPECT_THROW(shaw(9), ArgumentError);
  EXPECT_THROW(heat(15), ArgumentError);
  EXPECT_THROW(phillips(18), ArgumentError);
  EXPECT_NO_THROW(phillips(16));
  EXPECT_NO_THROW(gravity(9));
}

TEST(Generators, DiscretePicardOnCleanData) {
  for (auto gen : {shaw, gravity, foxgood}) {
    const auto d = gen(256);
    const Vector b = d.a * d.x_true;
    const auto svd = thin_svd(d.a);
    const double xn = d.x_true.norm();
    for (Index i = 0; i < 20; ++i) {
      if (svd.sigma(i) < 1e-8 * svd.sigma(0)) break;
      EXPECT_LE(std::abs(svd.u.col(i).dot(b)) / svd.sigma(i), xn * (1 + 1e-6));
    }
  }
}

TEST(Generate, CleanDataIsExactProduct) {
  for (const std::string name : {"shaw", "heat", "gravity"}) {
    TestProblemSpec spec;
    spec.name = name;
    spec.n = 64;
    spec.delta = 1e-2;
    spec.seed = 7;
    const auto p = generate(spec);
    ASSERT_TRUE(p.b_clean && p.x_true);
    EXPECT_EQ((*p.b_clean - p.a * *p.x_true).norm(), 0.0);
    EXPECT_NEAR((p.b - *p.b_clean).norm(), 1e-2 * p.b_clean->norm(), 1e-12 * p.b_clean->norm());
    EXPECT_EQ(p.l.rows(), 63);
    EXPECT_EQ(p.name, name);
    EXPECT_NO_THROW(p.validate());
  }
}

TEST(Generate, RejectsBadSpecs) {
  TestProblemSpec spec;
  spec.name = "nope";
  spec.n = 16;
  EXPECT_THROW(generate(spec), ArgumentError);
  spec.name = "shaw";
  spec.n = 6;
  EXPECT_THROW(generate(spec), ArgumentError);
  spec.n = 16;
  spec.m = 20;
  EXPECT_THROW(generate(spec), ArgumentError);
  spec.m.reset();
  spec.delta = -1;
  EXPECT_THROW(generate(spec), ArgumentError);
  for (const auto& name : problem_names()) {
    EXPECT_NE(name, "");
  }
}

TEST(FirstDifference, ExamplesAndRank) {
  Matrix expected(2, 3);
  expected << 1, -1, 0, 0, 1, -1;
  EXPECT_EQ(first_difference(3), expected);
  Matrix two(1, 2);
  two << 1, -1;
  EXPECT_EQ(first_difference(2), two);
  EXPECT_THROW(first_difference(1), ArgumentError);
  const Matrix l = first_difference(40);
  const Vector s = singular_values(l);
  EXPECT_GT(s(s.size() - 1), 1e-3);
  EXPECT_LE((l * Vector::Ones(40)).norm(), 0.0);
}

TEST(AddNoise, NormIdentityAndDeterminism) {
  const Vector b = support::random_vector(100, 5);
  for (double delta : {1e-3, 1e-2, 0.5}) {
    const Vector noisy = add_noise(b, delta, 11);
    EXPECT_NEAR((noisy - b).norm(), delta * b.norm(), 1e-12 * b.norm());
  }
  EXPECT_EQ(add_noise(b, 0.0, 3), b);
  EXPECT_EQ(add_noise(b, 1e-2, 3), add_noise(b, 1e-2, 3));
  EXPECT_NE(add_noise(b, 1e-2, 3), add_noise(b, 1e-2, 4));
  EXPECT_THROW(add_noise(b, -1e-3, 1), ArgumentError);
  EXPECT_THROW(add_noise(b, INFINITY, 1), ArgumentError);
}

TEST(MakeUnderdetermined, KeepsLeadingRows) {
  TestProblemSpec spec;
  spec.name = "shaw";
  spec.n = 64;
  spec.seed = 2;
  const auto full = generate(spec);
  const auto under = make_underdetermined(full, 32, 2);
  EXPECT_EQ(under.m(), 32);
  EXPECT_EQ(under.n(), 64);
  EXPECT_EQ(under.a, full.a.topRows(32));
  EXPECT_EQ(under.b, full.b.head(32));
  EXPECT_EQ(*under.b_clean, full.b_clean->head(32));
  EXPECT_EQ(*under.x_true, *full.x_true);
  EXPECT_EQ(under.l, full.l);
  EXPECT_EQ(under.metadata.count("construction"), 1u);
  EXPECT_NO_THROW(under.validate());
  EXPECT_THROW(make_underdetermined(full, 64, 2), ArgumentError);
  EXPECT_THROW(make_underdetermined(full, 0, 2), ArgumentError);

  spec.m = 32;
  const auto via_spec = generate(spec);
  EXPECT_EQ(via_spec.a, under.a);
  EXPECT_EQ(via_spec.b, under.b);
}

TEST(TraceRay, HorizontalRaysThroughTwoByTwoGrid) {
  for (const auto& [py, first, second] :
       {std::tuple{-0.5, Index{1}, Index{3}}, std::tuple{0.5, Index{0}, Index{2}}}) {
    std::map<Index, double> by_pixel;
    for (const auto& [pix, len] : trace_ray(2, -5.0, py, 1.0, 0.0)) by_pixel[pix] += len;
    ASSERT_EQ(by_pixel.size(), 2u);
    EXPECT_NEAR(by_pixel.at(first), 1.0, 1e-14);
    EXPECT_NEAR(by_pixel.at(second), 1.0, 1e-14);
  }
}

TEST(TraceRay, DiagonalAndMissingRays) {
  double total = 0.0;
  for (const auto& [pix, len] : trace_ray(4, -3.0, -3.0, 1.0, 1.0)) {
    EXPECT_GT(len, 0.0);
    EXPECT_LT(pix, 16);
    total += len;
  }
  EXPECT_NEAR(total, 4.0 * std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(trace_ray(4, -10.0, 5.0, 1.0, 0.0).empty());
  EXPECT_THROW(trace_ray(4, 0.0, 0.0, 0.0, 0.0), ArgumentError);
}

TEST(ParallelTomo, GeometryProperties) {
  const Index n = 10;
  const auto t = parallel_tomo(n, {0.0, 30.0, 90.0, 135.0}, 2 * n, 1);
  EXPECT_EQ(t.op.rows, 4 * 2 * n);
  EXPECT_EQ(t.op.cols, n * n);
  EXPECT_NO_THROW(t.op.validate());
  const Matrix a = t.op.to_dense();
  EXPECT_GE(a.minCoeff(), 0.0);
  for (Index i = 0; i < a.rows(); ++i) {
    EXPECT_LE(a.row(i).sum(), std::sqrt(2.0) * n + 1e-12);
  }
  EXPECT_EQ(t.phantom.size(), n * n);
  EXPECT_GE(t.phantom.minCoeff(), 0.0);
  EXPECT_LE(t.phantom.maxCoeff(), 1.0);
  EXPECT_GT(t.phantom.maxCoeff(), 0.0);
  EXPECT_THROW(parallel_tomo(1, {0.0}, 4), ArgumentError);
  EXPECT_THROW(parallel_tomo(4, {}, 4), ArgumentError);
}

TEST(ParallelTomo, FullSizeProblem) {
  TestProblemSpec spec;
  spec.name = "tomo";
  spec.n = 50;
  spec.delta = 0.0;
  const auto p = generate(spec);
  EXPECT_EQ(p.m(), 3000);
  EXPECT_EQ(p.n(), 2500);
  EXPECT_EQ(p.l.rows(), 2499);
  EXPECT_EQ(p.b, *p.b_clean);
  EXPECT_EQ(p.metadata.at("rays"), "200");
}

TEST(SparseOperator, ValidateCatchesBadEntries) {
  SparseOperator op{2, 2, {{0, 0, 1.0}, {1, 1, 2.0}}};
  EXPECT_NO_THROW(op.validate());
  EXPECT_EQ(op.to_dense(), (Matrix(2, 2) << 1, 0, 0, 2).finished());
  op.triplets.push_back({2, 0, 1.0});
  EXPECT_THROW(op.validate(), DimensionError);
  op.triplets.back() = {0, 0, 3.0};
  EXPECT_THROW(op.validate(), ArgumentError);
  op.triplets.back() = {1, 0, NAN};
  EXPECT_THROW(op.validate(), FiniteError);
}

TEST(SyntheticPhantom, SeededAndBounded) {
  EXPECT_EQ(synthetic_phantom(16, 3), synthetic_phantom(16, 3));
  EXPECT_NE(synthetic_phantom(16, 3), synthetic_phantom(16, 4));
}

TEST(ProblemBundle, RoundTrip) {
  const auto dir = support::scratch_dir("bundle");
  TestProblemSpec spec;
  spec.name = "gravity";
  spec.n = 24;
  spec.seed = 5;
  const auto p = generate(spec);
  for (bool sparse : {false, true}) {
    const auto sub = dir / (sparse ? "sparse" : "dense");
    save_problem_bundle(sub, p, sparse);
    const auto q = load_problem_bundle(sub);
    EXPECT_EQ(q.name, "gravity");
    EXPECT_EQ(q.a, p.a);
    EXPECT_EQ(q.l, p.l);
    EXPECT_EQ(q.b, p.b);
    EXPECT_EQ(*q.x_true, *p.x_true);
    EXPECT_EQ(*q.b_clean, *p.b_clean);
    EXPECT_EQ(q.delta, p.delta);
    EXPECT_EQ(q.metadata.at("seed"), "5");
  }
}

TEST(ProblemBundle, DefaultsAndInconsistency) {
  const auto dir = support::scratch_dir("bundle_min");
  const auto d = shaw(16);
  io::write_matrix_market(dir / "a.mtx", d.a, io::MarketFormat::array);
  io::write_csv(dir / "b.csv", Vector(d.a * d.x_true));
  const auto p = load_problem_bundle(dir);
  EXPECT_EQ(p.l, first_difference(16));
  EXPECT_EQ(p.name, "bundle_min");
  EXPECT_FALSE(p.x_true.has_value());
  io::write_csv(dir / "x_true.csv", Vector(Vector::Ones(5)));
  EXPECT_THROW(load_problem_bundle(dir), IoError);
}
