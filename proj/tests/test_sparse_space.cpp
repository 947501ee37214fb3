#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "sgdg/projection.hpp"
#include "sgdg/sparse_function.hpp"
#include "sgdg/sparse_layout.hpp"
#include "test_support.hpp"

using namespace sgdg;

namespace {

std::int64_t binomial(int n, int r) {
  std::int64_t v = 1;
  for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
  return v;
}

// Brute-force count of valid basis ids.
std::int64_t enumerate_dofs(int n, int k, int d) {
  std::int64_t count = 0;
  for (const auto& l : enumerate_levels(n, d)) {
    std::int64_t c = 1;
    for (int m = 0; m < d; ++m) c *= elements_at_level(l.levels[m]) * (k + 1);
    count += c;
  }
  return count;
}

}  // namespace

TEST_CASE("enumerate_levels counts and order") {
  CHECK(enumerate_levels(3, 2).size() == 10);
  const auto z = enumerate_levels(0, 4);
  REQUIRE(z.size() == 1);
  CHECK(z[0].levels == std::vector<int>{0, 0, 0, 0});
  const auto l23 = enumerate_levels(2, 3);
  CHECK(l23.size() == 10);
  CHECK(std::find(l23.begin(), l23.end(), MultiIndex{{1, 1, 0}}) != l23.end());
  for (int d = 1; d <= 5; ++d) {
    for (int n = 0; n <= 8; ++n) {
      const auto ls = enumerate_levels(n, d);
      CHECK(static_cast<std::int64_t>(ls.size()) == binomial(n + d, d));
      CHECK(std::is_sorted(ls.begin(), ls.end()));
      for (const auto& l : ls) CHECK(l.l1() <= n);
    }
  }
  const MultiIndex m{{3, 0, 2}};
  CHECK(m.l1() == 5);
  CHECK(m.linf() == 3);
}

TEST_CASE("dof counts of the published tables") {
  struct Row {
    int n, k, d;
    std::int64_t dofs;
  };
  // Linear advection, solid rotation and Vlasov tables.
  const Row rows[] = {
      {3, 1, 2, 80},      {4, 1, 2, 192},     {5, 1, 2, 448},      {6, 1, 2, 1024},    {7, 1, 2, 2304},
      {3, 1, 3, 304},     {4, 1, 3, 832},     {5, 1, 3, 2176},     {6, 1, 3, 5504},    {7, 1, 3, 13568},
      {3, 1, 4, 1008},    {4, 1, 4, 3072},    {5, 1, 4, 8832},     {6, 1, 4, 24320},   {7, 1, 4, 64768},
      {3, 2, 2, 180},     {4, 2, 2, 432},     {5, 2, 2, 1008},     {6, 2, 2, 2304},    {7, 2, 2, 5184},
      {3, 2, 3, 1026},    {4, 2, 3, 2808},    {5, 2, 3, 7344},     {6, 2, 3, 18576},   {7, 2, 3, 45792},
      {3, 2, 4, 5103},    {4, 2, 4, 15552},   {5, 2, 4, 44712},    {6, 2, 4, 123120},  {7, 2, 4, 327888},
      {3, 3, 2, 320},     {4, 3, 2, 768},     {5, 3, 2, 1792},     {6, 3, 2, 4096},    {7, 3, 2, 9216},
      {3, 3, 3, 2432},    {4, 3, 3, 6656},    {5, 3, 3, 17408},    {6, 3, 3, 44032},   {7, 3, 3, 108544},
      {3, 3, 4, 16128},   {4, 3, 4, 49152},   {5, 3, 4, 141312},   {6, 3, 4, 389120},  {7, 3, 4, 1036288},
      {8, 1, 2, 5120},    {9, 1, 2, 11264},   {8, 1, 3, 32768},    {9, 1, 3, 77824},   {8, 2, 2, 11520},
      {9, 2, 2, 25344},   {8, 2, 3, 110592},  {9, 2, 3, 262656},   {8, 3, 2, 20480},   {8, 3, 3, 262144},
      {9, 3, 2, 45056},
  };
  for (const auto& r : rows) {
    CAPTURE(r.n);
    CAPTURE(r.k);
    CAPTURE(r.d);
    CHECK(dof_count(r.n, r.k, r.d) == r.dofs);
  }
}

TEST_CASE("dof_count identities") {
  for (int k = 1; k <= 3; ++k) {
    for (int n = 0; n <= 6; ++n) {
      CHECK(dof_count(n, k, 1) == (std::int64_t{1} << n) * (k + 1));
      for (int d = 1; d <= 4; ++d) CHECK(dof_count(n, k, d) == enumerate_dofs(n, k, d));
    }
    for (int d = 1; d <= 4; ++d) CHECK(dof_count(0, k, d) == static_cast<std::int64_t>(std::pow(k + 1, d)));
  }
}

TEST_CASE("layout elements and fibers") {
  for (int d = 1; d <= 4; ++d) {
    for (int n = 0; n <= 5; ++n) {
      const SparseLayout layout(n, d);
      CHECK(static_cast<std::int64_t>(layout.num_elements()) == dof_count(n, 0, d));
      std::vector<int> pos(d);
      for (int e = 0; e < layout.num_elements(); ++e) {
        CHECK(layout.level_sum(e) <= n);
        for (int m = 0; m < d; ++m) pos[m] = layout.position(e, m);
        CHECK(layout.element_index(pos) == e);
      }
      for (int m = 0; m < d; ++m) {
        std::vector<int> seen(layout.num_elements(), 0);
        for (const auto& f : layout.fibers(m)) {
          const auto ids = layout.fiber_elements(m, f);
          for (std::size_t p = 0; p < ids.size(); ++p) {
            CHECK(layout.position(ids[p], m) == static_cast<int>(p));
            ++seen[ids[p]];
          }
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
      }
    }
  }
}

TEST_CASE("basis id access") {
  auto u = SparseGridFunction(SparseLayout::make(3, 2), std::make_shared<const Basis1d>(1), unit_box(2));
  const BasisId id{{{2, 1}}, {1, 0}, {1, 0}};
  u.set_coefficient(id, 2.5);
  CHECK(u.coefficient(id) == 2.5);
  CHECK_THROWS_AS(u.coefficient(BasisId{{{3, 1}}, {0, 0}, {0, 0}}), std::out_of_range);
  CHECK_THROWS_AS(u.coefficient(BasisId{{{1, 1}}, {1, 0}, {0, 0}}), std::out_of_range);
  CHECK_THROWS_AS(u.coefficient(BasisId{{{1, 1}}, {0, 0}, {2, 0}}), std::out_of_range);
}

TEST_CASE("eval_point examples") {
  const auto layout = SparseLayout::make(4, 3);
  const auto basis = std::make_shared<const Basis1d>(2);
  const Box box{{-1.0, 2.0}, {0.0, 1.0}, {3.0, 5.0}};
  const auto one = project([](std::span<const double>) { return 1.0; }, layout, basis, box);
  testing::Gen gen(3);
  for (int s = 0; s < 20; ++s) {
    const double x[] = {gen.uniform(-1, 2), gen.uniform(0, 1), gen.uniform(3, 5)};
    CHECK(eval_point(one, x) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SparseGridFunction c(layout, basis, unit_box(3));
  c.set_coefficient(BasisId{{{0, 0, 0}}, {0, 0, 0}, {0, 0, 0}}, 0.75);
  const double p[] = {0.1, 0.9, 0.5};
  CHECK(eval_point(c, p) == doctest::Approx(0.75));
  const double outside[] = {0.1, 1.1, 0.5};
  CHECK_THROWS_AS(eval_point(c, outside), std::out_of_range);
}

TEST_CASE("eval_point matches a naive sum of products") {
  testing::Gen gen(5);
  const int n = 4, k = 2;
  const auto layout = SparseLayout::make(n, 2);
  const auto basis = std::make_shared<const Basis1d>(k);
  for (int trial = 0; trial < 10; ++trial) {
    SparseGridFunction u(layout, basis, unit_box(2));
    std::vector<BasisId> ids;
    const auto levels = enumerate_levels(n, 2);
    for (int c = 0; c < 10; ++c) {
      const auto& l = levels[gen.integer(0, static_cast<int>(levels.size()) - 1)];
      BasisId id{l, {gen.integer(0, elements_at_level(l.levels[0]) - 1), gen.integer(0, elements_at_level(l.levels[1]) - 1)},
                 {gen.integer(0, k), gen.integer(0, k)}};
      u.set_coefficient(id, u.coefficient(id) + gen.uniform());
      ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end(), [](const BasisId& a, const BasisId& b) {
      return std::tie(a.level, a.translation, a.poly) < std::tie(b.level, b.translation, b.poly);
    });
    ids.erase(std::unique(ids.begin(), ids.end(),
                          [](const BasisId& a, const BasisId& b) {
                            return a.level == b.level && a.translation == b.translation && a.poly == b.poly;
                          }),
              ids.end());
    for (int s = 0; s < 20; ++s) {
      const double x[] = {gen.uniform(0, 1), gen.uniform(0, 1)};
      double naive = 0.0;
      for (const auto& id : ids) {
        naive += u.coefficient(id) * basis->eval(id.level.levels[0], id.translation[0], id.poly[0], x[0]) *
                 basis->eval(id.level.levels[1], id.translation[1], id.poly[1], x[1]);
      }
      CHECK(std::abs(eval_point(u, x) - naive) < 1e-13);
    }
  }
}

TEST_CASE("norm_l2 agrees with quadrature (Parseval)") {
  testing::Gen gen(9);
  CHECK(norm_l2(SparseGridFunction(SparseLayout::make(3, 2), std::make_shared<const Basis1d>(1), unit_box(2))) == 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = gen.integer(1, 2);
    const int k = gen.integer(1, 3);
    const int n = gen.integer(0, 4);
    Box box;
    for (int m = 0; m < d; ++m) {
      const double lo = gen.uniform(-2, 2);
      box.push_back({lo, lo + gen.uniform(0.5, 3)});
    }
    const auto u = testing::random_function(n, k, d, gen, box);
    const double quad = testing::integrate_box([&](std::span<const double> x) { return std::pow(eval_point(u, x), 2); },
                                               box, n, k + 2);
    CHECK(norm_l2(u) == doctest::Approx(std::sqrt(quad)).epsilon(1e-10));
  }
}

TEST_CASE("snapshot format") {
  const auto layout = SparseLayout::make(3, 2);
  const auto basis = std::make_shared<const Basis1d>(1);
  const auto u = project([](std::span<const double> x) { return x[0] + 2 * x[1]; }, layout, basis, unit_box(2));
  std::ostringstream os;
  write_snapshot(os, u, 3, 0.5);
  std::istringstream is(os.str());
  std::string line;
  std::vector<std::string> header;
  for (int i = 0; i < 4; ++i) {
    std::getline(is, line);
    header.push_back(line);
  }
  CHECK(header[0].find("dimension") != std::string::npos);
  CHECK(header[1].find("N") != std::string::npos);
  CHECK(header[3].find("time") != std::string::npos);
  int rows = 0;
  double x1, x2, v;
  while (is >> x1 >> x2 >> v) {
    CHECK(v == doctest::Approx(x1 + 2 * x2).epsilon(1e-12));
    ++rows;
  }
  CHECK(rows == 9);
}

TEST_CASE("snapshot of a 4D function is a centre slice") {
  const auto layout = SparseLayout::make(2, 4);
  const auto basis = std::make_shared<const Basis1d>(1);
  const Box box{{0, 1}, {0, 1}, {-2, 2}, {0, 4}};
  const auto u = project([](std::span<const double> x) { return x[0] + x[2] * x[3]; }, layout, basis, box);
  std::ostringstream os;
  write_snapshot(os, u, 2, 0.0);
  std::istringstream is(os.str());
  std::string line;
  for (int i = 0; i < 5; ++i) std::getline(is, line);
  CHECK(line == "# slice x3=0 x4=2");
  double x[4], v;
  int rows = 0;
  while (is >> x[0] >> x[1] >> x[2] >> x[3] >> v) {
    CHECK(x[2] == 0.0);
    CHECK(x[3] == 2.0);
    CHECK(v == doctest::Approx(x[0]).epsilon(1e-12));
    ++rows;
  }
  CHECK(rows == 4);
}
