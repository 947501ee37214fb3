#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sgdg/diagnostics.hpp"
#include "sgdg/kinetic.hpp"
#include "sgdg/time_stepper.hpp"
#include "test_support.hpp"

using namespace sgdg;

namespace {

constexpr double kPi = std::numbers::pi;

// Frozen high-precision quadrature values.
constexpr double kRelaxS1 = 1.35445007739011211722743500138;   // L = V_c = 5
constexpr double kRelaxS2 = 6.67571605550795169726619387015;   // L = V_c = 5
constexpr double kMaxwellMass5 = 0.999999426696856241612176652495;  // int_{-5}^{5} mu
constexpr double kLandauVMass = 0.999999999668294719330963918734;   // int_{-2pi}^{2pi} f_M

PhaseSpace landau_space(int n, int k) {
  return PhaseSpace(1, 1, n, k, Box{{0.0, 4 * kPi}}, Box{{-2 * kPi, 2 * kPi}});
}

PhaseSpace relax_space(int dx, int n, int k) {
  Box x(dx, Interval{-5.0, 5.0}), v(dx, Interval{-5.0, 5.0});
  return PhaseSpace(dx, dx, n, k, x, v);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("phase space validation") {
  CHECK_THROWS_AS(PhaseSpace(1, 2, 3, 1, Box{{0, 1}}, Box{{0, 1}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PhaseSpace(3, 3, 3, 1, unit_box(3), unit_box(3)), std::invalid_argument);
  CHECK_THROWS_AS(PhaseSpace(1, 1, 3, 1, Box{{0, 1}}, Box{{1, 1}}), std::invalid_argument);
  const auto ps = landau_space(4, 2);
  CHECK(ps.dim() == 2);
  CHECK(ps.zeros().size() == static_cast<std::size_t>(dof_count(4, 2, 2)));
  CHECK(ps.x_zeros().size() == 16 * 3);
}

TEST_CASE("density of simple states") {
  for (int dx = 1; dx <= 2; ++dx) {
    Box x(dx, Interval{0.0, 2.0}), v(dx, Interval{-1.5, 1.5});
    const PhaseSpace ps(dx, dx, 3, 2, x, v);
    const auto f = project([](std::span<const double>) { return 0.7; }, ps.layout(), ps.basis(), ps.box());
    const auto rho = density(ps, f);
    const double expect = 0.7 * std::pow(3.0, dx);
    for (int s = 0; s < 5; ++s) {
      std::vector<double> p(dx, 0.3 * s + 0.1);
      CHECK(eval_point(rho, p) == doctest::Approx(expect).epsilon(1e-13));
    }
  }
  // f = v g(x) has zero density.
  const auto ps = landau_space(4, 1);
  const auto f = project_separable(std::vector<Function1d>{[](double x) { return std::cos(x); }, [](double v) { return v; }},
                                   ps.layout(), ps.basis(), ps.box());
  CHECK(max_abs(density(ps, f).coeffs()) < 1e-13);
}

TEST_CASE("Landau density equals the projected spatial profile times the velocity mass") {
  const auto ps = landau_space(6, 2);
  const auto f = initial_condition("landau", ps.layout(), ps.basis(), ps.box());
  const auto rho = density(ps, f);
  const auto expect = project_1d([](double x) { return kLandauVMass * (1.0 + 0.5 * std::cos(0.5 * x)); }, *ps.basis(), 6,
                                 ps.x_box()[0]);
  const auto got = hierarchical_1d(rho);
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-9));
  const double err = l2_error(rho, [](std::span<const double> x) { return kLandauVMass * (1 + 0.5 * std::cos(0.5 * x[0])); },
                              make_quadrature_rule(6, 6));
  CHECK(err < 1e-5);
}

TEST_CASE("current density moments") {
  const auto ps = landau_space(4, 1);
  const auto one = project([](std::span<const double>) { return 1.0; }, ps.layout(), ps.basis(), ps.box());
  CHECK(max_abs(current_density(ps, one)[0].coeffs()) < 1e-13);
  const auto f = project([](std::span<const double> x) { return x[1]; }, ps.layout(), ps.basis(), ps.box());
  const auto j = current_density(ps, f)[0];
  const double vc = 2 * kPi;
  for (double x : {0.1, 3.0, 11.0}) {
    const double p[] = {x};
    CHECK(eval_point(j, p) == doctest::Approx(2 * vc * vc * vc / 3).epsilon(1e-12));
  }
  // Integral of J against quadrature of f v.
  testing::Gen gen(4);
  for (int trial = 0; trial < 5; ++trial) {
    auto u = testing::random_function(4, 2, 2, gen, ps.box());
    const double mom = conserved_quantities(ps, u).momentum[0];
    const double quad = integrate_functional(
        u, [](double value, std::span<const double> x) { return value * x[1]; }, make_quadrature_rule(4, 4));
    CHECK(std::abs(mom - quad) < 1e-12 * std::max(1.0, std::abs(quad)));
  }
}

TEST_CASE("two-dimensional velocity moments match quadrature") {
  const auto ps = relax_space(2, 3, 2);
  testing::Gen gen(9);
  auto u = testing::random_function(3, 2, 4, gen, ps.box());
  const auto q = conserved_quantities(ps, u);
  const auto rule = make_quadrature_rule(3, 4);
  for (int m = 0; m < 2; ++m) {
    const double ref = integrate_functional(u, [m](double value, std::span<const double> x) { return value * x[2 + m]; }, rule);
    // Round-off relative to the size of the integrand, not of the (cancelling) result.
    CHECK(std::abs(q.momentum[m] - ref) < 1e-12 * 5.0 * std::abs(q.mass));
  }
  const double e = integrate_functional(
      u, [](double value, std::span<const double> x) { return 0.5 * value * (x[2] * x[2] + x[3] * x[3]); }, rule);
  CHECK(q.energy == doctest::Approx(e).epsilon(1e-11));
  const double mass = integrate_functional(u, [](double value, std::span<const double>) { return value; }, rule);
  CHECK(q.mass == doctest::Approx(mass).epsilon(1e-11));
}

TEST_CASE("velocity reflection") {
  const auto ps = landau_space(4, 2);
  const auto f = project([](std::span<const double> x) { return std::sin(x[0]) * (x[1] + 0.1 * x[1] * x[1] * x[1]); },
                         ps.layout(), ps.basis(), ps.box());
  const auto r = reflect_velocity(ps, f);
  for (double x : {0.5, 2.0, 7.0}) {
    for (double v : {-5.0, -1.2, 0.3, 4.4}) {
      const double a[] = {x, v}, b[] = {x, -v};
      CHECK(eval_point(r, a) == doctest::Approx(eval_point(f, b)).epsilon(1e-12));
    }
  }
  const auto rr = reflect_velocity(ps, r);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(rr.coeffs()[i] == doctest::Approx(f.coeffs()[i]).epsilon(1e-14));
}

TEST_CASE("Vlasov-Ampere right-hand side") {
  const auto ps = landau_space(4, 2);
  VlasovAmpere va(ps);
  CHECK_THROWS_AS(VlasovAmpere(relax_space(2, 2, 1)), std::invalid_argument);
  // Even in v with E = 0: no current.
  const auto f = initial_condition("landau", ps.layout(), ps.basis(), ps.box());
  auto e = ps.x_zeros();
  auto state = va.pack(f, e);
  std::vector<double> out(state.size());
  va.rhs(0.0, state, out);
  CHECK(max_abs(std::span<const double>(out).subspan(va.f_size())) < 1e-13);
  // Spatially uniform with E = 0: steady.
  const auto g = project_separable(std::vector<Function1d>{[](double) { return 1.0; }, maxwellian_1d}, ps.layout(),
                                   ps.basis(), ps.box());
  state = va.pack(g, e);
  va.rhs(0.0, state, out);
  CHECK(max_abs(out) < 1e-12);
  // dE/dt = -J for a drifting state.
  const auto h = project_separable(
      std::vector<Function1d>{[](double x) { return 1.0 + 0.3 * std::sin(0.5 * x); }, [](double v) { return maxwellian_1d(v - 1.0); }},
      ps.layout(), ps.basis(), ps.box());
  state = va.pack(h, e);
  va.rhs(0.0, state, out);
  const auto j = current_density(ps, h)[0];
  for (std::size_t i = 0; i < j.size(); ++i) CHECK(out[va.f_size() + i] == doctest::Approx(-j.coeffs()[i]).epsilon(1e-13));
}

TEST_CASE("Vlasov-Ampere semi-discrete invariants") {
  // A wide velocity box makes the boundary flux negligible.
  const PhaseSpace ps(1, 1, 4, 2, Box{{0.0, 4 * kPi}}, Box{{-3 * kPi, 3 * kPi}});
  VlasovAmpere va(ps);
  const auto f = initial_condition("landau", ps.layout(), ps.basis(), ps.box());
  auto e = initial_field("landau", ps);
  auto state = va.pack(f, e);
  std::vector<double> out(state.size());
  va.rhs(0.0, state, out);
  auto df = ps.zeros();
  auto de = ps.x_zeros();
  va.unpack(out, df, de);
  // d/dt of mass, energy: <df,1>, <df, v^2/2> + <E, dE>.
  const auto dq = conserved_quantities(ps, df);
  CHECK(std::abs(dq.mass) < 1e-12);
  double e_de = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) e_de += e.coeffs()[i] * de.coeffs()[i];
  e_de *= box_volume(ps.x_box());
  CHECK(std::abs(dq.energy + e_de) < 1e-11);
  // L2 stability: <df, f> <= 0.
  double fdf = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) fdf += f.coeffs()[i] * df.coeffs()[i];
  CHECK(fdf <= 1e-14);
}

TEST_CASE("initial field follows Gauss's law") {
  const auto ps = landau_space(6, 2);
  const auto e = initial_field("landau", ps);
  for (double x : {0.3, 2.0, 9.5}) {
    const double p[] = {x};
    CHECK(eval_point(e, p) == doctest::Approx(kLandauVMass * 0.5 / 0.5 * std::sin(0.5 * x)).epsilon(1e-5));
  }
  CHECK_THROWS_AS(initial_field("relax-1d", ps), std::invalid_argument);
}

TEST_CASE("named initial conditions") {
  CHECK(relaxation_normalization(1, Box{{-5, 5}, {-5, 5}}) == doctest::Approx(kRelaxS1).epsilon(1e-12));
  CHECK(relaxation_normalization(2, Box(4, Interval{-5, 5})) == doctest::Approx(kRelaxS2).epsilon(1e-12));
  const auto ps = relax_space(1, 6, 2);
  const auto f = initial_condition("relax-1d", ps.layout(), ps.basis(), ps.box());
  CHECK(conserved_quantities(ps, f).mass == doctest::Approx(1.0).epsilon(1e-10));
  const auto p2 = relax_space(2, 4, 1);
  const auto f2 = initial_condition("relax-2d", p2.layout(), p2.basis(), p2.box());
  // Coarse projection: 3 Gauss points on cells of width 0.625.
  CHECK(conserved_quantities(p2, f2).mass == doctest::Approx(1.0).epsilon(1e-5));
  const auto pl = landau_space(5, 2);
  const auto fl = initial_condition("landau", pl.layout(), pl.basis(), pl.box());
  CHECK(conserved_quantities(pl, fl).mass == doctest::Approx(4 * kPi * kLandauVMass).epsilon(1e-12));
  const auto ft = initial_condition("two-stream", pl.layout(), pl.basis(), pl.box(), InitialParams{0.05, 0.5, {}, 0.0});
  const double pt[] = {1.0, 1.5};
  CHECK(eval_point(ft, pt) == doctest::Approx((1 + 0.05 * std::cos(0.5)) * two_stream_profile(1.5)).epsilon(1e-3));
  InitialParams bell;
  bell.center = {0.75, 0.5};
  bell.radius = 0.23;
  const auto layout = SparseLayout::make(6, 2);
  const auto basis = std::make_shared<const Basis1d>(2);
  const auto u = initial_condition("cosine-bell", layout, basis, unit_box(2), bell);
  const double c[] = {0.75, 0.5}, out[] = {0.2, 0.2};
  CHECK(eval_point(u, c) == doctest::Approx(0.23).epsilon(0.03));
  CHECK(std::abs(eval_point(u, out)) < 1e-12);
  const auto s = initial_condition("sine-sum", layout, basis, unit_box(2));
  const double q[] = {0.1, 0.05};
  CHECK(eval_point(s, q) == doctest::Approx(std::sin(2 * kPi * 0.15)).epsilon(1e-4));
  CHECK_THROWS_AS(initial_condition("gaussian", layout, basis, unit_box(2)), std::invalid_argument);
  CHECK_THROWS_AS(initial_condition("landau", SparseLayout::make(3, 3), basis, unit_box(3)), std::invalid_argument);
}

TEST_CASE("relaxation operator") {
  CHECK_THROWS_AS(RelaxationModel(relax_space(1, 3, 1), RelaxationSpec{0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(RelaxationModel(relax_space(1, 3, 1), RelaxationSpec{1.0, -1.0}), std::invalid_argument);
  for (int dx = 1; dx <= 2; ++dx) {
    const auto ps = relax_space(dx, dx == 1 ? 5 : 3, 2);
    RelaxationModel model(ps, {});
    const auto f = initial_condition(dx == 1 ? "relax-1d" : "relax-2d", ps.layout(), ps.basis(), ps.box());
    std::vector<double> s(f.size());
    model.source(f.coeffs(), s);
    // Mass defect of the cut-off Maxwellian: -(1 - m_v) * mass.
    auto sf = f.zeros_like();
    std::copy(s.begin(), s.end(), sf.coeffs().begin());
    const double mass = conserved_quantities(ps, f).mass;
    const double expect = -(1.0 - std::pow(kMaxwellMass5, dx)) * mass;
    CHECK(conserved_quantities(ps, sf).mass == doctest::Approx(expect).epsilon(1e-6));
  }
  // tau -> infinity switches the source off.
  const auto ps = relax_space(1, 4, 2);
  RelaxationModel slow(ps, RelaxationSpec{1e12, 1.0});
  const auto f = initial_condition("relax-1d", ps.layout(), ps.basis(), ps.box());
  std::vector<double> s(f.size());
  slow.source(f.coeffs(), s);
  CHECK(max_abs(s) < 1e-12);
}

TEST_CASE("the projected equilibrium is nearly steady") {
  double prev = 1e300;
  for (int n = 4; n <= 6; ++n) {
    const auto ps = relax_space(1, n, 3);
    RelaxationModel model(ps, {});
    const auto m = model.projected_equilibrium();
    std::vector<double> r(m.size());
    model.rhs(0.0, m.coeffs(), r);
    double norm = 0.0;
    for (double v : r) norm += v * v;
    norm = std::sqrt(norm * box_volume(ps.box()));
    const double proj_err = l2_error(m, [&model](std::span<const double> x) { return model.equilibrium(x); },
                                     make_quadrature_rule(n, 6));
    CAPTURE(n);
    CHECK(norm < 50.0 * proj_err * std::pow(2.0, n));
    CHECK(norm < prev);
    prev = norm;
  }
}

TEST_CASE("relaxation run approaches equilibrium") {
  const auto ps = relax_space(1, 5, 3);
  RelaxationModel model(ps, {});
  auto f = initial_condition("relax-1d", ps.layout(), ps.basis(), ps.box());
  // The coarse tails make the very first instants noisy; check the trend after t = 0.5.
  const auto step = [&model](double time, std::span<const double> in, std::span<double> out) { model.rhs(time, in, out); };
  integrate(f.coeffs(), 0.0, 0.5, 0.004, step);
  double prev = entropy_functionals(model, f).h_log;
  double t = 0.5;
  for (int seg = 0; seg < 2; ++seg) {
    integrate(f.coeffs(), t, t + 0.25, 0.004, step);
    t += 0.25;
    const double h = entropy_functionals(model, f).h_log;
    CHECK(h < prev);
    prev = h;
  }
}
