#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "sgdg/diagnostics.hpp"
#include "test_support.hpp"

using namespace sgdg;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSecondMoment5 = 0.999984559501708898635097570099;  // int_{-5}^{5} v^2 mu
constexpr double kMaxwellMass5 = 0.999999426696856241612176652495;
constexpr double kLandauMass = 12.5663706101908414622234366963;      // 4 pi int f_M over [-2pi, 2pi]

PhaseSpace relax_space(int n, int k) { return PhaseSpace(1, 1, n, k, Box{{-5, 5}}, Box{{-5, 5}}); }

}  // namespace

TEST_CASE("conserved quantities of trivial states") {
  const PhaseSpace ps(1, 1, 3, 2, Box{{0, 1}}, Box{{-1, 1}});
  const auto q = conserved_quantities(ps, ps.zeros());
  CHECK(q.mass == 0.0);
  CHECK(q.momentum.size() == 1);
  CHECK(q.momentum[0] == 0.0);
  CHECK(q.energy == 0.0);
  CHECK(q.enstrophy == 0.0);
  auto e = ps.x_zeros();
  e.coeffs()[0] = 2.0;
  CHECK(conserved_quantities(ps, ps.zeros(), &e).energy == doctest::Approx(2.0));
}

TEST_CASE("energy of the projected equilibrium") {
  const auto ps = relax_space(5, 2);
  const RelaxationModel model(ps, {});
  const auto m = model.projected_equilibrium();
  const auto q = conserved_quantities(ps, m);
  const double quad = integrate_functional(
      m, [](double value, std::span<const double> x) { return 0.5 * value * x[1] * x[1]; }, make_quadrature_rule(5, 6));
  CHECK(q.energy == doctest::Approx(quad).epsilon(1e-10));
  // v^2 is in the space, so this is the analytic value up to projection quadrature.
  CHECK(q.energy == doctest::Approx(0.5 * kSecondMoment5).epsilon(1e-5));
  CHECK(q.mass == doctest::Approx(kMaxwellMass5).epsilon(1e-6));
}

TEST_CASE("particle number and enstrophy identities") {
  const PhaseSpace ps(1, 1, 5, 2, Box{{0, 4 * kPi}}, Box{{-2 * kPi, 2 * kPi}});
  const auto f = initial_condition("landau", ps.layout(), ps.basis(), ps.box());
  const auto q = conserved_quantities(ps, f);
  CHECK(q.mass == doctest::Approx(kLandauMass).epsilon(1e-12));
  testing::Gen gen(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = testing::random_function(4, 2, 2, gen, ps.box());
    const auto qu = conserved_quantities(ps, u);
    const auto rule = make_quadrature_rule(4, 4);
    CHECK(qu.enstrophy == doctest::Approx(integrate_functional(u, [](double v, std::span<const double>) { return v * v; }, rule))
                              .epsilon(1e-10));
    CHECK(qu.mass == doctest::Approx(integrate_functional(u, [](double v, std::span<const double>) { return v; }, rule))
                         .epsilon(1e-10));
  }
}

TEST_CASE("conservation tracker") {
  ConservedQuantities q0{2.0, {0.0, 1.0}, 4.0, 0.0};
  ConservationTracker tr(q0);
  ConservedQuantities q{2.2, {1e-3, 0.5}, 3.0, 0.25};
  const auto e = tr.errors(q);
  CHECK(e.mass == doctest::Approx(0.1));
  CHECK(e.momentum == doctest::Approx(-0.5));
  CHECK(e.energy == doctest::Approx(-0.25));
  CHECK(e.enstrophy == doctest::Approx(0.25));
}

TEST_CASE("log Fourier modes") {
  const Interval iv{0.0, 4 * kPi};
  const double k = 0.5;
  for (double c : {1.0, -0.3, 2e-4}) {
    const double v = log_fourier_mode([c, k](double x) { return c * std::sin(k * x); }, iv, 64, 10, 1, k);
    CHECK(v == doctest::Approx(std::log10(std::abs(c) / 2)).epsilon(1e-12));
  }
  CHECK(log_fourier_mode([](double) { return 0.0; }, iv, 64, 10, 1, k) == kLogModeFloor);
  CHECK(log_fourier_mode([k](double x) { return 3.0 * std::sin(2 * k * x); }, iv, 64, 10, 1, k) == kLogModeFloor);
  // Neighbouring modes do not leak into mode n.
  for (int n = 2; n <= 3; ++n) {
    const auto base = [n, k](double x) { return 0.2 * std::cos(n * k * x); };
    const double ref = log_fourier_mode(base, iv, 64, 10, n, k);
    const double pert = log_fourier_mode(
        [&](double x) { return base(x) + 0.7 * std::sin((n - 1) * k * x) - 0.4 * std::cos((n + 1) * k * x); }, iv, 64, 10, n,
        k);
    CHECK(pert == doctest::Approx(ref).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log_fourier_mode([](double) { return 1.0; }, iv, 8, 4, 0, k), std::invalid_argument);

  // DG field: projection of c sin(kx) at level 6.
  const auto layout = SparseLayout::make(6, 1);
  const auto basis = std::make_shared<const Basis1d>(2);
  const auto e = project([k](std::span<const double> x) { return 0.8 * std::sin(k * x[0]); }, layout, basis, Box{iv});
  CHECK(log_fourier_mode(e, 1, k) == doctest::Approx(std::log10(0.4)).epsilon(1e-6));
  const auto zero = SparseGridFunction(layout, basis, Box{iv});
  CHECK(log_fourier_mode(zero, 1, k) == kLogModeFloor);
}

TEST_CASE("entropy functionals") {
  const auto ps = relax_space(6, 3);
  const RelaxationModel model(ps, {});
  const auto m = model.projected_equilibrium();
  // f_h = P M is not M: the residue comes from the tails, where M ~ 1e-12.
  const auto e1 = entropy_functionals(model, m);
  CHECK(std::abs(e1.h_log) < 2e-5);
  CHECK(e1.h2 == doctest::Approx(kMaxwellMass5).epsilon(2e-5));
  auto m2 = m;
  m2 *= 2.0;
  const auto e2 = entropy_functionals(model, m2);
  CHECK(e2.h_log == doctest::Approx(2 * std::log(2.0) * kMaxwellMass5).epsilon(2e-5));
  CHECK(e2.h2 == doctest::Approx(4 * kMaxwellMass5).epsilon(2e-5));
  const auto f = initial_condition("relax-1d", ps.layout(), ps.basis(), ps.box());
  const auto e3 = entropy_functionals(model, f);
  CHECK(e3.h2 > kMaxwellMass5 * 1.01);
  CHECK(e3.h_log > 0.0);
}

TEST_CASE("convergence orders") {
  const double e1[] = {3.62e-1, 9.17e-2}, h1[] = {1.0 / 8, 1.0 / 16};
  CHECK(convergence_orders(e1, h1)[0] == doctest::Approx(1.98).epsilon(0.003));
  const double e2[] = {1.48e-2, 2.13e-3};
  CHECK(convergence_orders(e2, h1)[0] == doctest::Approx(2.80).epsilon(0.002));
  const double e3[] = {0.5, 0.5};
  CHECK(convergence_orders(e3, h1)[0] == 0.0);
  const double single[] = {1.0}, hs[] = {0.5};
  CHECK(convergence_orders(single, hs).empty());
  const double bad[] = {1.0, 0.0};
  CHECK_THROWS_AS(convergence_orders(bad, h1), std::invalid_argument);
  CHECK_THROWS_AS(convergence_orders(e1, hs), std::invalid_argument);
}

TEST_CASE("series CSV format") {
  std::ostringstream os;
  write_series_header(os);
  SeriesRow r;
  r.t = 0.1;
  r.mass_rel_err = -1.0 / 3.0;
  r.log_modes = {-1.5, -20.0, std::nan(""), 0.0};
  r.h2 = std::nan("");
  write_series_row(os, r);
  std::istringstream is(os.str());
  std::string header, line;
  std::getline(is, header);
  std::getline(is, line);
  CHECK(header == "t,mass_rel_err,momentum_err,energy_rel_err,enstrophy_rel_err,logFM1,logFM2,logFM3,logFM4,H_log,H2");
  int commas = 0;
  for (char c : line) commas += c == ',';
  CHECK(commas == 10);
  CHECK(line.rfind("1.0000000000000001e-01,-3.3333333333333331e-01,", 0) == 0);
  CHECK(format_double(std::nan("")) == "nan");
  testing::Gen gen(2);
  for (int i = 0; i < 100; ++i) {
    const double v = std::ldexp(gen.uniform(-1, 1), gen.integer(-60, 60));
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}
