#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sgdg/hier_matrix.hpp"
#include "sgdg/tensor_apply.hpp"
#include "test_support.hpp"

using namespace sgdg;

namespace {

struct Fn {
  int pos, i;
};

std::vector<Fn> functions_1d(int n, int k) {
  std::vector<Fn> fns;
  for (int p = 0; p < (1 << n); ++p) {
    for (int i = 0; i <= k; ++i) fns.push_back({p, i});
  }
  return fns;
}

double ev(const Basis1d& b, const Fn& f, double x, Side s = Side::right) {
  const int l = level_of_position(f.pos);
  return b.eval(l, translation_of_position(f.pos), f.i, x, s);
}

double evd(const Basis1d& b, const Fn& f, double x) {
  const int l = level_of_position(f.pos);
  return b.eval_derivative(l, translation_of_position(f.pos), f.i, x);
}

}  // namespace

TEST_CASE("1D matrices match direct quadrature") {
  const double pi = std::numbers::pi;
  const Weight1d phi = [&](double x, Side) { return std::cos(2 * pi * x) + 0.3; };
  for (int k = 1; k <= 3; ++k) {
    const Basis1d b(k);
    const int n = 3;
    const BasisCellTable table(b, n, 2 * k + 2);
    const auto fns = functions_1d(n, k);
    for (const Boundary bc : {Boundary::periodic, Boundary::zero_exterior}) {
      const auto mass = assemble_mass(table, {});
      const auto adv = assemble_advection(table, phi, bc);
      const auto jump = assemble_jump(table, {}, bc);
      const int cells = 1 << n;
      for (const auto& r : fns) {
        for (const auto& c : fns) {
          const double m = testing::integrate_1d([&](double x) { return ev(b, r, x) * ev(b, c, x); }, n, k + 2);
          CHECK(std::abs(mass.value(r.pos, r.i, c.pos, c.i) - m) < 1e-13);
          double a = 0.0;
          {
            const GaussRule g = gauss_legendre(2 * k + 2);
            for (int cell = 0; cell < cells; ++cell) {
              for (int q = 0; q < g.size(); ++q) {
                const double x = (cell + g.nodes[q]) / cells;
                a += g.weights[q] / cells * phi(x, Side::right) * ev(b, c, x) * evd(b, r, x);
              }
            }
          }
          double jj = 0.0;
          for (int f = 0; f <= cells; ++f) {
            if (bc == Boundary::periodic && f == cells) continue;
            const double x = static_cast<double>(f) / cells;
            double rm, rp, cm, cp;
            if (f == 0) {
              rm = bc == Boundary::periodic ? ev(b, r, 1.0, Side::left) : 0.0;
              cm = bc == Boundary::periodic ? ev(b, c, 1.0, Side::left) : 0.0;
            } else {
              rm = ev(b, r, x, Side::left);
              cm = ev(b, c, x, Side::left);
            }
            rp = f == cells ? 0.0 : ev(b, r, x, Side::right);
            cp = f == cells ? 0.0 : ev(b, c, x, Side::right);
            a -= 0.5 * phi(x, Side::right) * (cm + cp) * (rm - rp);
            jj += (cm - cp) * (rm - rp);
          }
          CHECK(std::abs(adv.value(r.pos, r.i, c.pos, c.i) - a) < 1e-12);
          CHECK(std::abs(jump.value(r.pos, r.i, c.pos, c.i) - jj) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("reflection matrix maps u(x) to u(1-x)") {
  for (int k = 1; k <= 3; ++k) {
    const Basis1d b(k);
    const int n = 4;
    const auto r = assemble_reflection(b, n);
    testing::Gen gen(k);
    const auto fns = functions_1d(n, k);
    std::vector<double> c(fns.size()), rc(fns.size(), 0.0);
    for (double& v : c) v = gen.uniform();
    for (std::size_t a = 0; a < fns.size(); ++a) {
      for (std::size_t e = 0; e < fns.size(); ++e) rc[a] += r.value(fns[a].pos, fns[a].i, fns[e].pos, fns[e].i) * c[e];
    }
    for (int s = 0; s < 20; ++s) {
      const double x = (s + 0.37) / 20.0;
      double u = 0, ur = 0;
      for (std::size_t a = 0; a < fns.size(); ++a) {
        u += c[a] * ev(b, fns[a], 1.0 - x);
        ur += rc[a] * ev(b, fns[a], x);
      }
      CHECK(std::abs(u - ur) < 1e-12);
    }
    CHECK(!r.has_lower());
  }
}

TEST_CASE("sparse tensor application equals the pairwise reference") {
  testing::Gen gen(17);
  const Weight1d lin = [](double x, Side) { return x - 0.3; };
  const Weight1d sq = [](double x, Side) { return std::sin(3 * x) + 2.0; };
  for (int trial = 0; trial < 30; ++trial) {
    const int d = gen.integer(1, 4);
    const int k = gen.integer(1, 3);
    const int n = gen.integer(0, d >= 3 ? 4 : 5);
    const Basis1d b(k);
    const BasisCellTable table(b, n, 2 * k + 2);
    std::vector<HierMatrix> mats;
    mats.push_back(assemble_mass(table, sq));
    mats.push_back(assemble_advection(table, lin, Boundary::periodic));
    mats.push_back(assemble_jump(table, sq, Boundary::zero_exterior));
    mats.push_back(assemble_advection(table, sq, Boundary::zero_exterior));
    TensorTerm term;
    term.coeff = gen.uniform(0.5, 2.0);
    for (int m = 0; m < d; ++m) {
      const int pick = gen.integer(-1, 3);
      term.factors.push_back(pick < 0 ? nullptr : &mats[pick]);
    }
    const auto layout = SparseLayout::make(n, d);
    TensorApplier applier(layout, k + 1);
    std::vector<double> in(applier.size()), fast(applier.size()), ref(applier.size());
    for (double& v : in) v = gen.uniform();
    for (std::size_t i = 0; i < in.size(); ++i) fast[i] = ref[i] = gen.uniform();
    applier.apply(term, in, fast);
    apply_term_reference(*layout, k + 1, term, in, ref);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      diff = std::max(diff, std::abs(fast[i] - ref[i]));
      scale = std::max(scale, std::abs(ref[i]));
    }
    CAPTURE(d);
    CAPTURE(k);
    CAPTURE(n);
    CHECK(diff <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("parallel and serial tensor application agree bitwise") {
  testing::Gen gen(29);
  const Weight1d w = [](double x, Side) { return std::cos(2 * x) + 1.5; };
  for (int d = 2; d <= 4; ++d) {
    const int k = 2;
    const int n = d == 4 ? 4 : 6;
    const Basis1d b(k);
    const BasisCellTable table(b, n, 2 * k + 2);
    const HierMatrix adv = assemble_advection(table, w, Boundary::periodic);
    const HierMatrix mass = assemble_mass(table, w);
    TensorTerm term;
    for (int m = 0; m < d; ++m) term.factors.push_back(m == 1 ? &adv : &mass);
    const auto layout = SparseLayout::make(n, d);
    TensorApplier par(layout, k + 1), ser(layout, k + 1);
    ser.set_parallel(false);
    std::vector<double> in(par.size()), a(par.size(), 0.0), s(par.size(), 0.0);
    for (double& v : in) v = gen.uniform();
    par.apply(term, in, a);
    ser.apply(term, in, s);
    CAPTURE(d);
    CHECK(a == s);
  }
}
