#include "sgdg/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "sgdg/quadrature.hpp"
#include "sgdg/transport.hpp"

namespace sgdg {

double integral(const SparseGridFunction& u) {
  const std::vector<int> origin(u.dim(), 0);
  const int e = u.layout().element_index(origin);
  return box_volume(u.domain()) * u.block(e)[0];
}

namespace {

double relative(double q, double q0) { return q0 == 0.0 ? q - q0 : (q - q0) / std::abs(q0); }

}  // namespace

ConservedQuantities conserved_quantities(const PhaseSpace& ps, const SparseGridFunction& f,
                                         const SparseGridFunction* field) {
  ConservedQuantities q;
  q.mass = integral(f);
  for (const auto& j : current_density(ps, f)) q.momentum.push_back(integral(j));
  double kinetic = 0.0;
  for (int m = 0; m < ps.dv(); ++m) {
    std::vector<int> powers(ps.dv(), 0);
    powers[m] = 2;
    kinetic += integral(velocity_moment(ps, f, powers));
  }
  q.energy = 0.5 * kinetic;
  if (field) {
    const double e = norm_l2(*field);
    q.energy += 0.5 * e * e;
  }
  const double n = norm_l2(f);
  q.enstrophy = n * n;
  return q;
}

ConservationTracker::Errors ConservationTracker::errors(const ConservedQuantities& q) const {
  Errors e;
  e.mass = relative(q.mass, initial_.mass);
  e.energy = relative(q.energy, initial_.energy);
  e.enstrophy = relative(q.enstrophy, initial_.enstrophy);
  for (std::size_t m = 0; m < q.momentum.size() && m < initial_.momentum.size(); ++m) {
    const double diff = q.momentum[m] - initial_.momentum[m];
    if (std::abs(diff) > std::abs(e.momentum)) e.momentum = diff;
  }
  return e;
}

double log_fourier_mode(const std::function<double(double)>& field, Interval iv, int cells, int points_per_cell, int n,
                        double wave_number) {
  if (n < 1) throw std::invalid_argument("log_fourier_mode: mode must be >= 1");
  if (cells < 1 || points_per_cell < 1) throw std::invalid_argument("log_fourier_mode: empty quadrature rule");
  const GaussRule g = gauss_legendre(points_per_cell);
  const double h = iv.width() / cells;
  const double kn = wave_number * n;
  double s = 0.0, c = 0.0, mean_abs = 0.0;
  for (int cell = 0; cell < cells; ++cell) {
    for (int q = 0; q < g.size(); ++q) {
      const double x = iv.lo + h * (cell + g.nodes[q]);
      const double v = field(x);
      const double w = g.weights[q] * h;
      s += w * v * std::sin(kn * x);
      c += w * v * std::cos(kn * x);
      mean_abs += w * std::abs(v);
    }
  }
  const double amplitude = std::sqrt(s * s + c * c) / iv.width();
  mean_abs /= iv.width();
  // Below this the quadrature sums are pure cancellation noise.
  if (!(amplitude > 64.0 * 2.220446049250313e-16 * mean_abs)) return kLogModeFloor;
  return std::max(std::log10(amplitude), kLogModeFloor);
}

double log_fourier_mode(const SparseGridFunction& field, int n, double wave_number) {
  if (field.dim() != 1) throw std::invalid_argument("log_fourier_mode: needs a 1D field");
  const Interval iv = field.domain()[0];
  const Factor1d e = Factor1d::from_hierarchical(hierarchical_1d(field), field.basis(), field.max_level(), iv);
  return log_fourier_mode([&e](double x) { return e(x); }, iv, 1 << field.max_level(), 2 * (field.degree() + 3), n,
                          wave_number);
}

EntropyValues entropy_functionals(const RelaxationModel& model, const SparseGridFunction& f, int points_per_cell) {
  const QuadratureRule rule = make_quadrature_rule(f.max_level(), points_per_cell > 0 ? points_per_cell : f.degree() + 3);
  EntropyValues out;
  out.h_log = integrate_functional(
      f,
      [&model](double value, std::span<const double> x) {
        const double m = model.equilibrium(x);
        const double h = value / m;
        return h * std::log(std::max(h, 1e-14)) * m;
      },
      rule);
  out.h2 = integrate_functional(
      f,
      [&model](double value, std::span<const double> x) { return value * value / model.equilibrium(x); }, rule);
  return out;
}

std::vector<double> convergence_orders(std::span<const double> errors, std::span<const double> h) {
  if (errors.size() != h.size()) throw std::invalid_argument("convergence_orders: size mismatch");
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0)) throw std::invalid_argument("convergence_orders: errors must be positive");
    if (!(h[i] > 0.0)) throw std::invalid_argument("convergence_orders: mesh sizes must be positive");
  }
  std::vector<double> orders;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    orders.push_back(std::log(errors[i - 1] / errors[i]) / std::log(h[i - 1] / h[i]));
  }
  return orders;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_series_header(std::ostream& os) {
  os << "t,mass_rel_err,momentum_err,energy_rel_err,enstrophy_rel_err,logFM1,logFM2,logFM3,logFM4,H_log,H2\n";
}

void write_series_row(std::ostream& os, const SeriesRow& r) {
  os << format_double(r.t) << ',' << format_double(r.mass_rel_err) << ',' << format_double(r.momentum_err) << ','
     << format_double(r.energy_rel_err) << ',' << format_double(r.enstrophy_rel_err);
  for (double m : r.log_modes) os << ',' << format_double(m);
  os << ',' << format_double(r.h_log) << ',' << format_double(r.h2) << '\n';
}

}  // namespace sgdg
