#include "sgdg/time_stepper.hpp"

#include <cmath>
#include <string>

#include "sgdg/sparse_function.hpp"
#include "sgdg/transport.hpp"

namespace sgdg {

double cfl_dt(const StepControl& c) {
  if (!(c.cfl > 0.0)) throw std::invalid_argument("cfl_dt: cfl must be positive");
  const double exponent = c.degree >= 3 ? 4.0 / 3.0 : 1.0;
  double sum = 0.0;
  for (std::size_t m = 0; m < c.speeds.size(); ++m) {
    if (c.speeds[m] < 0.0) throw std::invalid_argument("cfl_dt: negative speed");
    const double width = c.widths.empty() ? 1.0 : c.widths[m];
    const double h = std::ldexp(width, -c.max_level);
    sum += c.speeds[m] / std::pow(h, exponent);
  }
  if (!(sum > 0.0)) throw std::invalid_argument("cfl_dt: total speed is zero");
  return c.cfl / sum;
}

namespace {

void check_finite(std::span<const double> v, int stage, double t) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw NumericalFailure("non-finite coefficients after RK stage " + std::to_string(stage), stage, t);
    }
  }
}

}  // namespace

void rk3_step(std::span<double> u, double t, double dt, const RhsFn& rhs, Rk3Workspace& ws) {
  const std::size_t n = u.size();
  ws.resize(n);
  rhs(t, u, ws.r);
  for (std::size_t i = 0; i < n; ++i) ws.u1[i] = u[i] + dt * ws.r[i];
  check_finite(ws.u1, 1, t);
  rhs(t + dt, ws.u1, ws.r);
  for (std::size_t i = 0; i < n; ++i) ws.u2[i] = 0.75 * u[i] + 0.25 * ws.u1[i] + 0.25 * dt * ws.r[i];
  check_finite(ws.u2, 2, t);
  rhs(t + 0.5 * dt, ws.u2, ws.r);
  for (std::size_t i = 0; i < n; ++i) ws.u1[i] = u[i] / 3.0 + 2.0 / 3.0 * (ws.u2[i] + dt * ws.r[i]);
  check_finite(ws.u1, 3, t);
  std::copy(ws.u1.begin(), ws.u1.end(), u.begin());
}

IntegrationStats integrate(std::span<double> u, double t0, double t_end, double dt, const RhsFn& rhs,
                           const Observer& observer, int stride) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (t_end < t0) throw std::invalid_argument("integrate: end time before start time");
  IntegrationStats stats;
  stats.dt = dt;
  stats.final_time = t0;
  if (observer) observer(0, t0, u);
  const double span = t_end - t0;
  // Steps of size dt, the last one shortened; a remainder below round-off is dropped.
  const long full = static_cast<long>(std::floor(span / dt * (1.0 + 1e-12)));
  const double rest = span - full * dt;
  const long total = full + (rest > 1e-12 * std::max(span, 1.0) ? 1 : 0);
  Rk3Workspace ws;
  double t = t0;
  for (long s = 0; s < total; ++s) {
    const double h = s < full ? dt : t_end - t;
    rk3_step(u, t, h, rhs, ws);
    t = s + 1 == total ? t_end : t0 + (s + 1) * dt;
    ++stats.steps;
    if (observer && ((s + 1) % stride == 0 || s + 1 == total)) observer(stats.steps, t, u);
  }
  stats.final_time = total > 0 ? t_end : t0;
  return stats;
}

IntegrationStats integrate(SparseGridFunction& u, TransportOperator& op, const StepControl& control,
                           const Observer& observer, int stride) {
  if (control.final_time == 0.0) {
    if (observer) observer(0, 0.0, u.coeffs());
    return IntegrationStats{};
  }
  const double dt = cfl_dt(control);
  return integrate(
      u.coeffs(), 0.0, control.final_time, dt,
      [&op](double t, std::span<const double> in, std::span<double> out) { op.apply(t, in, out); }, observer, stride);
}

}  // namespace sgdg
