#include "sgdg/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sgdg/projection.hpp"
#include "sgdg/time_stepper.hpp"

namespace sgdg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ProblemEntry {
  Problem problem;
  std::string_view name;
};

constexpr ProblemEntry kProblems[] = {
    {Problem::advect_const, "advect-const"},       {Problem::solid_rotation, "solid-rotation"},
    {Problem::deformational, "deformational"},     {Problem::vlasov_landau, "vlasov-landau"},
    {Problem::vlasov_twostream, "vlasov-twostream"}, {Problem::relax_1d1v, "relax-1d1v"},
    {Problem::relax_2d2v, "relax-2d2v"},           {Problem::projection_study, "projection-study"},
};

std::string fail(const std::string& field, const std::string& what) { return field + ": " + what; }

// Default bell centre per dimension.
std::vector<double> default_center(int dim) {
  if (dim == 2) return {0.75, 0.5};
  if (dim == 3) return {0.5, 0.55, 0.5};
  return std::vector<double>(dim, 0.5);
}

double cosine_bell(std::span<const double> x, const std::vector<double>& center, double b) {
  double r2 = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) r2 += (x[m] - center[m]) * (x[m] - center[m]);
  const double r = std::sqrt(r2);
  if (r > b) return 0.0;
  return std::pow(b, static_cast<double>(x.size()) - 1.0) * std::pow(std::cos(kPi * r / (2.0 * b)), 6);
}

// Rotation by angle -t about the flow's axis through the cube centre: the
// characteristic foot of x at time t.
void rotate_back(std::span<const double> x, double t, int dim, std::span<double> out) {
  const double c = std::cos(t), s = std::sin(t);
  if (dim == 2) {
    const double rx = x[0] - 0.5, ry = x[1] - 0.5;
    out[0] = 0.5 + c * rx + s * ry;
    out[1] = 0.5 - s * rx + c * ry;
    return;
  }
  // Unit axis w = (-1, 0, 1)/sqrt(2); Rodrigues with angle -t.
  const double w[3] = {-std::numbers::sqrt2 / 2, 0.0, std::numbers::sqrt2 / 2};
  const double r[3] = {x[0] - 0.5, x[1] - 0.5, x[2] - 0.5};
  const double cross[3] = {w[1] * r[2] - w[2] * r[1], w[2] * r[0] - w[0] * r[2], w[0] * r[1] - w[1] * r[0]};
  const double dot = w[0] * r[0] + w[1] * r[1] + w[2] * r[2];
  for (int m = 0; m < 3; ++m) out[m] = 0.5 + r[m] * c - cross[m] * s + w[m] * dot * (1.0 - c);
}

VelocityField transport_field(const ProblemSetup& s) {
  switch (s.problem) {
    case Problem::advect_const: {
      const std::vector<double> a(s.dim, 1.0);
      return constant_field(a);
    }
    case Problem::solid_rotation:
      return s.dim == 2 ? solid_rotation_2d() : solid_rotation_3d();
    case Problem::deformational:
      return deformational_field(s.flow_period);
    default:
      throw std::logic_error("transport_field: not a transport problem");
  }
}

std::vector<double> transport_speeds(const ProblemSetup& s) {
  switch (s.problem) {
    case Problem::advect_const:
      return std::vector<double>(s.dim, 1.0);
    case Problem::solid_rotation:
      if (s.dim == 2) return {0.5, 0.5};
      return {std::numbers::sqrt2 / 4, std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 4};
    case Problem::deformational:
      return {1.0, 1.0};
    default:
      throw std::logic_error("transport_speeds: not a transport problem");
  }
}

// Stepping with diagnostics at a stride and snapshots at fixed instants. Each
// snapshot instant ends a segment, so the step sequence restarts there.
class Driver {
 public:
  Driver(const RunHooks& hooks, double dt, double end_time) : hooks_(hooks), dt_(dt), end_time_(end_time) {}

  using Visit = std::function<void(double t, std::span<const double> u)>;

  // Integrates u over [t0, t1]; returns the number of steps taken. The state at
  // t0 is reported only when `report_start` is set.
  int run(std::span<double> u, double t0, double t1, const RhsFn& rhs, const Visit& diagnostics,
          const Visit& snapshot, bool report_start = true) {
    std::vector<double> stops;
    for (double t : hooks_.snapshot_times) {
      const double c = std::clamp(t, t0, t1);
      if (c > t0 && c < t1) stops.push_back(c);
    }
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    stops.push_back(t1);
    if (report_start && snapshot && has_snapshot_at(t0)) snapshot(t0, u);
    if (report_start && diagnostics) diagnostics(t0, u);
    const int stride = std::max(hooks_.stride, 1);
    int steps = 0;
    double t = t0;
    for (double stop : stops) {
      if (stop <= t) continue;
      const auto observer = [&](int step, double time, std::span<const double> state) {
        if (step == 0) return;
        const int global = steps + step;
        if (diagnostics && (global % stride == 0 || time == t1)) diagnostics(time, state);
      };
      const auto stats = integrate(u, t, stop, dt_, rhs, observer, 1);
      steps += stats.steps;
      t = stop;
      if (snapshot && has_snapshot_at(t)) snapshot(t, u);
    }
    return steps;
  }

 private:
  bool has_snapshot_at(double t) const {
    return std::any_of(hooks_.snapshot_times.begin(), hooks_.snapshot_times.end(), [&](double s) {
      return std::clamp(s, 0.0, end_time_) == t;
    });
  }

  const RunHooks& hooks_;
  double dt_;
  double end_time_;
};

SeriesRow empty_row(double t) {
  SeriesRow r;
  r.t = t;
  r.mass_rel_err = r.momentum_err = r.energy_rel_err = r.enstrophy_rel_err = kNaN;
  r.log_modes = {kNaN, kNaN, kNaN, kNaN};
  r.h_log = r.h2 = kNaN;
  return r;
}

double relative(double q, double q0) { return q0 == 0.0 ? q - q0 : (q - q0) / std::abs(q0); }

RunResult run_transport(const ProblemSetup& s, const RunHooks& hooks) {
  const auto layout = SparseLayout::make(s.max_level, s.dim);
  const auto basis = std::make_shared<const Basis1d>(s.degree);
  const Box box = unit_box(s.dim);
  InitialParams ip = s.initial;
  const bool bell = s.problem != Problem::advect_const;
  auto u = initial_condition(bell ? "cosine-bell" : "sine-sum", layout, basis, box, ip);
  TransportOperator op(layout, basis, box, transport_field(s), FluxSpec{s.flux},
                       BoundarySpec(s.dim, Boundary::periodic));
  op.set_parallel(hooks.parallel);
  StepControl control;
  control.cfl = s.cfl;
  control.degree = s.degree;
  control.max_level = s.max_level;
  control.speeds = transport_speeds(s);
  control.final_time = s.final_time;
  RunResult result;
  result.dof = static_cast<std::int64_t>(u.size());
  result.dt = cfl_dt(control);

  const double mass0 = integral(u);
  const double ens0 = std::pow(norm_l2(u), 2);
  auto view = u.zeros_like();
  const auto load = [&view](std::span<const double> state) { std::copy(state.begin(), state.end(), view.coeffs().begin()); };
  Driver::Visit diagnostics;
  if (hooks.stride > 0 && (hooks.series || hooks.state)) {
    diagnostics = [&](double t, std::span<const double> state) {
      load(state);
      if (hooks.series) {
        SeriesRow r = empty_row(t);
        r.mass_rel_err = relative(integral(view), mass0);
        r.enstrophy_rel_err = relative(std::pow(norm_l2(view), 2), ens0);
        hooks.series(r);
      }
      if (hooks.state) hooks.state(t, view, nullptr);
    };
  }
  Driver::Visit snapshot;
  if (hooks.snapshot) {
    snapshot = [&](double t, std::span<const double> state) {
      load(state);
      hooks.snapshot(t, view);
    };
  }
  const RhsFn rhs = [&op](double t, std::span<const double> in, std::span<double> out) { op.apply(t, in, out); };
  Driver driver(hooks, result.dt, s.final_time);
  result.steps = driver.run(u.coeffs(), 0.0, s.final_time, rhs, diagnostics, snapshot);
  result.final_time = s.final_time;

  const QuadratureRule rule = make_quadrature_rule(s.max_level, s.degree + 3);
  const double T = s.final_time;
  if (s.problem == Problem::advect_const) {
    result.error = l2_error(
        u,
        [T](std::span<const double> x) {
          double sum = 0.0;
          for (double v : x) sum += v;
          return std::sin(2.0 * kPi * (sum - static_cast<double>(x.size()) * T));
        },
        rule);
  } else if (s.problem == Problem::solid_rotation) {
    const int d = s.dim;
    result.error = l2_error(
        u,
        [&ip, T, d](std::span<const double> x) {
          double foot[3];
          rotate_back(x, T, d, std::span<double>(foot, d));
          return cosine_bell(std::span<const double>(foot, d), ip.center, ip.radius);
        },
        rule);
  } else {
    // The deformational flow returns to the datum at whole periods only.
    const double periods = T / s.flow_period;
    const bool whole = std::abs(periods - std::round(periods)) < 1e-12;
    result.error = whole ? l2_error(u, [&ip](std::span<const double> x) { return cosine_bell(x, ip.center, ip.radius); }, rule)
                         : kNaN;
  }
  result.summary.emplace_back("mass", integral(u));
  result.summary.emplace_back("l2_norm", norm_l2(u));
  return result;
}

double max_abs_field(const SparseGridFunction& e, int samples_per_cell) {
  const Interval iv = e.domain()[0];
  const int cells = 1 << e.max_level();
  double best = 0.0;
  for (int c = 0; c < cells; ++c) {
    for (int i = 0; i <= samples_per_cell; ++i) {
      const double x = iv.lo + iv.width() * (c + static_cast<double>(i) / samples_per_cell) / cells;
      const double xs[1] = {std::min(x, iv.hi)};
      const Side left[1] = {Side::left};
      best = std::max(best, std::abs(eval_point(e, xs)));
      if (x > iv.lo) best = std::max(best, std::abs(eval_point(e, xs, left)));
    }
  }
  return best;
}

RunResult run_vlasov(const ProblemSetup& s, const RunHooks& hooks) {
  const PhaseSpace ps(1, 1, s.max_level, s.degree, Box{{0.0, s.x_length}}, Box{{-s.v_cut, s.v_cut}});
  const bool landau = s.problem == Problem::vlasov_landau;
  const std::string name = landau ? "landau" : "two-stream";
  const auto f0 = initial_condition(name, ps.layout(), ps.basis(), ps.box(), s.initial);
  const auto e0 = initial_field(name, ps, s.initial);
  VlasovAmpere va(ps, FluxSpec{s.flux});
  va.set_parallel(hooks.parallel);
  auto state = va.pack(f0, e0);

  StepControl control;
  control.cfl = s.cfl;
  control.degree = s.degree;
  control.max_level = s.max_level;
  control.speeds = {s.v_cut, max_abs_field(e0, 2 * (s.degree + 1))};
  control.widths = {s.x_length, 2.0 * s.v_cut};
  RunResult result;
  result.dof = static_cast<std::int64_t>(f0.size());
  result.dt = cfl_dt(control);

  auto f = ps.zeros();
  auto e = ps.x_zeros();
  const ConservationTracker tracker(conserved_quantities(ps, f0, &e0));
  const double k = s.initial.wave_number;
  Driver::Visit diagnostics;
  if (hooks.stride > 0 && (hooks.series || hooks.state)) {
    diagnostics = [&](double t, std::span<const double> u) {
      va.unpack(u, f, e);
      if (hooks.series) {
        SeriesRow r = empty_row(t);
        const auto err = tracker.errors(conserved_quantities(ps, f, &e));
        r.mass_rel_err = err.mass;
        r.momentum_err = err.momentum;
        r.energy_rel_err = err.energy;
        r.enstrophy_rel_err = err.enstrophy;
        for (int n = 1; n <= 4; ++n) r.log_modes[n - 1] = log_fourier_mode(e, n, k);
        hooks.series(r);
      }
      if (hooks.state) hooks.state(t, f, &e);
    };
  }
  Driver::Visit snapshot;
  if (hooks.snapshot) {
    snapshot = [&](double t, std::span<const double> u) {
      va.unpack(u, f, e);
      hooks.snapshot(t, f);
    };
  }
  const RhsFn rhs = [&va](double t, std::span<const double> in, std::span<double> out) { va.rhs(t, in, out); };
  const double T = s.final_time;
  Driver driver(hooks, result.dt, s.reversal ? 2.0 * T : T);
  result.steps = driver.run(state, 0.0, T, rhs, diagnostics, snapshot);
  result.final_time = T;
  va.unpack(state, f, e);
  result.error = kNaN;
  if (s.reversal) {
    const auto reflected = reflect_velocity(ps, f);
    state = va.pack(reflected, e);
    result.steps += driver.run(state, T, 2.0 * T, rhs, diagnostics, snapshot, false);
    result.final_time = 2.0 * T;
    va.unpack(state, f, e);
    // The reversed run lands on f0(x, -v); compare its reflection with the datum.
    const auto back = reflect_velocity(ps, f);
    const double a = s.initial.amplitude;
    const auto profile = landau ? Function1d(maxwellian_1d) : Function1d(two_stream_profile);
    result.error = l2_error(
        back, [&](std::span<const double> x) { return profile(x[1]) * (1.0 + a * std::cos(k * x[0])); },
        make_quadrature_rule(s.max_level, s.degree + 3));
  }
  const auto q = conserved_quantities(ps, f, &e);
  const auto err = tracker.errors(q);
  result.summary.emplace_back("mass", q.mass);
  result.summary.emplace_back("energy", q.energy);
  result.summary.emplace_back("enstrophy", q.enstrophy);
  result.summary.emplace_back("mass_rel_err", err.mass);
  result.summary.emplace_back("momentum_err", err.momentum);
  result.summary.emplace_back("energy_rel_err", err.energy);
  result.summary.emplace_back("enstrophy_rel_err", err.enstrophy);
  return result;
}

RunResult run_relaxation(const ProblemSetup& s, const RunHooks& hooks) {
  const int d = s.problem == Problem::relax_1d1v ? 1 : 2;
  const Box xb(d, Interval{-s.half_width, s.half_width});
  const Box vb(d, Interval{-s.v_cut, s.v_cut});
  const PhaseSpace ps(d, d, s.max_level, s.degree, xb, vb);
  RelaxationModel model(ps, s.relax, FluxSpec{s.flux});
  model.set_parallel(hooks.parallel);
  auto f = initial_condition(d == 1 ? "relax-1d" : "relax-2d", ps.layout(), ps.basis(), ps.box(), s.initial);

  StepControl control;
  control.cfl = s.cfl;
  control.degree = s.degree;
  control.max_level = s.max_level;
  for (int m = 0; m < d; ++m) control.speeds.push_back(s.v_cut);
  for (int m = 0; m < d; ++m) control.speeds.push_back(s.half_width);
  for (int m = 0; m < d; ++m) control.widths.push_back(2.0 * s.half_width);
  for (int m = 0; m < d; ++m) control.widths.push_back(2.0 * s.v_cut);
  RunResult result;
  result.dof = static_cast<std::int64_t>(f.size());
  result.dt = cfl_dt(control);

  const ConservationTracker tracker(conserved_quantities(ps, f));
  const QuadratureRule x_rule = make_quadrature_rule(s.max_level, s.degree + 3);
  const auto density_distance = [&](const SparseGridFunction& g) {
    return l2_error(density(ps, g), [&model](std::span<const double> x) { return model.equilibrium_density(x); }, x_rule);
  };
  auto view = f.zeros_like();
  const auto load = [&view](std::span<const double> u) { std::copy(u.begin(), u.end(), view.coeffs().begin()); };
  Driver::Visit diagnostics;
  if (hooks.stride > 0 && (hooks.series || hooks.state)) {
    diagnostics = [&](double t, std::span<const double> u) {
      load(u);
      if (hooks.series) {
        SeriesRow r = empty_row(t);
        const auto err = tracker.errors(conserved_quantities(ps, view));
        r.mass_rel_err = err.mass;
        r.momentum_err = err.momentum;
        r.energy_rel_err = err.energy;
        r.enstrophy_rel_err = err.enstrophy;
        // Full-grid entropy quadrature is affordable in 1D1V only.
        if (d == 1) {
          const auto h = entropy_functionals(model, view);
          r.h_log = h.h_log;
          r.h2 = h.h2;
        }
        hooks.series(r);
      }
      if (hooks.state) hooks.state(t, view, nullptr);
    };
  }
  Driver::Visit snapshot;
  if (hooks.snapshot) {
    snapshot = [&](double t, std::span<const double> u) {
      load(u);
      hooks.snapshot(t, view);
    };
  }
  const double rho_distance0 = density_distance(f);
  const RhsFn rhs = [&model](double t, std::span<const double> in, std::span<double> out) { model.rhs(t, in, out); };
  Driver driver(hooks, result.dt, s.final_time);
  result.steps = driver.run(f.coeffs(), 0.0, s.final_time, rhs, diagnostics, snapshot);
  result.final_time = s.final_time;
  result.error = kNaN;
  result.summary.emplace_back("density_l2_distance_initial", rho_distance0);
  result.summary.emplace_back("density_l2_distance_final", density_distance(f));
  result.summary.emplace_back("mass", integral(f));
  result.summary.emplace_back("enstrophy", std::pow(norm_l2(f), 2));
  if (d == 1) {
    const auto h = entropy_functionals(model, f);
    result.summary.emplace_back("H_log", h.h_log);
    result.summary.emplace_back("H2", h.h2);
  }
  return result;
}

double projection_error(int dim, int degree, int level) {
  const auto layout = SparseLayout::make(level, dim);
  const auto basis = std::make_shared<const Basis1d>(degree);
  const Box box = unit_box(dim);
  const auto u = initial_condition("sine-sum", layout, basis, box);
  return l2_error(
      u,
      [](std::span<const double> x) {
        double sum = 0.0;
        for (double v : x) sum += v;
        return std::sin(2.0 * kPi * sum);
      },
      make_quadrature_rule(level, degree + 3));
}

void fill_orders(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].error > 0.0 && rows[i - 1].error > 0.0) {
      rows[i].order = std::log(rows[i - 1].error / rows[i].error) / std::log(rows[i - 1].h / rows[i].h);
    }
  }
}

}  // namespace

std::string_view problem_name(Problem p) {
  for (const auto& e : kProblems) {
    if (e.problem == p) return e.name;
  }
  throw std::logic_error("problem_name: unknown problem");
}

Problem parse_problem(std::string_view name) {
  for (const auto& e : kProblems) {
    if (e.name == name) return e.problem;
  }
  std::string known;
  for (const auto& e : kProblems) known += (known.empty() ? "" : ", ") + std::string(e.name);
  throw std::invalid_argument("unknown problem '" + std::string(name) + "' (expected one of " + known + ")");
}

bool is_vlasov(Problem p) { return p == Problem::vlasov_landau || p == Problem::vlasov_twostream; }
bool is_relaxation(Problem p) { return p == Problem::relax_1d1v || p == Problem::relax_2d2v; }
bool is_transport(Problem p) {
  return p == Problem::advect_const || p == Problem::solid_rotation || p == Problem::deformational;
}

std::string_view flux_name(FluxType f) { return f == FluxType::upwind ? "upwind" : "lf"; }

FluxType parse_flux(std::string_view name) {
  if (name == "upwind") return FluxType::upwind;
  if (name == "lf") return FluxType::lax_friedrichs;
  throw std::invalid_argument("unknown flux '" + std::string(name) + "' (expected upwind or lf)");
}

ProblemSetup default_setup(Problem p, int dim) {
  ProblemSetup s;
  s.problem = p;
  switch (p) {
    case Problem::advect_const:
      s.dim = dim > 0 ? dim : 2;
      if (s.dim > SparseLayout::kMaxDim) throw std::invalid_argument(fail("d", "unsupported dimension"));
      // Two periods of the diagonal flow.
      s.final_time = 2.0 / s.dim;
      s.flux = FluxType::upwind;
      break;
    case Problem::solid_rotation:
      s.dim = dim > 0 ? dim : 2;
      if (s.dim != 2 && s.dim != 3) throw std::invalid_argument(fail("d", "solid-rotation needs d = 2 or 3"));
      s.final_time = 2.0 * kPi;
      s.flux = FluxType::lax_friedrichs;
      s.initial.center = default_center(s.dim);
      s.initial.radius = s.dim == 2 ? 0.23 : 0.45;
      break;
    case Problem::deformational:
      s.dim = dim > 0 ? dim : 2;
      if (s.dim != 2) throw std::invalid_argument(fail("d", "deformational needs d = 2"));
      s.flow_period = 1.5;
      s.final_time = s.flow_period;
      s.flux = FluxType::lax_friedrichs;
      s.initial.center = {0.65, 0.5};
      s.initial.radius = 0.35;
      break;
    case Problem::vlasov_landau:
    case Problem::vlasov_twostream:
      if (dim > 0 && dim != 1) throw std::invalid_argument(fail("d", "Vlasov-Ampere runs are 1D1V"));
      s.dim = 1;
      s.final_time = 10.0;
      s.flux = FluxType::lax_friedrichs;
      s.initial.amplitude = p == Problem::vlasov_landau ? 0.5 : 0.05;
      s.initial.wave_number = 0.5;
      s.x_length = 4.0 * kPi;
      s.v_cut = 2.0 * kPi;
      break;
    case Problem::relax_1d1v:
    case Problem::relax_2d2v: {
      const int d = p == Problem::relax_1d1v ? 1 : 2;
      if (dim > 0 && dim != d) throw std::invalid_argument(fail("d", "fixed by the problem"));
      s.dim = d;
      s.final_time = 6.0;
      s.flux = FluxType::upwind;
      s.half_width = 5.0;
      s.v_cut = 5.0;
      break;
    }
    case Problem::projection_study:
      s.dim = dim > 0 ? dim : 2;
      if (s.dim > SparseLayout::kMaxDim) throw std::invalid_argument(fail("d", "unsupported dimension"));
      s.final_time = 0.0;
      break;
  }
  return s;
}

void validate(const ProblemSetup& s) {
  if (s.max_level < 0 || s.max_level > SparseLayout::kMaxLevel) {
    throw std::invalid_argument(fail("N", "must be in [0, " + std::to_string(SparseLayout::kMaxLevel) + "]"));
  }
  if (s.degree < 0 || s.degree > Basis1d::kMaxDegree) {
    throw std::invalid_argument(fail("k", "must be in [0, " + std::to_string(Basis1d::kMaxDegree) + "]"));
  }
  if (!(s.cfl > 0.0) || !std::isfinite(s.cfl)) throw std::invalid_argument(fail("cfl", "must be positive"));
  if (!(s.final_time >= 0.0) || !std::isfinite(s.final_time)) throw std::invalid_argument(fail("T", "must be non-negative"));
  if (unknown_dim(s) > SparseLayout::kMaxDim) throw std::invalid_argument(fail("d", "too many dimensions"));
  if (s.problem == Problem::solid_rotation || s.problem == Problem::deformational) {
    if (static_cast<int>(s.initial.center.size()) != s.dim) {
      throw std::invalid_argument(fail("center", "needs " + std::to_string(s.dim) + " coordinates"));
    }
    if (!(s.initial.radius > 0.0)) throw std::invalid_argument(fail("radius", "must be positive"));
  }
  if (s.problem == Problem::deformational && !(s.flow_period > 0.0)) {
    throw std::invalid_argument(fail("period", "must be positive"));
  }
  if (is_vlasov(s.problem)) {
    if (!(s.x_length > 0.0)) throw std::invalid_argument(fail("L", "must be positive"));
    if (!(s.v_cut > 0.0)) throw std::invalid_argument(fail("v_cut", "must be positive"));
    if (!(s.initial.wave_number > 0.0)) throw std::invalid_argument(fail("wave_number", "must be positive"));
  }
  if (is_relaxation(s.problem)) {
    if (!(s.half_width > 0.0)) throw std::invalid_argument(fail("L", "must be positive"));
    if (!(s.v_cut > 0.0)) throw std::invalid_argument(fail("v_cut", "must be positive"));
    if (!(s.relax.tau > 0.0)) throw std::invalid_argument(fail("tau", "must be positive"));
    if (!(s.relax.theta > 0.0)) throw std::invalid_argument(fail("theta", "must be positive"));
  }
}

int unknown_dim(const ProblemSetup& s) {
  if (is_vlasov(s.problem)) return 2;
  if (is_relaxation(s.problem)) return 2 * s.dim;
  return s.dim;
}

Box domain_of(const ProblemSetup& s) {
  if (is_vlasov(s.problem)) return Box{{0.0, s.x_length}, {-s.v_cut, s.v_cut}};
  if (is_relaxation(s.problem)) {
    Box b(s.dim, Interval{-s.half_width, s.half_width});
    b.insert(b.end(), s.dim, Interval{-s.v_cut, s.v_cut});
    return b;
  }
  return unit_box(s.dim);
}

double finest_h(const ProblemSetup& s) {
  double w = 0.0;
  for (const auto& iv : domain_of(s)) w = std::max(w, iv.width());
  return std::ldexp(w, -s.max_level);
}

RunResult run_problem(const ProblemSetup& s, const RunHooks& hooks) {
  validate(s);
  const auto start = std::chrono::steady_clock::now();
  RunResult r;
  if (is_transport(s.problem)) {
    r = run_transport(s, hooks);
  } else if (is_vlasov(s.problem)) {
    r = run_vlasov(s, hooks);
  } else if (is_relaxation(s.problem)) {
    r = run_relaxation(s, hooks);
  } else {
    r.dof = dof_count(s.max_level, s.degree, s.dim);
    r.error = projection_error(s.dim, s.degree, s.max_level);
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<ConvergenceRow> convergence_study(ProblemSetup s, int n_min, int n_max,
                                              const std::function<void(const ConvergenceRow&)>& on_row) {
  if (n_min > n_max) throw std::invalid_argument(fail("N_min", "must not exceed N_max"));
  if (is_relaxation(s.problem)) throw std::invalid_argument(fail("problem", "relaxation runs have no error reference"));
  if (is_vlasov(s.problem)) s.reversal = true;
  std::vector<ConvergenceRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    s.max_level = n;
    const RunResult r = run_problem(s);
    ConvergenceRow row;
    row.level = n;
    row.h = finest_h(s);
    row.dof = r.dof;
    row.error = r.error;
    row.dt = r.dt;
    row.wall_seconds = r.wall_seconds;
    rows.push_back(row);
    fill_orders(rows);
    if (on_row) on_row(rows.back());
  }
  return rows;
}

std::vector<ConvergenceRow> projection_study(int dim, int degree, int n_min, int n_max) {
  if (n_min > n_max) throw std::invalid_argument(fail("N_min", "must not exceed N_max"));
  std::vector<ConvergenceRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    ConvergenceRow row;
    row.level = n;
    row.h = std::ldexp(1.0, -n);
    row.dof = dof_count(n, degree, dim);
    row.error = projection_error(dim, degree, n);
    rows.push_back(row);
  }
  fill_orders(rows);
  return rows;
}

double fitted_slope(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("fitted_slope: needs at least two rows");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    if (!(r.error > 0.0)) throw std::invalid_argument("fitted_slope: errors must be positive");
    const double x = r.level, y = std::log2(r.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sgdg
