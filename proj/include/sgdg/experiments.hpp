#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgdg/diagnostics.hpp"
#include "sgdg/kinetic.hpp"
#include "sgdg/transport.hpp"

namespace sgdg {

enum class Problem {
  advect_const,
  solid_rotation,
  deformational,
  vlasov_landau,
  vlasov_twostream,
  relax_1d1v,
  relax_2d2v,
  projection_study,
};

std::string_view problem_name(Problem p);
/// Throws std::invalid_argument for unknown names.
Problem parse_problem(std::string_view name);
bool is_vlasov(Problem p);
bool is_relaxation(Problem p);
bool is_transport(Problem p);

std::string_view flux_name(FluxType f);
/// "upwind" or "lf"; throws std::invalid_argument otherwise.
FluxType parse_flux(std::string_view name);

/// Fully resolved parameters of one run.
struct ProblemSetup {
  Problem problem = Problem::advect_const;
  int dim = 2;  // physical dimension; phase-space problems use dx + dv
  int max_level = 3;
  int degree = 1;
  double cfl = 0.1;
  double final_time = 1.0;
  FluxType flux = FluxType::upwind;
  InitialParams initial;
  // deformational flow
  double flow_period = 1.5;
  // Vlasov-Ampere
  double x_length = 0.0;  // L, periodic x interval [0, L]
  double v_cut = 0.0;     // V_c, v interval [-V_c, V_c]
  bool reversal = false;  // forward to T, reflect v, forward to 2T, compare with the datum
  // relaxation: box [-half_width, half_width]^dx x [-v_cut, v_cut]^dv
  double half_width = 0.0;
  RelaxationSpec relax;
};

/// Defaults for a problem in a given physical dimension (ignored where fixed):
/// CFL 0.1, two periods of advection, one rotation, one deformation period,
/// Landau A = 0.5, two-stream A = 0.05, k = 0.5, L = 4 pi, V_c = 2 pi, relaxation
/// L = V_c = 5 with tau = theta = 1. Throws std::invalid_argument for unsupported
/// dimensions.
ProblemSetup default_setup(Problem p, int dim = 0);

/// Throws std::invalid_argument with a field-level message for inconsistent setups.
void validate(const ProblemSetup& s);

/// Number of phase-space or physical dimensions of the unknown.
int unknown_dim(const ProblemSetup& s);
Box domain_of(const ProblemSetup& s);
/// Smallest mesh size max_m width_m / 2^N.
double finest_h(const ProblemSetup& s);

struct RunHooks {
  /// Diagnostics every `stride` steps (and at both ends); 0 disables them.
  int stride = 0;
  std::function<void(const SeriesRow&)> series;
  /// Raw state at the same instants; field is E for Vlasov runs, otherwise null.
  std::function<void(double t, const SparseGridFunction& f, const SparseGridFunction* field)> state;
  /// Snapshot instants (clamped to [0, T]); each is hit by shortening a step.
  std::vector<double> snapshot_times;
  std::function<void(double t, const SparseGridFunction& f)> snapshot;
  bool parallel = true;
};

struct RunResult {
  std::int64_t dof = 0;
  double dt = 0.0;
  int steps = 0;
  double final_time = 0.0;
  /// L2 error against the exact or reversibility reference; NaN if none applies.
  double error = 0.0;
  double wall_seconds = 0.0;
  /// Named scalar results for the metadata record.
  std::vector<std::pair<std::string, double>> summary;
};

/// Setup, integration and diagnostics of one run. NumericalFailure propagates.
RunResult run_problem(const ProblemSetup& s, const RunHooks& hooks = {});

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  std::int64_t dof = 0;
  double error = 0.0;
  std::optional<double> order;  // empty on the first row
  double dt = 0.0;
  double wall_seconds = 0.0;
};

/// Runs levels n_min..n_max (Vlasov problems with the reversal protocol) and
/// fills orders from consecutive rows. `on_row` is called as rows complete.
std::vector<ConvergenceRow> convergence_study(ProblemSetup s, int n_min, int n_max,
                                              const std::function<void(const ConvergenceRow&)>& on_row = {});

/// L2 projection errors of sin(2 pi sum x) on the unit cube for levels n_min..n_max.
std::vector<ConvergenceRow> projection_study(int dim, int degree, int n_min, int n_max);

/// Least-squares slope of log2(error) against N.
double fitted_slope(const std::vector<ConvergenceRow>& rows);

}  // namespace sgdg
