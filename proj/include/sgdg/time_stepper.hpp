#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sgdg {

class SparseGridFunction;
class TransportOperator;

/// Time step control: dt = cfl / sum_m c_m / h_m (h_m^(4/3) for k >= 3), with
/// h_m = width_m / 2^N.
struct StepControl {
  double cfl = 0.1;
  double final_time = 0.0;
  int degree = 1;
  int max_level = 0;
  std::vector<double> speeds;
  std::vector<double> widths;  // physical widths per dimension; empty means 1
};

double cfl_dt(const StepControl& control);

/// Raised when a stage produces non-finite coefficients.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, int stage, double time)
      : std::runtime_error(what), stage_(stage), time_(time) {}
  int stage() const { return stage_; }
  /// Time of the last state known to be finite.
  double time() const { return time_; }

 private:
  int stage_;
  double time_;
};

/// out = R(t, u).
using RhsFn = std::function<void(double t, std::span<const double> u, std::span<double> out)>;

/// Scratch storage for the three stages.
struct Rk3Workspace {
  std::vector<double> u1, u2, r;
  void resize(std::size_t n) {
    u1.resize(n);
    u2.resize(n);
    r.resize(n);
  }
};

/// One step of the three-stage strong-stability-preserving Runge-Kutta method
/// (stage times t, t + dt, t + dt/2), in place.
void rk3_step(std::span<double> u, double t, double dt, const RhsFn& rhs, Rk3Workspace& ws);

struct IntegrationStats {
  int steps = 0;
  double dt = 0.0;
  double final_time = 0.0;
};

/// Called with (step index, time, state) at t0, every `stride` steps and at the end.
using Observer = std::function<void(int step, double t, std::span<const double> u)>;

/// Steps u from t0 to t_end with step dt; the last step is shortened to land on t_end.
IntegrationStats integrate(std::span<double> u, double t0, double t_end, double dt, const RhsFn& rhs,
                           const Observer& observer = {}, int stride = 1);

/// Transport run: dt from cfl_dt, rhs from the operator.
IntegrationStats integrate(SparseGridFunction& u, TransportOperator& op, const StepControl& control,
                           const Observer& observer = {}, int stride = 1);

}  // namespace sgdg
