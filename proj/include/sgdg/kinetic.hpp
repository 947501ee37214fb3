#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "sgdg/hier_matrix.hpp"
#include "sgdg/projection.hpp"
#include "sgdg/sparse_function.hpp"
#include "sgdg/tensor_apply.hpp"
#include "sgdg/transport.hpp"

namespace sgdg {

/// Phase space (x, v): x dimensions first, then v dimensions, all in one sparse
/// layout with |l|_1 <= N over dx + dv dimensions. Functions of x alone live on
/// the dx-dimensional sparse layout of the same N.
class PhaseSpace {
 public:
  /// Throws std::invalid_argument unless dx = dv in {1, 2} and all widths are positive.
  PhaseSpace(int dx, int dv, int max_level, int degree, Box x_box, Box v_box);

  int dx() const { return dx_; }
  int dv() const { return dv_; }
  int dim() const { return dx_ + dv_; }
  int max_level() const { return max_level_; }
  int degree() const { return basis_->degree(); }
  const Box& x_box() const { return x_box_; }
  const Box& v_box() const { return v_box_; }
  /// x intervals followed by v intervals.
  const Box& box() const { return box_; }
  const std::shared_ptr<const SparseLayout>& layout() const { return layout_; }
  const std::shared_ptr<const SparseLayout>& x_layout() const { return x_layout_; }
  const std::shared_ptr<const Basis1d>& basis() const { return basis_; }

  SparseGridFunction zeros() const { return SparseGridFunction(layout_, basis_, box_); }
  SparseGridFunction x_zeros() const { return SparseGridFunction(x_layout_, basis_, x_box_); }

 private:
  int dx_, dv_, max_level_;
  Box x_box_, v_box_, box_;
  std::shared_ptr<const SparseLayout> layout_, x_layout_;
  std::shared_ptr<const Basis1d> basis_;
};

/// Exact integrals int phi(v) v^r dv of every 1D basis function (all levels) over
/// one velocity interval, for r = 0..max_power.
class VelocityMoments {
 public:
  VelocityMoments(const Basis1d& basis, int max_level, Interval v, int max_power = 2);
  double operator()(int power, int position, int poly) const {
    return table_[(static_cast<std::size_t>(power) * positions_ + position) * order_ + poly];
  }

 private:
  int order_;
  int positions_;
  std::vector<double> table_;
};

/// int f prod_m v_m^powers[m] dv as a function of x (exact).
SparseGridFunction velocity_moment(const PhaseSpace& ps, const SparseGridFunction& f, std::span<const int> powers);
/// rho(x) = int f dv.
SparseGridFunction density(const PhaseSpace& ps, const SparseGridFunction& f);
/// J_m(x) = int f v_m dv for each velocity dimension m.
std::vector<SparseGridFunction> current_density(const PhaseSpace& ps, const SparseGridFunction& f);

/// Hierarchical 1D coefficients [position * P + i] of a function on a 1D layout.
std::vector<double> hierarchical_1d(const SparseGridFunction& u);

/// f(x, v) -> f(x, -v): exact on the sparse space since the mesh is symmetric.
SparseGridFunction reflect_velocity(const PhaseSpace& ps, const SparseGridFunction& f);

/// Vlasov-Ampere in 1D1V: f_t + v f_x + E(x) f_v = 0, E_t = -J. The state vector
/// packs the coefficients of f followed by those of E (a 1D function at level N).
class VlasovAmpere {
 public:
  /// Throws std::invalid_argument unless dx = dv = 1.
  VlasovAmpere(const PhaseSpace& ps, FluxSpec flux = {});

  const PhaseSpace& phase_space() const { return ps_; }
  std::size_t f_size() const { return f_size_; }
  std::size_t e_size() const { return e_size_; }
  std::size_t size() const { return f_size_ + e_size_; }

  std::vector<double> pack(const SparseGridFunction& f, const SparseGridFunction& e) const;
  void unpack(std::span<const double> state, SparseGridFunction& f, SparseGridFunction& e) const;

  /// out = (df/dt, dE/dt) at the given state; the operator's E factor is refreshed.
  void rhs(double t, std::span<const double> state, std::span<double> out);

  TransportOperator& transport() { return op_; }
  void set_parallel(bool parallel) { op_.set_parallel(parallel); }

 private:
  PhaseSpace ps_;
  std::size_t f_size_, e_size_;
  std::vector<VelocityMoments> moments_;
  TransportOperator op_;
};

struct RelaxationSpec {
  double tau = 1.0;
  double theta = 1.0;
};

/// Linear relaxation with the confining field E = -x:
/// f_t + v . grad_x f - x . grad_v f = (mu(v) rho(x) - f) / tau,
/// mu the (cut-off, not renormalized) absolute Maxwellian of temperature theta.
class RelaxationModel {
 public:
  RelaxationModel(const PhaseSpace& ps, RelaxationSpec spec, FluxSpec flux = {});

  const PhaseSpace& phase_space() const { return ps_; }
  const RelaxationSpec& spec() const { return spec_; }
  std::size_t size() const { return op_.size(); }

  void rhs(double t, std::span<const double> f, std::span<double> out);
  /// Collision part only: out = (P mu (x) rho_h - f) / tau.
  void source(std::span<const double> f, std::span<double> out) const;

  /// Analytic Maxwellian mu(v) and equilibrium M(x, v) = rho_inf(x) mu(v), with
  /// rho_inf normalized over the x box.
  double maxwellian(std::span<const double> v) const;
  double equilibrium(std::span<const double> xv) const;
  double equilibrium_density(std::span<const double> x) const;
  /// Projection of M onto the phase-space sparse space.
  SparseGridFunction projected_equilibrium() const;

  TransportOperator& transport() { return op_; }
  void set_parallel(bool parallel) { op_.set_parallel(parallel); }

 private:
  PhaseSpace ps_;
  RelaxationSpec spec_;
  TransportOperator op_;
  std::vector<std::vector<double>> mu_hier_;  // per v dimension
  double rho_norm_ = 1.0;
};

/// Parameters of the named initial conditions.
struct InitialParams {
  double amplitude = 0.5;    // landau / two-stream perturbation A
  double wave_number = 0.5;  // landau / two-stream k
  std::vector<double> center;  // cosine bell
  double radius = 0.23;        // cosine bell b
};

/// Projection of a named initial datum:
///   landau, two-stream: 1D1V perturbed Maxwellian / two-stream profiles;
///   relax-1d, relax-2d: normalized to unit mass over the box;
///   cosine-bell: b^(d-1) cos^6(pi r / (2b)) for r <= b;
///   sine-sum: sin(2 pi sum x).
/// Throws std::invalid_argument for unknown names.
SparseGridFunction initial_condition(std::string_view name, std::shared_ptr<const SparseLayout> layout,
                                     std::shared_ptr<const Basis1d> basis, const Box& domain,
                                     const InitialParams& params = {});

/// Normalization constant of the relaxation initial datum (dx = 1 or 2) so that
/// its integral over the box is one.
double relaxation_normalization(int dx, const Box& box);

/// Initial electric field for the 1D1V benchmarks from Gauss's law with a
/// neutralizing background equal to the mean density: E = m A / k sin(k x),
/// m the velocity mass of the profile.
SparseGridFunction initial_field(std::string_view name, const PhaseSpace& ps, const InitialParams& params = {});

/// Velocity profiles of the 1D1V benchmarks.
double maxwellian_1d(double v);
double two_stream_profile(double v);

}  // namespace sgdg
