#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sgdg/hier_matrix.hpp"
#include "sgdg/sparse_function.hpp"
#include "sgdg/tensor_apply.hpp"

namespace sgdg {

/// A function of one physical coordinate: a constant, an analytic function, or
/// a piecewise polynomial on the 2^N uniform cells of an interval.
class Factor1d {
 public:
  enum class Kind { constant, analytic, piecewise };

  static Factor1d constant(double c);
  static Factor1d analytic(std::function<double(double)> fn);
  /// Cell-local orthonormal Legendre coefficients, [cell * order + p], on iv.
  static Factor1d piecewise(std::vector<double> cells, int order, int max_level, Interval iv);
  /// Piecewise polynomial from hierarchical 1D coefficients ([position * order + i]).
  static Factor1d from_hierarchical(std::span<const double> hier, const Basis1d& basis, int max_level, Interval iv);

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::constant; }
  double constant_value() const { return value_; }

  /// Value at a physical coordinate; side picks the one-sided limit at cell faces.
  double operator()(double x, Side side = Side::right) const;

  /// max |f| over an interval, sampled at `per_cell` points on each of 2^level cells
  /// (exact for constants).
  double max_abs(Interval iv, int level, int per_cell) const;

 private:
  Kind kind_ = Kind::constant;
  double value_ = 1.0;
  std::function<double(double)> fn_;
  std::vector<double> cells_;
  int order_ = 0;
  int max_level_ = 0;
  Interval iv_;
};

/// coeff * prod_n factors[n](x_n).
struct SeparableTerm {
  double coeff = 1.0;
  std::vector<Factor1d> factors;
};

/// Velocity a(t, x) with component m = g_m(t) * sum of separable terms.
struct VelocityField {
  std::vector<std::vector<SeparableTerm>> components;
  /// Optional time factor per component (empty means 1).
  std::vector<std::function<double(double)>> time_factor;
  /// Optional exact max_x |component m| without the time factor.
  std::optional<std::vector<double>> exact_max;
  /// True once analytic factors have been replaced by their projections.
  bool projected = false;

  int dim() const { return static_cast<int>(components.size()); }
  double time_scale(int m, double t) const;
  double eval(int m, std::span<const double> x, double t) const;
};

VelocityField constant_field(std::span<const double> a);
/// (-x2 + 1/2, x1 - 1/2) on the unit square.
VelocityField solid_rotation_2d();
/// The 3D rotation about the axis {x1 = x3, x2 = 1/2}.
VelocityField solid_rotation_3d();
/// (sin^2(pi x1) sin(2 pi x2) g, -sin^2(pi x2) sin(2 pi x1) g), g = cos(pi t / period).
VelocityField deformational_field(double period);

enum class FluxType { upwind, lax_friedrichs };
enum class AlphaSource { exact, sampled };

struct FluxSpec {
  FluxType type = FluxType::upwind;
  /// Lax-Friedrichs: use the field's exact maximum when available, or sampled bounds.
  AlphaSource alpha = AlphaSource::exact;
};

using BoundarySpec = std::vector<Boundary>;

/// Single-interface numerical flux of a*u for normal speed a_dot_n (normal from the
/// minus side to the plus side). Throws std::invalid_argument for negative alpha.
double scalar_flux(double a_dot_n, double u_minus, double u_plus, const FluxSpec& spec, double alpha_n);

/// Each analytic factor replaced by its 1D L2 projection onto V_N^k over the
/// matching domain interval.
VelocityField project_field(const VelocityField& field, const Basis1d& basis, int max_level, const Box& domain);

/// Per-component alpha_m(t) >= max_x |a_m(t, x)|: the exact maximum when the field
/// carries one (and FluxSpec::alpha is exact), otherwise per-term products of sampled
/// factor maxima with 4(k+1) points per finest cell.
std::vector<double> compute_alpha(const VelocityField& field, double t, const Box& domain, int max_level, int degree,
                                  AlphaSource source = AlphaSource::exact);

/// Semi-discrete DG operator R(u) for u_t + div(a u) = 0 on a sparse space.
///
/// Each separable term of each velocity component contributes one tensor-product
/// operator: the flux-direction volume/average matrix times weighted mass matrices
/// in the other directions. Interface penalties (upwind |a| jumps or global
/// Lax-Friedrichs alpha jumps) are further tensor terms. Upwind requires every
/// component to be a single separable term, for which |a| factors exactly.
class TransportOperator {
 public:
  TransportOperator(std::shared_ptr<const SparseLayout> layout, std::shared_ptr<const Basis1d> basis, Box domain,
                    VelocityField field, FluxSpec flux, BoundarySpec bc);

  const VelocityField& field() const { return field_; }
  const FluxSpec& flux() const { return flux_; }
  const BoundarySpec& boundary() const { return bc_; }
  const Box& domain() const { return domain_; }
  std::size_t size() const { return applier_.size(); }

  /// Replaces one factor (component m, term, dimension n) and rebuilds the
  /// affected matrices.
  void set_factor(int m, int term, int n, Factor1d factor);

  /// Overrides the Lax-Friedrichs alpha of a component (otherwise compute_alpha).
  void set_alpha_override(std::optional<std::vector<double>> alpha) { alpha_override_ = std::move(alpha); }

  /// out = R(in) at time t (coefficient vectors of the layout).
  void apply(double t, std::span<const double> in, std::span<double> out);

  void set_parallel(bool parallel) { applier_.set_parallel(parallel); }

 private:
  struct Part {
    int component = 0;
    int term = 0;
    HierMatrix adv;                   // along the component direction
    std::vector<HierMatrix> mass;     // per dimension; unused where the factor is constant
    std::vector<HierMatrix> abs_mass;  // upwind only
    std::vector<char> weighted;        // per dimension: factor is not a constant
    HierMatrix jump;                  // upwind only, weighted by |factor|
    HierMatrix combined;              // adv and penalty merged when both are 1D
    bool use_combined = false;
    double fold = 1.0;                // product of constant factors
    double abs_fold = 1.0;
  };

  Weight1d weight_of(const Factor1d& f, int dim, bool absolute) const;
  void build_part(Part& p);
  void build_combined(Part& p);

  std::shared_ptr<const SparseLayout> layout_;
  std::shared_ptr<const Basis1d> basis_;
  Box domain_;
  VelocityField field_;
  FluxSpec flux_;
  BoundarySpec bc_;
  std::vector<BasisCellTable> tables_;  // one per distinct max level (shared by all dims)
  std::vector<Part> parts_;
  std::vector<HierMatrix> plain_jump_;  // per dimension, for Lax-Friedrichs
  std::vector<double> alpha_static_;    // cached when the field is time independent
  std::optional<std::vector<double>> alpha_override_;
  TensorApplier applier_;
};

/// Convenience wrapper: R(u) for a one-off evaluation.
SparseGridFunction apply_rhs(const SparseGridFunction& u, const VelocityField& field, const FluxSpec& spec,
                             const BoundarySpec& bc, double t);

}  // namespace sgdg
