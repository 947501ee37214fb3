#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "sgdg/quadrature.hpp"
#include "sgdg/sparse_function.hpp"

namespace sgdg {

/// Scalar field evaluated at physical coordinates.
using ScalarField = std::function<double(std::span<const double>)>;
using Function1d = std::function<double(double)>;

/// Composite Gauss rule: `points` nodes per dimension on each cell of the
/// uniform grid with 2^resolution cells per dimension.
struct QuadratureRule {
  int resolution = 0;
  GaussRule gauss;
};

QuadratureRule make_quadrature_rule(int resolution, int points);

/// Default composite rule for a space: resolution N, k+2 points per cell.
QuadratureRule default_rule(const SparseGridFunction& u);

/// L2 projection onto the sparse space of u's layout/basis/domain: every
/// coefficient is the composite-quadrature inner product with its basis function
/// on Omega_N. Throws std::domain_error for non-finite samples.
SparseGridFunction project(const ScalarField& f, std::shared_ptr<const SparseLayout> layout,
                           std::shared_ptr<const Basis1d> basis, Box domain, int points_per_cell = 0);

/// Hierarchical 1D coefficients (indexed [position * P + i]) of the L2
/// projection onto V_N^k over an interval.
std::vector<double> project_1d(const Function1d& f, const Basis1d& basis, int max_level, Interval iv,
                               int points_per_cell = 0);

/// Projection of prod_m factors[m](x_m): 1D projections per dimension, tensorized
/// and restricted to |l|_1 <= N.
SparseGridFunction project_separable(std::span<const Function1d> factors, std::shared_ptr<const SparseLayout> layout,
                                     std::shared_ptr<const Basis1d> basis, Box domain, int points_per_cell = 0);

/// Sum of separable products.
SparseGridFunction project_separable_sum(const std::vector<std::vector<Function1d>>& terms,
                                         std::shared_ptr<const SparseLayout> layout,
                                         std::shared_ptr<const Basis1d> basis, Box domain,
                                         int points_per_cell = 0);

/// Tensor product of per-dimension hierarchical 1D coefficient vectors,
/// restricted to the sparse set; written into u.
void tensorize(std::span<const std::vector<double>> factors_1d, SparseGridFunction& u);

/// sqrt(int (u - f)^2) by the composite rule (rule.resolution >= N).
double l2_error(const SparseGridFunction& u, const ScalarField& exact, const QuadratureRule& rule);

/// g(u(x), x) at a physical point.
using PointFunctional = std::function<double(double value, std::span<const double> x)>;

/// int g(u(x), x) dx by the composite rule (rule.resolution >= N).
double integrate_functional(const SparseGridFunction& u, const PointFunctional& g, const QuadratureRule& rule);

/// Values of u at every tensor point of the composite rule; extent 2^R * Q per dim.
std::vector<double> sample_at_rule(const SparseGridFunction& u, const QuadratureRule& rule);

}  // namespace sgdg
