#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sgdg/basis1d.hpp"
#include "sgdg/quadrature.hpp"
#include "sgdg/sparse_function.hpp"

namespace sgdg {

/// Fast 1D multiwavelet transform between cell-local orthonormal Legendre
/// coefficients on the 2^N finest cells and hierarchical coefficients.
///
/// Cell data are indexed [cell * P + p] against 2^(N/2) L_p(2^N x - cell); hierarchical
/// data are indexed [position * P + i] (see position_of). Both bases are orthonormal
/// on [0,1], so the transform is orthogonal.
class MultiwaveletTransform {
 public:
  MultiwaveletTransform(const Basis1d& basis, int max_level);

  int max_level() const { return max_level_; }
  int order() const { return order_; }
  std::size_t size() const { return (std::size_t{1} << max_level_) * order_; }

  void forward(std::span<const double> cells, std::span<double> hier) const;
  void inverse(std::span<const double> hier, std::span<double> cells) const;

 private:
  int max_level_;
  int order_;
  std::vector<double> h_;  // [q][h][p]
  std::vector<double> g_;  // [i][h][p]
};

/// Largest full-grid array (in doubles) the dense conversions will allocate.
inline constexpr std::size_t kMaxFullGridEntries = std::size_t{1} << 26;

/// Applies line_fn to every line along dimension m of a dense d-dimensional
/// array with the given extents; the extent of m becomes new_extent.
void transform_lines(std::vector<double>& data, std::vector<int>& extents, int m, int new_extent,
                     const std::function<void(std::span<const double>, std::span<double>)>& line_fn);

/// Dense cell-Legendre coefficients on the full grid Omega_N, extent 2^N * P per dimension.
std::vector<double> to_full_cells(const SparseGridFunction& u);

/// Restriction of full-grid cell coefficients to the sparse space.
void from_full_cells(std::span<const double> cells, SparseGridFunction& u);

/// Values at the tensor Gauss points of every finest cell; extent 2^N * Q per
/// dimension, indexed [cell * Q + q].
std::vector<double> cells_to_points(std::vector<double> cells, int dim, int max_level, int order,
                                    const GaussRule& rule);

/// Composite-Gauss projection of point samples (layout of cells_to_points) onto
/// cell-Legendre coefficients.
std::vector<double> points_to_cells(std::vector<double> values, int dim, int max_level, int order,
                                    const GaussRule& rule);

}  // namespace sgdg
