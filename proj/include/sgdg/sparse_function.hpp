#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "sgdg/basis1d.hpp"
#include "sgdg/sparse_layout.hpp"

namespace sgdg {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
};

/// Axis-aligned box; internals always work on [0,1]^d and pull back through the
/// affine map x = lo + width * xhat.
using Box = std::vector<Interval>;

Box unit_box(int dim);
double box_volume(const Box& box);

/// A function of the sparse space V_N^k over a box.
///
/// Coefficients are taken against the unit-cube basis pulled back to the box, so
/// u(x) = sum c * v(xhat) and ||u||^2 = volume * sum c^2. Storage is one dense
/// (k+1)^d block per element of the layout, poly index of dimension 0 slowest.
class SparseGridFunction {
 public:
  SparseGridFunction(std::shared_ptr<const SparseLayout> layout, std::shared_ptr<const Basis1d> basis,
                     Box domain);

  const SparseLayout& layout() const { return *layout_; }
  const std::shared_ptr<const SparseLayout>& layout_ptr() const { return layout_; }
  const Basis1d& basis() const { return *basis_; }
  const std::shared_ptr<const Basis1d>& basis_ptr() const { return basis_; }
  const Box& domain() const { return domain_; }

  int dim() const { return layout_->dim(); }
  int max_level() const { return layout_->max_level(); }
  int degree() const { return basis_->degree(); }
  int order() const { return basis_->order(); }
  int block_size() const { return block_size_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<double> coeffs() { return coeffs_; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> block(int e) {
    return {coeffs_.data() + static_cast<std::size_t>(e) * block_size_, static_cast<std::size_t>(block_size_)};
  }
  std::span<const double> block(int e) const {
    return {coeffs_.data() + static_cast<std::size_t>(e) * block_size_, static_cast<std::size_t>(block_size_)};
  }

  /// Throws std::out_of_range for ids outside the sparse set.
  double coefficient(const BasisId& id) const;
  void set_coefficient(const BasisId& id, double value);

  /// Same layout, basis and domain; zero coefficients.
  SparseGridFunction zeros_like() const;
  bool same_space(const SparseGridFunction& other) const;

  SparseGridFunction& operator+=(const SparseGridFunction& other);
  SparseGridFunction& operator-=(const SparseGridFunction& other);
  SparseGridFunction& operator*=(double s);

 private:
  std::size_t flat_index(const BasisId& id) const;

  std::shared_ptr<const SparseLayout> layout_;
  std::shared_ptr<const Basis1d> basis_;
  Box domain_;
  int block_size_;
  std::vector<double> coeffs_;
};

SparseGridFunction operator-(SparseGridFunction a, const SparseGridFunction& b);
SparseGridFunction operator+(SparseGridFunction a, const SparseGridFunction& b);

/// Point value; throws std::out_of_range for points outside the box. Optional
/// per-dimension sides select one-sided limits at breakpoints (default right).
double eval_point(const SparseGridFunction& u, std::span<const double> x, std::span<const Side> sides = {});

/// L2 norm by Parseval.
double norm_l2(const SparseGridFunction& u);

/// Plain-text point samples over the first two coordinates (one for d = 1) on a
/// uniform resolution x resolution grid including the box faces; any further
/// coordinates are fixed at the box center and listed in a "# slice" header line.
void write_snapshot(std::ostream& os, const SparseGridFunction& u, int resolution, double time);

}  // namespace sgdg
