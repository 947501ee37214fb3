#pragma once

#include <memory>
#include <span>
#include <vector>

#include "sgdg/hier_matrix.hpp"
#include "sgdg/sparse_layout.hpp"

namespace sgdg {

/// coeff * (A_0 kron A_1 kron ... kron A_{d-1}); a null factor is the identity.
struct TensorTerm {
  double coeff = 1.0;
  std::vector<const HierMatrix*> factors;
};

/// Which entries of a 1D matrix a sweep uses: all, those with col level >= row
/// level, or those with col level < row level.
enum class SweepPart { full, upper, lower };

/// out = scale * (A along dimension m) in, restricted to the sparse set, or
/// out += ... when accumulate is set. Blocks are (k+1)^d with poly index of
/// dimension 0 slowest. Parallel over fibers when OpenMP is enabled.
void sweep(const SparseLayout& layout, int order, int m, const HierMatrix& a, SweepPart part,
           std::span<const double> in, std::span<double> out, double scale, bool accumulate,
           bool parallel = true);

/// Applies tensor-product operators on the sparse space exactly, by splitting all
/// but one factor into upper and lower parts and sweeping the upper dimensions
/// first, the unsplit one next and the lower dimensions last.
class TensorApplier {
 public:
  TensorApplier(std::shared_ptr<const SparseLayout> layout, int order);

  const SparseLayout& layout() const { return *layout_; }
  int order() const { return order_; }
  std::size_t size() const { return size_; }

  void set_parallel(bool parallel) { parallel_ = parallel; }

  /// out += term(in).
  void apply(const TensorTerm& term, std::span<const double> in, std::span<double> out);

 private:
  std::shared_ptr<const SparseLayout> layout_;
  int order_;
  std::size_t size_;
  bool parallel_ = true;
  std::vector<double> scratch_[2];
};

/// Straightforward O(E^2) reference: out += term(in), pairing every output
/// element with every input element.
void apply_term_reference(const SparseLayout& layout, int order, const TensorTerm& term,
                          std::span<const double> in, std::span<double> out);

}  // namespace sgdg
