#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace sgdg {

/// Level vector l of a hierarchical increment space W_l.
struct MultiIndex {
  std::vector<int> levels;

  int dim() const { return static_cast<int>(levels.size()); }
  int l1() const;
  int linf() const;

  auto operator<=>(const MultiIndex&) const = default;
};

/// Identifier of one tensor basis function: level, translation, zero-based poly index.
struct BasisId {
  MultiIndex level;
  std::vector<int> translation;
  std::vector<int> poly;
};

/// All level vectors with |l|_1 <= max_level_sum, in lexicographic order.
std::vector<MultiIndex> enumerate_levels(int max_level_sum, int dim);

/// Number of basis functions of the sparse space for (N, k, d).
std::int64_t dof_count(int max_level_sum, int degree, int dim);

/// Element (level vector + translation vector) structure of the sparse index set
/// |l|_1 <= N in d dimensions. Each element carries a dense (k+1)^d block of
/// coefficients in the functions that use it.
///
/// Per dimension an element is described by its hierarchical 1D position
/// (see position_of). A fiber along dimension m is the set of elements that share
/// all coordinates except m; it always holds exactly the 1D positions
/// [0, 2^depth) with depth = N - sum of the other levels.
class SparseLayout {
 public:
  static constexpr int kMaxLevel = 12;
  static constexpr int kMaxDim = 6;

  SparseLayout(int max_level_sum, int dim);

  static std::shared_ptr<const SparseLayout> make(int max_level_sum, int dim) {
    return std::make_shared<const SparseLayout>(max_level_sum, dim);
  }

  int max_level() const { return max_level_; }
  int dim() const { return dim_; }
  int num_elements() const { return static_cast<int>(positions_.size()) / dim_; }
  const std::vector<MultiIndex>& levels() const { return levels_; }

  /// 1D position of element e in dimension m.
  int position(int e, int m) const { return positions_[static_cast<std::size_t>(e) * dim_ + m]; }
  std::span<const std::uint16_t> positions(int e) const {
    return {positions_.data() + static_cast<std::size_t>(e) * dim_, static_cast<std::size_t>(dim_)};
  }
  int level_sum(int e) const;

  /// Element id for a vector of 1D positions, or -1 when outside the sparse set.
  int element_index(std::span<const int> pos) const;

  struct Fiber {
    int depth;
    int offset;  // into fiber_elements(m)
  };
  std::span<const Fiber> fibers(int m) const { return fibers_[m]; }
  /// Element ids of fiber f along m, indexed by 1D position.
  std::span<const int> fiber_elements(int m, const Fiber& f) const {
    return {fiber_ids_[m].data() + f.offset, static_cast<std::size_t>(1) << f.depth};
  }

 private:
  int max_level_;
  int dim_;
  std::vector<MultiIndex> levels_;
  std::vector<int> level_lookup_;     // mixed radix (N+1)^d -> index into levels_, or -1
  std::vector<int> level_offset_;     // first element of each level vector
  std::vector<std::uint16_t> positions_;
  std::vector<std::vector<Fiber>> fibers_;
  std::vector<std::vector<int>> fiber_ids_;
};

/// Number of elements of a 1D level (1 for level 0, 2^(l-1) otherwise).
constexpr int elements_at_level(int level) { return level == 0 ? 1 : 1 << (level - 1); }

}  // namespace sgdg
