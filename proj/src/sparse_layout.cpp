#include "sgdg/sparse_layout.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "sgdg/basis1d.hpp"

namespace sgdg {

int MultiIndex::l1() const {
  int s = 0;
  for (int l : levels) s += l;
  return s;
}

int MultiIndex::linf() const {
  int s = 0;
  for (int l : levels) s = std::max(s, l);
  return s;
}

std::vector<MultiIndex> enumerate_levels(int max_level_sum, int dim) {
  if (max_level_sum < 0 || dim < 1) throw std::invalid_argument("enumerate_levels: need N >= 0, d >= 1");
  std::vector<MultiIndex> out;
  std::vector<int> cur(dim, 0);
  std::function<void(int, int)> rec = [&](int m, int budget) {
    if (m == dim) {
      out.push_back(MultiIndex{cur});
      return;
    }
    for (int l = 0; l <= budget; ++l) {
      cur[m] = l;
      rec(m + 1, budget - l);
    }
  };
  rec(0, max_level_sum);
  return out;
}

std::int64_t dof_count(int max_level_sum, int degree, int dim) {
  if (max_level_sum < 0 || degree < 0 || dim < 1) throw std::invalid_argument("dof_count: bad arguments");
  // count(n, m): number of elements over m dims with level sum <= n
  std::int64_t block = 1;
  for (int m = 0; m < dim; ++m) block *= degree + 1;
  std::vector<std::int64_t> count(max_level_sum + 1, 1);  // m = 0: one empty element
  for (int m = 0; m < dim; ++m) {
    std::vector<std::int64_t> next(max_level_sum + 1, 0);
    for (int n = 0; n <= max_level_sum; ++n) {
      for (int l = 0; l <= n; ++l) next[n] += elements_at_level(l) * count[n - l];
    }
    count = std::move(next);
  }
  return count[max_level_sum] * block;
}

SparseLayout::SparseLayout(int max_level_sum, int dim) : max_level_(max_level_sum), dim_(dim) {
  if (max_level_sum < 0 || max_level_sum > kMaxLevel) throw std::invalid_argument("SparseLayout: N out of range");
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("SparseLayout: dimension out of range");
  levels_ = enumerate_levels(max_level_sum, dim);

  std::size_t radix_size = 1;
  for (int m = 0; m < dim; ++m) radix_size *= static_cast<std::size_t>(max_level_sum + 1);
  level_lookup_.assign(radix_size, -1);

  int offset = 0;
  for (std::size_t li = 0; li < levels_.size(); ++li) {
    const auto& lv = levels_[li].levels;
    std::size_t key = 0;
    for (int m = 0; m < dim; ++m) key = key * (max_level_sum + 1) + lv[m];
    level_lookup_[key] = static_cast<int>(li);
    level_offset_.push_back(offset);
    int count = 1;
    for (int m = 0; m < dim; ++m) count *= elements_at_level(lv[m]);
    // translations in row-major order, last dimension fastest
    std::vector<int> j(dim, 0);
    for (int n = 0; n < count; ++n) {
      for (int m = 0; m < dim; ++m) positions_.push_back(static_cast<std::uint16_t>(position_of(lv[m], j[m])));
      for (int m = dim - 1; m >= 0; --m) {
        if (++j[m] < elements_at_level(lv[m])) break;
        j[m] = 0;
      }
    }
    offset += count;
  }

  fibers_.resize(dim);
  fiber_ids_.resize(dim);
  std::vector<int> pos(dim);
  for (int m = 0; m < dim; ++m) {
    for (int e = 0; e < num_elements(); ++e) {
      if (position(e, m) != 0) continue;
      const int depth = max_level_sum - (level_sum(e));
      Fiber f{depth, static_cast<int>(fiber_ids_[m].size())};
      for (int mm = 0; mm < dim; ++mm) pos[mm] = position(e, mm);
      for (int p = 0; p < (1 << depth); ++p) {
        pos[m] = p;
        fiber_ids_[m].push_back(element_index(pos));
      }
      fibers_[m].push_back(f);
    }
  }
}

int SparseLayout::level_sum(int e) const {
  int s = 0;
  for (int m = 0; m < dim_; ++m) s += level_of_position(position(e, m));
  return s;
}

int SparseLayout::element_index(std::span<const int> pos) const {
  std::size_t key = 0;
  int sum = 0;
  for (int m = 0; m < dim_; ++m) {
    const int l = level_of_position(pos[m]);
    if (pos[m] < 0 || l > max_level_) return -1;
    sum += l;
    key = key * (max_level_ + 1) + l;
  }
  if (sum > max_level_) return -1;
  const int li = level_lookup_[key];
  int idx = 0;
  for (int m = 0; m < dim_; ++m) {
    const int l = level_of_position(pos[m]);
    idx = idx * elements_at_level(l) + translation_of_position(pos[m]);
  }
  return level_offset_[li] + idx;
}

}  // namespace sgdg
