#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sgdg/basis1d.hpp"
#include "sgdg/quadrature.hpp"

namespace sgdg {

/// Sparse 1D operator in the hierarchical basis of V_N^k on [0,1].
///
/// Rows and columns are 1D positions (see position_of); each stored entry is a dense
/// P x P block [row poly][col poly]. Columns are sorted ascending within a row, which
/// orders them by level, so the entries with col level >= row level form a suffix
/// starting at upper_begin(row).
class HierMatrix {
 public:
  HierMatrix() = default;
  HierMatrix(int max_level, int order) : max_level_(max_level), order_(order) {}

  int max_level() const { return max_level_; }
  int order() const { return order_; }
  int rows() const { return 1 << max_level_; }
  std::size_t nnz_blocks() const { return cols_.size(); }
  bool has_lower() const { return has_lower_; }

  int row_begin(int r) const { return row_start_[r]; }
  int row_end(int r) const { return row_start_[r + 1]; }
  int upper_begin(int r) const { return upper_begin_[r]; }
  int col(int entry) const { return cols_[entry]; }
  const double* block(int entry) const { return blocks_.data() + static_cast<std::size_t>(entry) * order_ * order_; }

  /// Block at (r, c) or nullptr.
  const double* find(int r, int c) const;

  /// Value of entry (row position r, poly i) x (col position c, poly j).
  double value(int r, int i, int c, int j) const;

  /// a * A + b * B (same level and order).
  static HierMatrix combine(double a, const HierMatrix& lhs, double b, const HierMatrix& rhs);

  /// Builder: blocks keyed by (row, col), assembled then frozen. Blocks whose
  /// largest entry is below drop_tol times the largest entry of the matrix are
  /// dropped.
  class Builder {
   public:
    Builder(int max_level, int order) : max_level_(max_level), order_(order) {}
    double* block(int r, int c);
    HierMatrix build(double drop_tol = 1e-14) const;

   private:
    int max_level_;
    int order_;
    std::unordered_map<std::uint64_t, std::size_t> index_;  // (row, col) -> block offset
    std::vector<double> data_;
  };

 private:
  friend class Builder;
  int max_level_ = 0;
  int order_ = 1;
  bool has_lower_ = false;
  std::vector<int> row_start_;
  std::vector<int> upper_begin_;
  std::vector<int> cols_;
  std::vector<double> blocks_;
};

/// Weight function on the unit interval; the side selects the one-sided limit at
/// breakpoints (only used for interface terms). An empty function means 1.
using Weight1d = std::function<double(double, Side)>;

enum class Boundary { periodic, zero_exterior };

/// Values and derivatives of all hierarchical basis functions at the Gauss points
/// of every finest cell, plus one-sided traces at every finest-grid face.
class BasisCellTable {
 public:
  BasisCellTable(const Basis1d& basis, int max_level, int points_per_cell);

  const Basis1d& basis() const { return *basis_; }
  int max_level() const { return max_level_; }
  int order() const { return order_; }
  const GaussRule& rule() const { return rule_; }
  int cells() const { return 1 << max_level_; }

  /// Ancestor position of finest cell c at level l.
  static int ancestor(int max_level, int c, int l) {
    return l == 0 ? 0 : position_of(l, c >> (max_level - l + 1));
  }
  double value(int c, int l, int i, int q) const { return values_[index(c, l, i, q)]; }
  double derivative(int c, int l, int i, int q) const { return derivs_[index(c, l, i, q)]; }
  /// Trace of the level-l ancestor of cell c at the left (0) or right (1) end of c.
  double trace(int c, int l, int i, int end) const {
    return traces_[((static_cast<std::size_t>(c) * (max_level_ + 1) + l) * order_ + i) * 2 + end];
  }

 private:
  std::size_t index(int c, int l, int i, int q) const {
    return ((static_cast<std::size_t>(c) * (max_level_ + 1) + l) * order_ + i) * rule_.size() + q;
  }
  const Basis1d* basis_;
  int max_level_;
  int order_;
  GaussRule rule_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  std::vector<double> traces_;
};

/// M[r][c] = int w v_c v_r.
HierMatrix assemble_mass(const BasisCellTable& table, const Weight1d& weight);

/// Volume-minus-average part of the DG advection operator for a velocity factor phi:
/// A[r][c] = int phi v_c v_r' - sum_faces {phi v_c} [v_r], with [v] = v^- - v^+.
HierMatrix assemble_advection(const BasisCellTable& table, const Weight1d& phi, Boundary bc);

/// Interface penalty: J[r][c] = sum_faces w(face) [v_c] [v_r]. For weights with a jump
/// at a face the average of the two one-sided values is used.
HierMatrix assemble_jump(const BasisCellTable& table, const Weight1d& weight, Boundary bc);

/// Reflection x -> 1 - x as an operator on hierarchical coefficients.
HierMatrix assemble_reflection(const Basis1d& basis, int max_level);

}  // namespace sgdg
