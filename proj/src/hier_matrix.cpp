#include "sgdg/hier_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sgdg/sparse_layout.hpp"

namespace sgdg {

namespace {

std::uint64_t pair_key(int r, int c) { return (static_cast<std::uint64_t>(r) << 32) | static_cast<std::uint32_t>(c); }

double weight_at(const Weight1d& w, double x, Side side) { return w ? w(x, side) : 1.0; }

}  // namespace

const double* HierMatrix::find(int r, int c) const {
  const auto first = cols_.begin() + row_start_[r];
  const auto last = cols_.begin() + row_start_[r + 1];
  const auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return nullptr;
  return block(static_cast<int>(it - cols_.begin()));
}

double HierMatrix::value(int r, int i, int c, int j) const {
  const double* b = find(r, c);
  return b ? b[i * order_ + j] : 0.0;
}

HierMatrix HierMatrix::combine(double a, const HierMatrix& lhs, double b, const HierMatrix& rhs) {
  if (lhs.max_level_ != rhs.max_level_ || lhs.order_ != rhs.order_) {
    throw std::invalid_argument("HierMatrix::combine: incompatible operands");
  }
  Builder builder(lhs.max_level_, lhs.order_);
  const int bs = lhs.order_ * lhs.order_;
  for (const auto& [m, s] : {std::pair{&lhs, a}, std::pair{&rhs, b}}) {
    if (s == 0.0) continue;
    for (int r = 0; r < m->rows(); ++r) {
      for (int e = m->row_begin(r); e < m->row_end(r); ++e) {
        double* dst = builder.block(r, m->col(e));
        const double* src = m->block(e);
        for (int t = 0; t < bs; ++t) dst[t] += s * src[t];
      }
    }
  }
  return builder.build(0.0);
}

double* HierMatrix::Builder::block(int r, int c) {
  const std::size_t bs = static_cast<std::size_t>(order_) * order_;
  auto [it, inserted] = index_.try_emplace(pair_key(r, c), data_.size());
  if (inserted) data_.resize(data_.size() + bs, 0.0);
  return data_.data() + it->second;
}

HierMatrix HierMatrix::Builder::build(double drop_tol) const {
  const std::size_t bs = static_cast<std::size_t>(order_) * order_;
  double global_max = 0.0;
  for (double v : data_) global_max = std::max(global_max, std::abs(v));
  const double cutoff = drop_tol * global_max;

  std::vector<std::pair<std::uint64_t, std::size_t>> kept;
  kept.reserve(index_.size());
  for (const auto& [key, offset] : index_) {
    double block_max = 0.0;
    for (std::size_t t = 0; t < bs; ++t) block_max = std::max(block_max, std::abs(data_[offset + t]));
    if (block_max > cutoff || (drop_tol == 0.0 && block_max > 0.0)) kept.emplace_back(key, offset);
  }
  std::sort(kept.begin(), kept.end());

  HierMatrix m(max_level_, order_);
  const int rows = m.rows();
  m.row_start_.assign(rows + 1, 0);
  m.upper_begin_.assign(rows, 0);
  m.cols_.reserve(kept.size());
  m.blocks_.reserve(kept.size() * bs);
  for (const auto& [key, offset] : kept) {
    const int r = static_cast<int>(key >> 32);
    ++m.row_start_[r + 1];
    m.cols_.push_back(static_cast<int>(key & 0xffffffffu));
    m.blocks_.insert(m.blocks_.end(), data_.begin() + offset, data_.begin() + offset + bs);
  }
  for (int r = 0; r < rows; ++r) m.row_start_[r + 1] += m.row_start_[r];
  for (int r = 0; r < rows; ++r) {
    const int lr = level_of_position(r);
    int e = m.row_start_[r];
    while (e < m.row_start_[r + 1] && level_of_position(m.cols_[e]) < lr) ++e;
    m.upper_begin_[r] = e;
    if (e > m.row_start_[r]) m.has_lower_ = true;
  }
  return m;
}

BasisCellTable::BasisCellTable(const Basis1d& basis, int max_level, int points_per_cell)
    : basis_(&basis), max_level_(max_level), order_(basis.order()), rule_(gauss_legendre(points_per_cell)) {
  const int cells = 1 << max_level_;
  const double h = 1.0 / cells;
  values_.resize(static_cast<std::size_t>(cells) * (max_level_ + 1) * order_ * rule_.size());
  derivs_.resize(values_.size());
  traces_.resize(static_cast<std::size_t>(cells) * (max_level_ + 1) * order_ * 2);
  for (int c = 0; c < cells; ++c) {
    for (int l = 0; l <= max_level_; ++l) {
      const int j = translation_of_position(ancestor(max_level_, c, l));
      for (int i = 0; i < order_; ++i) {
        for (int q = 0; q < rule_.size(); ++q) {
          const double x = (c + rule_.nodes[q]) * h;
          values_[index(c, l, i, q)] = basis.eval(l, j, i, x);
          derivs_[index(c, l, i, q)] = basis.eval_derivative(l, j, i, x);
        }
        const std::size_t t = ((static_cast<std::size_t>(c) * (max_level_ + 1) + l) * order_ + i) * 2;
        traces_[t] = basis.eval(l, j, i, c * h, Side::right);
        traces_[t + 1] = basis.eval(l, j, i, (c + 1) * h, Side::left);
      }
    }
  }
}

namespace {

// Functions with a nonzero trace on one face: per entry a position and the P
// one-sided values from the minus and plus cells.
struct FaceEntry {
  int pos;
  std::vector<double> minus;
  std::vector<double> plus;
};

struct Face {
  std::vector<FaceEntry> entries;
  double w_minus = 0.0;  // weight limits at the face
  double w_plus = 0.0;
};

FaceEntry& entry_for(std::vector<FaceEntry>& entries, int pos, int order) {
  for (auto& e : entries) {
    if (e.pos == pos) return e;
  }
  entries.push_back(FaceEntry{pos, std::vector<double>(order, 0.0), std::vector<double>(order, 0.0)});
  return entries.back();
}

template <class F>
void for_each_face(const BasisCellTable& t, const Weight1d& w, Boundary bc, F&& fn) {
  const int n = t.max_level();
  const int cells = t.cells();
  const int p_count = t.order();
  const int faces = bc == Boundary::periodic ? cells : cells + 1;
  Face face;
  for (int f = 0; f < faces; ++f) {
    face.entries.clear();
    int minus_cell = f - 1;
    int plus_cell = f < cells ? f : -1;
    double x_minus = static_cast<double>(f) / cells;
    const double x_plus = x_minus;
    if (f == 0) {
      minus_cell = bc == Boundary::periodic ? cells - 1 : -1;
      x_minus = 1.0;
    }
    if (minus_cell >= 0) {
      for (int l = 0; l <= n; ++l) {
        auto& e = entry_for(face.entries, BasisCellTable::ancestor(n, minus_cell, l), p_count);
        for (int i = 0; i < p_count; ++i) e.minus[i] = t.trace(minus_cell, l, i, 1);
      }
    }
    if (plus_cell >= 0) {
      for (int l = 0; l <= n; ++l) {
        auto& e = entry_for(face.entries, BasisCellTable::ancestor(n, plus_cell, l), p_count);
        for (int i = 0; i < p_count; ++i) e.plus[i] = t.trace(plus_cell, l, i, 0);
      }
    }
    face.w_minus = minus_cell >= 0 ? weight_at(w, x_minus, Side::left) : 0.0;
    face.w_plus = plus_cell >= 0 ? weight_at(w, x_plus, Side::right) : 0.0;
    if (minus_cell < 0) face.w_minus = face.w_plus;
    if (plus_cell < 0) face.w_plus = face.w_minus;
    fn(face);
  }
}

// Accumulates int w * f(v_c) * g(v_r) over every finest cell.
template <bool DerivRow>
HierMatrix volume_term(const BasisCellTable& t, const Weight1d& w) {
  const int n = t.max_level();
  const int p_count = t.order();
  const int q_count = t.rule().size();
  const double h = 1.0 / t.cells();
  HierMatrix::Builder builder(n, p_count);
  std::vector<double> wq(q_count);
  for (int c = 0; c < t.cells(); ++c) {
    for (int q = 0; q < q_count; ++q) wq[q] = t.rule().weights[q] * h * weight_at(w, (c + t.rule().nodes[q]) * h, Side::right);
    for (int lr = 0; lr <= n; ++lr) {
      const int r = BasisCellTable::ancestor(n, c, lr);
      for (int lc = 0; lc <= n; ++lc) {
        const int col = BasisCellTable::ancestor(n, c, lc);
        double* blk = builder.block(r, col);
        for (int i = 0; i < p_count; ++i) {
          for (int j = 0; j < p_count; ++j) {
            double s = 0.0;
            for (int q = 0; q < q_count; ++q) {
              const double row_val = DerivRow ? t.derivative(c, lr, i, q) : t.value(c, lr, i, q);
              s += wq[q] * t.value(c, lc, j, q) * row_val;
            }
            blk[i * p_count + j] += s;
          }
        }
      }
    }
  }
  return builder.build();
}

}  // namespace

HierMatrix assemble_mass(const BasisCellTable& table, const Weight1d& weight) {
  return volume_term<false>(table, weight);
}

HierMatrix assemble_advection(const BasisCellTable& table, const Weight1d& phi, Boundary bc) {
  const int n = table.max_level();
  const int p_count = table.order();
  HierMatrix::Builder builder(n, p_count);
  {
    const HierMatrix vol = volume_term<true>(table, phi);
    for (int r = 0; r < vol.rows(); ++r) {
      for (int e = vol.row_begin(r); e < vol.row_end(r); ++e) {
        double* dst = builder.block(r, vol.col(e));
        const double* src = vol.block(e);
        for (int t = 0; t < p_count * p_count; ++t) dst[t] += src[t];
      }
    }
  }
  for_each_face(table, phi, bc, [&](const Face& face) {
    for (const auto& row : face.entries) {
      for (const auto& col : face.entries) {
        double* blk = builder.block(row.pos, col.pos);
        for (int i = 0; i < p_count; ++i) {
          const double jump_r = row.minus[i] - row.plus[i];
          if (jump_r == 0.0) continue;
          for (int j = 0; j < p_count; ++j) {
            const double avg = 0.5 * (face.w_minus * col.minus[j] + face.w_plus * col.plus[j]);
            blk[i * p_count + j] -= avg * jump_r;
          }
        }
      }
    }
  });
  return builder.build();
}

HierMatrix assemble_jump(const BasisCellTable& table, const Weight1d& weight, Boundary bc) {
  const int p_count = table.order();
  HierMatrix::Builder builder(table.max_level(), p_count);
  for_each_face(table, weight, bc, [&](const Face& face) {
    const double w = 0.5 * (face.w_minus + face.w_plus);
    for (const auto& row : face.entries) {
      for (const auto& col : face.entries) {
        double* blk = builder.block(row.pos, col.pos);
        for (int i = 0; i < p_count; ++i) {
          const double jump_r = row.minus[i] - row.plus[i];
          for (int j = 0; j < p_count; ++j) blk[i * p_count + j] += w * (col.minus[j] - col.plus[j]) * jump_r;
        }
      }
    }
  });
  return builder.build();
}

HierMatrix assemble_reflection(const Basis1d& basis, int max_level) {
  const int p_count = basis.order();
  const GaussRule g = gauss_legendre(p_count + 1);
  HierMatrix::Builder builder(max_level, p_count);
  for (int l = 0; l <= max_level; ++l) {
    const int count = elements_at_level(l);
    const double width = l == 0 ? 1.0 : 1.0 / count;
    for (int j = 0; j < count; ++j) {
      const int mirror = count - 1 - j;
      double* blk = builder.block(position_of(l, mirror), position_of(l, j));
      const double lo = mirror * width;
      // Each half of the support is a polynomial piece for both functions.
      for (int half = 0; half < 2; ++half) {
        for (int q = 0; q < g.size(); ++q) {
          const double x = lo + width * 0.5 * (half + g.nodes[q]);
          const double wq = g.weights[q] * width * 0.5;
          for (int i = 0; i < p_count; ++i) {
            const double vr = basis.eval(l, mirror, i, x);
            for (int k = 0; k < p_count; ++k) blk[i * p_count + k] += wq * vr * basis.eval(l, j, k, 1.0 - x);
          }
        }
      }
    }
  }
  return builder.build();
}

}  // namespace sgdg
