#include "sgdg/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace sgdg {

MultiwaveletTransform::MultiwaveletTransform(const Basis1d& basis, int max_level)
    : max_level_(max_level), order_(basis.order()) {
  if (max_level < 0 || max_level > SparseLayout::kMaxLevel) {
    throw std::invalid_argument("MultiwaveletTransform: level out of range");
  }
  const int p_count = order_;
  h_.resize(static_cast<std::size_t>(p_count) * 2 * p_count);
  g_.resize(h_.size());
  for (int a = 0; a < p_count; ++a) {
    for (int h = 0; h < 2; ++h) {
      for (int p = 0; p < p_count; ++p) {
        h_[(a * 2 + h) * p_count + p] = basis.scaling_coeff(a, h, p);
        g_[(a * 2 + h) * p_count + p] = basis.wavelet_coeff(a, h, p);
      }
    }
  }
}

void MultiwaveletTransform::forward(std::span<const double> cells, std::span<double> hier) const {
  const int p_count = order_;
  std::vector<double> s(cells.begin(), cells.end());
  std::vector<double> coarse;
  for (int n = max_level_; n >= 1; --n) {
    const int parents = 1 << (n - 1);
    coarse.assign(static_cast<std::size_t>(parents) * p_count, 0.0);
    for (int j = 0; j < parents; ++j) {
      double* wav = hier.data() + static_cast<std::size_t>(position_of(n, j)) * p_count;
      for (int a = 0; a < p_count; ++a) {
        double sc = 0.0;
        double wv = 0.0;
        for (int h = 0; h < 2; ++h) {
          const double* child = s.data() + static_cast<std::size_t>(2 * j + h) * p_count;
          for (int p = 0; p < p_count; ++p) {
            sc += h_[(a * 2 + h) * p_count + p] * child[p];
            wv += g_[(a * 2 + h) * p_count + p] * child[p];
          }
        }
        coarse[j * p_count + a] = sc;
        wav[a] = wv;
      }
    }
    s.swap(coarse);
  }
  for (int p = 0; p < p_count; ++p) hier[p] = s[p];
}

void MultiwaveletTransform::inverse(std::span<const double> hier, std::span<double> cells) const {
  const int p_count = order_;
  std::vector<double> s(hier.begin(), hier.begin() + p_count);
  std::vector<double> fine;
  for (int n = 1; n <= max_level_; ++n) {
    const int parents = 1 << (n - 1);
    fine.assign(static_cast<std::size_t>(2 * parents) * p_count, 0.0);
    for (int j = 0; j < parents; ++j) {
      const double* wav = hier.data() + static_cast<std::size_t>(position_of(n, j)) * p_count;
      const double* par = s.data() + static_cast<std::size_t>(j) * p_count;
      for (int h = 0; h < 2; ++h) {
        double* child = fine.data() + static_cast<std::size_t>(2 * j + h) * p_count;
        for (int p = 0; p < p_count; ++p) {
          double v = 0.0;
          for (int a = 0; a < p_count; ++a) {
            v += h_[(a * 2 + h) * p_count + p] * par[a] + g_[(a * 2 + h) * p_count + p] * wav[a];
          }
          child[p] = v;
        }
      }
    }
    s.swap(fine);
  }
  std::copy(s.begin(), s.end(), cells.begin());
}

void transform_lines(std::vector<double>& data, std::vector<int>& extents, int m, int new_extent,
                     const std::function<void(std::span<const double>, std::span<double>)>& line_fn) {
  const int d = static_cast<int>(extents.size());
  std::size_t outer = 1, inner = 1;
  for (int a = 0; a < m; ++a) outer *= extents[a];
  for (int a = m + 1; a < d; ++a) inner *= extents[a];
  const int old_extent = extents[m];
  const std::size_t new_size = outer * new_extent * inner;
  if (new_size > kMaxFullGridEntries) throw std::length_error("full-grid array too large for this resolution");
  std::vector<double> out(new_size);
  std::vector<double> line_in(old_extent), line_out(new_extent);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      for (int k = 0; k < old_extent; ++k) line_in[k] = data[(o * old_extent + k) * inner + i];
      line_fn(line_in, line_out);
      for (int k = 0; k < new_extent; ++k) out[(o * new_extent + k) * inner + i] = line_out[k];
    }
  }
  data.swap(out);
  extents[m] = new_extent;
}

std::vector<double> to_full_cells(const SparseGridFunction& u) {
  const int d = u.dim();
  const int p_count = u.order();
  const int n_max = u.max_level();
  const int ext = (1 << n_max) * p_count;
  std::size_t total = 1;
  for (int m = 0; m < d; ++m) {
    total *= ext;
    if (total > kMaxFullGridEntries) throw std::length_error("to_full_cells: full grid too large");
  }
  std::vector<double> data(total, 0.0);
  const auto& layout = u.layout();
  std::vector<std::size_t> stride(d);
  stride[d - 1] = 1;
  for (int m = d - 2; m >= 0; --m) stride[m] = stride[m + 1] * ext;
  std::vector<int> idx(d);
  for (int e = 0; e < layout.num_elements(); ++e) {
    const auto blk = u.block(e);
    for (int b = 0; b < u.block_size(); ++b) {
      int rem = b;
      std::size_t flat = 0;
      for (int m = d - 1; m >= 0; --m) {
        const int i = rem % p_count;
        rem /= p_count;
        flat += (static_cast<std::size_t>(layout.position(e, m)) * p_count + i) * stride[m];
      }
      data[flat] = blk[b];
    }
  }
  MultiwaveletTransform tr(u.basis(), n_max);
  std::vector<int> extents(d, ext);
  for (int m = 0; m < d; ++m) {
    transform_lines(data, extents, m, ext,
                    [&](std::span<const double> in, std::span<double> out) { tr.inverse(in, out); });
  }
  return data;
}

void from_full_cells(std::span<const double> cells, SparseGridFunction& u) {
  const int d = u.dim();
  const int p_count = u.order();
  const int n_max = u.max_level();
  const int ext = (1 << n_max) * p_count;
  std::vector<double> data(cells.begin(), cells.end());
  MultiwaveletTransform tr(u.basis(), n_max);
  std::vector<int> extents(d, ext);
  for (int m = 0; m < d; ++m) {
    transform_lines(data, extents, m, ext,
                    [&](std::span<const double> in, std::span<double> out) { tr.forward(in, out); });
  }
  const auto& layout = u.layout();
  std::vector<std::size_t> stride(d);
  stride[d - 1] = 1;
  for (int m = d - 2; m >= 0; --m) stride[m] = stride[m + 1] * ext;
  for (int e = 0; e < layout.num_elements(); ++e) {
    auto blk = u.block(e);
    for (int b = 0; b < u.block_size(); ++b) {
      int rem = b;
      std::size_t flat = 0;
      for (int m = d - 1; m >= 0; --m) {
        const int i = rem % p_count;
        rem /= p_count;
        flat += (static_cast<std::size_t>(layout.position(e, m)) * p_count + i) * stride[m];
      }
      blk[b] = data[flat];
    }
  }
}

namespace {

// Legendre values at the rule nodes, [q][p].
std::vector<double> legendre_table(int order, const GaussRule& rule) {
  std::vector<double> table(static_cast<std::size_t>(rule.size()) * order);
  for (int q = 0; q < rule.size(); ++q) {
    legendre_values(order - 1, rule.nodes[q], std::span<double>(table.data() + q * order, order));
  }
  return table;
}

}  // namespace

std::vector<double> cells_to_points(std::vector<double> cells, int dim, int max_level, int order,
                                    const GaussRule& rule) {
  const int n_cells = 1 << max_level;
  const int q_count = rule.size();
  const auto table = legendre_table(order, rule);
  const double amp = std::sqrt(static_cast<double>(n_cells));
  std::vector<int> extents(dim, n_cells * order);
  for (int m = 0; m < dim; ++m) {
    transform_lines(cells, extents, m, n_cells * q_count, [&](std::span<const double> in, std::span<double> out) {
      for (int c = 0; c < n_cells; ++c) {
        for (int q = 0; q < q_count; ++q) {
          double v = 0.0;
          for (int p = 0; p < order; ++p) v += in[c * order + p] * table[q * order + p];
          out[c * q_count + q] = amp * v;
        }
      }
    });
  }
  return cells;
}

std::vector<double> points_to_cells(std::vector<double> values, int dim, int max_level, int order,
                                    const GaussRule& rule) {
  const int n_cells = 1 << max_level;
  const int q_count = rule.size();
  const auto table = legendre_table(order, rule);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_cells));
  std::vector<int> extents(dim, n_cells * q_count);
  for (int m = 0; m < dim; ++m) {
    transform_lines(values, extents, m, n_cells * order, [&](std::span<const double> in, std::span<double> out) {
      for (int c = 0; c < n_cells; ++c) {
        for (int p = 0; p < order; ++p) {
          double v = 0.0;
          for (int q = 0; q < q_count; ++q) v += rule.weights[q] * in[c * q_count + q] * table[q * order + p];
          out[c * order + p] = amp * v;
        }
      }
    });
  }
  return values;
}

}  // namespace sgdg
