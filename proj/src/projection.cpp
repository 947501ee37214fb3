#include "sgdg/projection.hpp"

#include <cmath>
#include <stdexcept>

#include "sgdg/transform.hpp"

namespace sgdg {

QuadratureRule make_quadrature_rule(int resolution, int points) {
  if (resolution < 0 || resolution > SparseLayout::kMaxLevel) throw std::invalid_argument("quadrature resolution out of range");
  return QuadratureRule{resolution, gauss_legendre(points)};
}

QuadratureRule default_rule(const SparseGridFunction& u) {
  return make_quadrature_rule(u.max_level(), u.degree() + 2);
}

namespace {

// Physical coordinates of the composite rule points along one dimension.
std::vector<double> rule_coordinates(const Interval& iv, int resolution, const GaussRule& g) {
  const int cells = 1 << resolution;
  std::vector<double> x(static_cast<std::size_t>(cells) * g.size());
  for (int c = 0; c < cells; ++c) {
    for (int q = 0; q < g.size(); ++q) x[c * g.size() + q] = iv.lo + iv.width() * (c + g.nodes[q]) / cells;
  }
  return x;
}

// Visits every tensor point in row-major order (last dimension fastest).
template <class F>
void for_each_point(const std::vector<std::vector<double>>& coords, F&& fn) {
  const int d = static_cast<int>(coords.size());
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  std::size_t total = 1;
  for (const auto& c : coords) total *= c.size();
  for (int m = 0; m < d; ++m) x[m] = coords[m][0];
  for (std::size_t n = 0; n < total; ++n) {
    fn(n, std::span<const double>(x));
    for (int m = d - 1; m >= 0; --m) {
      if (++idx[m] < static_cast<int>(coords[m].size())) {
        x[m] = coords[m][idx[m]];
        break;
      }
      idx[m] = 0;
      x[m] = coords[m][0];
    }
  }
}

// Refines cell-Legendre data by one level along every line (exact prolongation).
std::vector<double> prolong_cells(std::vector<double> cells, const Basis1d& basis, int dim, int from_level) {
  const int p_count = basis.order();
  std::vector<int> extents(dim, (1 << from_level) * p_count);
  for (int m = 0; m < dim; ++m) {
    transform_lines(cells, extents, m, (2 << from_level) * p_count,
                    [&](std::span<const double> in, std::span<double> out) {
                      const int parents = 1 << from_level;
                      for (int j = 0; j < parents; ++j) {
                        for (int h = 0; h < 2; ++h) {
                          for (int p = 0; p < p_count; ++p) {
                            double v = 0.0;
                            for (int q = 0; q < p_count; ++q) v += basis.scaling_coeff(q, h, p) * in[j * p_count + q];
                            out[(2 * j + h) * p_count + p] = v;
                          }
                        }
                      }
                    });
  }
  return cells;
}

}  // namespace

SparseGridFunction project(const ScalarField& f, std::shared_ptr<const SparseLayout> layout,
                           std::shared_ptr<const Basis1d> basis, Box domain, int points_per_cell) {
  SparseGridFunction u(std::move(layout), std::move(basis), std::move(domain));
  const int q_count = points_per_cell > 0 ? points_per_cell : u.degree() + 2;
  const GaussRule g = gauss_legendre(q_count);
  const int n_max = u.max_level();
  std::vector<std::vector<double>> coords;
  std::size_t total = 1;
  for (int m = 0; m < u.dim(); ++m) {
    coords.push_back(rule_coordinates(u.domain()[m], n_max, g));
    total *= coords.back().size();
    if (total > kMaxFullGridEntries) throw std::length_error("project: full-grid quadrature too large; use project_separable");
  }
  std::vector<double> values(total);
  for_each_point(coords, [&](std::size_t n, std::span<const double> x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw std::domain_error("project: non-finite sample of the projected field");
    values[n] = v;
  });
  const auto cells = points_to_cells(std::move(values), u.dim(), n_max, u.order(), g);
  from_full_cells(cells, u);
  return u;
}

std::vector<double> project_1d(const Function1d& f, const Basis1d& basis, int max_level, Interval iv,
                               int points_per_cell) {
  const int q_count = points_per_cell > 0 ? points_per_cell : basis.degree() + 2;
  const GaussRule g = gauss_legendre(q_count);
  const auto x = rule_coordinates(iv, max_level, g);
  std::vector<double> values(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    values[n] = f(x[n]);
    if (!std::isfinite(values[n])) throw std::domain_error("project_1d: non-finite sample");
  }
  const auto cells = points_to_cells(std::move(values), 1, max_level, basis.order(), g);
  std::vector<double> hier(cells.size());
  MultiwaveletTransform(basis, max_level).forward(cells, hier);
  return hier;
}

void tensorize(std::span<const std::vector<double>> factors_1d, SparseGridFunction& u) {
  const int d = u.dim();
  const int p_count = u.order();
  if (static_cast<int>(factors_1d.size()) != d) throw std::invalid_argument("tensorize: need one factor per dimension");
  const auto& layout = u.layout();
  for (int e = 0; e < layout.num_elements(); ++e) {
    auto blk = u.block(e);
    for (int b = 0; b < u.block_size(); ++b) {
      int rem = b;
      double v = 1.0;
      for (int m = d - 1; m >= 0; --m) {
        const int i = rem % p_count;
        rem /= p_count;
        v *= factors_1d[m][static_cast<std::size_t>(layout.position(e, m)) * p_count + i];
      }
      blk[b] = v;
    }
  }
}

SparseGridFunction project_separable(std::span<const Function1d> factors, std::shared_ptr<const SparseLayout> layout,
                                     std::shared_ptr<const Basis1d> basis, Box domain, int points_per_cell) {
  SparseGridFunction u(std::move(layout), std::move(basis), std::move(domain));
  if (static_cast<int>(factors.size()) != u.dim()) throw std::invalid_argument("project_separable: factor count mismatch");
  std::vector<std::vector<double>> one_d;
  for (int m = 0; m < u.dim(); ++m) {
    one_d.push_back(project_1d(factors[m], u.basis(), u.max_level(), u.domain()[m], points_per_cell));
  }
  tensorize(one_d, u);
  return u;
}

SparseGridFunction project_separable_sum(const std::vector<std::vector<Function1d>>& terms,
                                         std::shared_ptr<const SparseLayout> layout,
                                         std::shared_ptr<const Basis1d> basis, Box domain, int points_per_cell) {
  SparseGridFunction sum(layout, basis, domain);
  for (const auto& t : terms) sum += project_separable(t, layout, basis, domain, points_per_cell);
  return sum;
}

std::vector<double> sample_at_rule(const SparseGridFunction& u, const QuadratureRule& rule) {
  if (rule.resolution < u.max_level()) throw std::invalid_argument("quadrature resolution below the space level");
  auto cells = to_full_cells(u);
  for (int n = u.max_level(); n < rule.resolution; ++n) cells = prolong_cells(std::move(cells), u.basis(), u.dim(), n);
  return cells_to_points(std::move(cells), u.dim(), rule.resolution, u.order(), rule.gauss);
}

double integrate_functional(const SparseGridFunction& u, const PointFunctional& g, const QuadratureRule& rule) {
  const auto values = sample_at_rule(u, rule);
  std::vector<std::vector<double>> coords;
  std::vector<std::vector<double>> weights;
  const int cells = 1 << rule.resolution;
  for (int m = 0; m < u.dim(); ++m) {
    coords.push_back(rule_coordinates(u.domain()[m], rule.resolution, rule.gauss));
    std::vector<double> w(coords.back().size());
    for (std::size_t n = 0; n < w.size(); ++n) w[n] = rule.gauss.weights[n % rule.gauss.size()] * u.domain()[m].width() / cells;
    weights.push_back(std::move(w));
  }
  const int d = u.dim();
  double sum = 0.0;
  for_each_point(coords, [&](std::size_t n, std::span<const double> x) {
    double w = 1.0;
    std::size_t rem = n;
    for (int m = d - 1; m >= 0; --m) {
      const std::size_t ext = coords[m].size();
      w *= weights[m][rem % ext];
      rem /= ext;
    }
    sum += w * g(values[n], x);
  });
  return sum;
}

double l2_error(const SparseGridFunction& u, const ScalarField& exact, const QuadratureRule& rule) {
  return std::sqrt(integrate_functional(
      u,
      [&exact](double value, std::span<const double> x) {
        const double diff = value - exact(x);
        return diff * diff;
      },
      rule));
}

}  // namespace sgdg
