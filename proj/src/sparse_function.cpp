#include "sgdg/sparse_function.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace sgdg {

Box unit_box(int dim) { return Box(static_cast<std::size_t>(dim), Interval{0.0, 1.0}); }

double box_volume(const Box& box) {
  double v = 1.0;
  for (const auto& iv : box) v *= iv.width();
  return v;
}

SparseGridFunction::SparseGridFunction(std::shared_ptr<const SparseLayout> layout,
                                       std::shared_ptr<const Basis1d> basis, Box domain)
    : layout_(std::move(layout)), basis_(std::move(basis)), domain_(std::move(domain)) {
  if (!layout_ || !basis_) throw std::invalid_argument("SparseGridFunction: null layout or basis");
  if (static_cast<int>(domain_.size()) != layout_->dim()) {
    throw std::invalid_argument("SparseGridFunction: domain dimension mismatch");
  }
  for (const auto& iv : domain_) {
    if (!(iv.hi > iv.lo)) throw std::invalid_argument("SparseGridFunction: empty domain interval");
  }
  block_size_ = 1;
  for (int m = 0; m < layout_->dim(); ++m) block_size_ *= basis_->order();
  coeffs_.assign(static_cast<std::size_t>(layout_->num_elements()) * block_size_, 0.0);
}

std::size_t SparseGridFunction::flat_index(const BasisId& id) const {
  const int d = dim();
  if (id.level.dim() != d || static_cast<int>(id.translation.size()) != d || static_cast<int>(id.poly.size()) != d) {
    throw std::out_of_range("BasisId dimension mismatch");
  }
  std::vector<int> pos(d);
  int within = 0;
  for (int m = 0; m < d; ++m) {
    const int l = id.level.levels[m];
    const int j = id.translation[m];
    if (l < 0 || j < 0 || j >= elements_at_level(l)) throw std::out_of_range("BasisId translation out of range");
    if (id.poly[m] < 0 || id.poly[m] >= order()) throw std::out_of_range("BasisId poly index out of range");
    pos[m] = position_of(l, j);
    within = within * order() + id.poly[m];
  }
  const int e = layout_->element_index(pos);
  if (e < 0) throw std::out_of_range("BasisId outside the sparse index set");
  return static_cast<std::size_t>(e) * block_size_ + within;
}

double SparseGridFunction::coefficient(const BasisId& id) const { return coeffs_[flat_index(id)]; }

void SparseGridFunction::set_coefficient(const BasisId& id, double value) { coeffs_[flat_index(id)] = value; }

SparseGridFunction SparseGridFunction::zeros_like() const { return SparseGridFunction(layout_, basis_, domain_); }

bool SparseGridFunction::same_space(const SparseGridFunction& other) const {
  if (layout_->max_level() != other.layout_->max_level() || layout_->dim() != other.layout_->dim()) return false;
  if (degree() != other.degree()) return false;
  for (int m = 0; m < dim(); ++m) {
    if (domain_[m].lo != other.domain_[m].lo || domain_[m].hi != other.domain_[m].hi) return false;
  }
  return true;
}

SparseGridFunction& SparseGridFunction::operator+=(const SparseGridFunction& other) {
  if (!same_space(other)) throw std::invalid_argument("SparseGridFunction: space mismatch");
  for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += other.coeffs_[n];
  return *this;
}

SparseGridFunction& SparseGridFunction::operator-=(const SparseGridFunction& other) {
  if (!same_space(other)) throw std::invalid_argument("SparseGridFunction: space mismatch");
  for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= other.coeffs_[n];
  return *this;
}

SparseGridFunction& SparseGridFunction::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

SparseGridFunction operator-(SparseGridFunction a, const SparseGridFunction& b) { return a -= b; }
SparseGridFunction operator+(SparseGridFunction a, const SparseGridFunction& b) { return a += b; }

double eval_point(const SparseGridFunction& u, std::span<const double> x, std::span<const Side> sides) {
  const int d = u.dim();
  const int n_max = u.max_level();
  const int p_count = u.order();
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("eval_point: point dimension mismatch");
  // vals[(m * (N+1) + l) * P + i] and the ancestor position per (m, l)
  std::vector<double> vals(static_cast<std::size_t>(d) * (n_max + 1) * p_count);
  std::vector<int> anc(static_cast<std::size_t>(d) * (n_max + 1));
  for (int m = 0; m < d; ++m) {
    const Interval& iv = u.domain()[m];
    if (!(x[m] >= iv.lo && x[m] <= iv.hi)) throw std::out_of_range("eval_point: point outside domain");
    const double xh = std::min(1.0, std::max(0.0, (x[m] - iv.lo) / iv.width()));
    const Side side = sides.empty() ? Side::right : sides[m];
    for (int l = 0; l <= n_max; ++l) {
      const int count = elements_at_level(l);
      int j = 0;
      if (l > 0) j = side == Side::left ? static_cast<int>(std::ceil(xh * count)) - 1 : static_cast<int>(std::floor(xh * count));
      j = std::clamp(j, 0, count - 1);
      anc[m * (n_max + 1) + l] = position_of(l, j);
      u.basis().eval_all(l, j, xh, side,
                         std::span<double>(vals.data() + (static_cast<std::size_t>(m) * (n_max + 1) + l) * p_count,
                                           static_cast<std::size_t>(p_count)));
    }
  }
  double sum = 0.0;
  std::vector<int> pos(d);
  std::vector<double> partial(u.block_size());
  for (const auto& lv : u.layout().levels()) {
    for (int m = 0; m < d; ++m) pos[m] = anc[m * (n_max + 1) + lv.levels[m]];
    const int e = u.layout().element_index(pos);
    const auto blk = u.block(e);
    // contract one dimension at a time, last dimension first
    int len = u.block_size();
    std::copy(blk.begin(), blk.end(), partial.begin());
    for (int m = d - 1; m >= 0; --m) {
      const double* v = vals.data() + (static_cast<std::size_t>(m) * (n_max + 1) + lv.levels[m]) * p_count;
      const int outer = len / p_count;
      for (int o = 0; o < outer; ++o) {
        double s = 0.0;
        for (int i = 0; i < p_count; ++i) s += partial[o * p_count + i] * v[i];
        partial[o] = s;
      }
      len = outer;
    }
    sum += partial[0];
  }
  return sum;
}

double norm_l2(const SparseGridFunction& u) {
  double s = 0.0;
  for (double c : u.coeffs()) s += c * c;
  return std::sqrt(s * box_volume(u.domain()));
}

void write_snapshot(std::ostream& os, const SparseGridFunction& u, int resolution, double time) {
  if (resolution < 2) throw std::invalid_argument("write_snapshot: resolution must be >= 2");
  const int d = u.dim();
  os << "# dimension " << d << "\n# N " << u.max_level() << "\n# k " << u.degree() << "\n# time "
     << std::setprecision(17) << time << "\n";
  std::vector<double> x(d);
  for (int m = 0; m < d; ++m) x[m] = 0.5 * (u.domain()[m].lo + u.domain()[m].hi);
  if (d > 2) {
    os << "# slice";
    for (int m = 2; m < d; ++m) os << " x" << m + 1 << '=' << x[m];
    os << '\n';
  }
  const int ny = d >= 2 ? resolution : 1;
  for (int a = 0; a < resolution; ++a) {
    x[0] = u.domain()[0].lo + u.domain()[0].width() * a / (resolution - 1);
    for (int b = 0; b < ny; ++b) {
      if (d >= 2) x[1] = u.domain()[1].lo + u.domain()[1].width() * b / (resolution - 1);
      for (int m = 0; m < d; ++m) os << x[m] << ' ';
      os << eval_point(u, x) << '\n';
    }
  }
}

}  // namespace sgdg
