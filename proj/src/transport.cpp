#include "sgdg/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sgdg/projection.hpp"
#include "sgdg/quadrature.hpp"
#include "sgdg/transform.hpp"

namespace sgdg {

Factor1d Factor1d::constant(double c) {
  Factor1d f;
  f.kind_ = Kind::constant;
  f.value_ = c;
  return f;
}

Factor1d Factor1d::analytic(std::function<double(double)> fn) {
  Factor1d f;
  f.kind_ = Kind::analytic;
  f.fn_ = std::move(fn);
  return f;
}

Factor1d Factor1d::piecewise(std::vector<double> cells, int order, int max_level, Interval iv) {
  if (cells.size() != (std::size_t{1} << max_level) * order) throw std::invalid_argument("Factor1d: cell data size mismatch");
  Factor1d f;
  f.kind_ = Kind::piecewise;
  f.cells_ = std::move(cells);
  f.order_ = order;
  f.max_level_ = max_level;
  f.iv_ = iv;
  return f;
}

Factor1d Factor1d::from_hierarchical(std::span<const double> hier, const Basis1d& basis, int max_level, Interval iv) {
  const MultiwaveletTransform tr(basis, max_level);
  std::vector<double> cells(tr.size());
  tr.inverse(hier, cells);
  return piecewise(std::move(cells), basis.order(), max_level, iv);
}

double Factor1d::operator()(double x, Side side) const {
  switch (kind_) {
    case Kind::constant: return value_;
    case Kind::analytic: return fn_(x);
    case Kind::piecewise: break;
  }
  const int n_cells = 1 << max_level_;
  const double s = (x - iv_.lo) / iv_.width() * n_cells;
  int cell = side == Side::left ? static_cast<int>(std::ceil(s)) - 1 : static_cast<int>(std::floor(s));
  cell = std::clamp(cell, 0, n_cells - 1);
  const double t = std::clamp(s - cell, 0.0, 1.0);
  double vals[Basis1d::kMaxDegree + 1];
  legendre_values(order_ - 1, t, std::span<double>(vals, order_));
  double v = 0.0;
  for (int p = 0; p < order_; ++p) v += cells_[static_cast<std::size_t>(cell) * order_ + p] * vals[p];
  return std::sqrt(static_cast<double>(n_cells)) * v;
}

double Factor1d::max_abs(Interval iv, int level, int per_cell) const {
  if (kind_ == Kind::constant) return std::abs(value_);
  const int n_cells = 1 << level;
  const int pts = std::max(per_cell, 2);
  double best = 0.0;
  for (int c = 0; c < n_cells; ++c) {
    for (int s = 0; s < pts; ++s) {
      const double t = static_cast<double>(s) / (pts - 1);
      const double x = iv.lo + iv.width() * (c + t) / n_cells;
      best = std::max(best, std::abs((*this)(x, s + 1 == pts ? Side::left : Side::right)));
    }
  }
  return best;
}

double VelocityField::time_scale(int m, double t) const {
  if (time_factor.empty() || !time_factor[m]) return 1.0;
  return time_factor[m](t);
}

double VelocityField::eval(int m, std::span<const double> x, double t) const {
  double sum = 0.0;
  for (const auto& term : components[m]) {
    double v = term.coeff;
    for (std::size_t n = 0; n < term.factors.size(); ++n) v *= term.factors[n](x[n]);
    sum += v;
  }
  return time_scale(m, t) * sum;
}

namespace {

std::vector<Factor1d> ones(int d) { return std::vector<Factor1d>(d, Factor1d::constant(1.0)); }

Factor1d shifted_linear(double shift) {
  return Factor1d::analytic([shift](double x) { return x - shift; });
}

}  // namespace

VelocityField constant_field(std::span<const double> a) {
  VelocityField f;
  const int d = static_cast<int>(a.size());
  std::vector<double> mx;
  for (int m = 0; m < d; ++m) {
    f.components.push_back({SeparableTerm{a[m], ones(d)}});
    mx.push_back(std::abs(a[m]));
  }
  f.exact_max = mx;
  return f;
}

VelocityField solid_rotation_2d() {
  VelocityField f;
  SeparableTerm a0{-1.0, ones(2)};
  a0.factors[1] = shifted_linear(0.5);
  SeparableTerm a1{1.0, ones(2)};
  a1.factors[0] = shifted_linear(0.5);
  f.components = {{a0}, {a1}};
  f.exact_max = std::vector<double>{0.5, 0.5};
  return f;
}

VelocityField solid_rotation_3d() {
  const double s = std::numbers::sqrt2 / 2.0;
  VelocityField f;
  SeparableTerm a0{-s, ones(3)};
  a0.factors[1] = shifted_linear(0.5);
  SeparableTerm a1x{s, ones(3)};
  a1x.factors[0] = shifted_linear(0.5);
  SeparableTerm a1z{s, ones(3)};
  a1z.factors[2] = shifted_linear(0.5);
  SeparableTerm a2{-s, ones(3)};
  a2.factors[1] = shifted_linear(0.5);
  f.components = {{a0}, {a1x, a1z}, {a2}};
  f.exact_max = std::vector<double>{s / 2, s, s / 2};
  return f;
}

VelocityField deformational_field(double period) {
  const double pi = std::numbers::pi;
  const auto sin_sq = Factor1d::analytic([pi](double x) { return std::pow(std::sin(pi * x), 2); });
  const auto sin_2 = Factor1d::analytic([pi](double x) { return std::sin(2 * pi * x); });
  VelocityField f;
  f.components = {{SeparableTerm{1.0, {sin_sq, sin_2}}}, {SeparableTerm{-1.0, {sin_2, sin_sq}}}};
  const auto g = [pi, period](double t) { return std::cos(pi * t / period); };
  f.time_factor = {g, g};
  f.exact_max = std::vector<double>{1.0, 1.0};
  return f;
}

double scalar_flux(double a_dot_n, double u_minus, double u_plus, const FluxSpec& spec, double alpha_n) {
  if (alpha_n < 0.0) throw std::invalid_argument("scalar_flux: negative alpha");
  const double avg = 0.5 * (u_minus + u_plus);
  const double jump = u_minus - u_plus;
  if (spec.type == FluxType::upwind) return a_dot_n * avg + 0.5 * std::abs(a_dot_n) * jump;
  return a_dot_n * avg + 0.5 * alpha_n * jump;
}

VelocityField project_field(const VelocityField& field, const Basis1d& basis, int max_level, const Box& domain) {
  VelocityField out = field;
  for (auto& comp : out.components) {
    for (auto& term : comp) {
      for (std::size_t n = 0; n < term.factors.size(); ++n) {
        auto& f = term.factors[n];
        if (f.kind() != Factor1d::Kind::analytic) continue;
        const auto hier = project_1d([&f](double x) { return f(x); }, basis, max_level, domain[n]);
        f = Factor1d::from_hierarchical(hier, basis, max_level, domain[n]);
      }
    }
  }
  out.exact_max.reset();
  out.projected = true;
  return out;
}

std::vector<double> compute_alpha(const VelocityField& field, double t, const Box& domain, int max_level, int degree,
                                  AlphaSource source) {
  std::vector<double> alpha(field.dim(), 0.0);
  for (int m = 0; m < field.dim(); ++m) {
    const double g = std::abs(field.time_scale(m, t));
    if (source == AlphaSource::exact && field.exact_max) {
      alpha[m] = g * (*field.exact_max)[m];
      continue;
    }
    double bound = 0.0;
    for (const auto& term : field.components[m]) {
      double b = std::abs(term.coeff);
      for (std::size_t n = 0; n < term.factors.size(); ++n) b *= term.factors[n].max_abs(domain[n], max_level, 4 * (degree + 1));
      bound += b;
    }
    alpha[m] = g * bound;
  }
  return alpha;
}

TransportOperator::TransportOperator(std::shared_ptr<const SparseLayout> layout, std::shared_ptr<const Basis1d> basis,
                                     Box domain, VelocityField field, FluxSpec flux, BoundarySpec bc)
    : layout_(std::move(layout)),
      basis_(std::move(basis)),
      domain_(std::move(domain)),
      field_(std::move(field)),
      flux_(flux),
      bc_(std::move(bc)),
      applier_(layout_, basis_->order()) {
  const int d = layout_->dim();
  if (field_.dim() != d || static_cast<int>(domain_.size()) != d || static_cast<int>(bc_.size()) != d) {
    throw std::invalid_argument("TransportOperator: field, domain and boundary must match the layout dimension");
  }
  for (int m = 0; m < d; ++m) {
    if (flux_.type == FluxType::upwind && field_.components[m].size() > 1) {
      throw std::invalid_argument(
          "TransportOperator: upwind flux needs each velocity component to be a single separable term; "
          "use Lax-Friedrichs");
    }
    for (auto& term : field_.components[m]) {
      if (term.factors.empty()) term.factors = ones(d);
      if (static_cast<int>(term.factors.size()) != d) throw std::invalid_argument("TransportOperator: factor count mismatch");
    }
  }
  tables_.emplace_back(*basis_, layout_->max_level(), 2 * basis_->order());
  if (flux_.type == FluxType::lax_friedrichs) {
    for (int m = 0; m < d; ++m) plain_jump_.push_back(assemble_jump(tables_[0], {}, bc_[m]));
  }
  for (int m = 0; m < d; ++m) {
    for (int t = 0; t < static_cast<int>(field_.components[m].size()); ++t) {
      Part p;
      p.component = m;
      p.term = t;
      build_part(p);
      parts_.push_back(std::move(p));
    }
  }
}

Weight1d TransportOperator::weight_of(const Factor1d& f, int dim, bool absolute) const {
  const Interval iv = domain_[dim];
  return [f, iv, absolute](double xh, Side side) {
    const double v = f(iv.lo + iv.width() * xh, side);
    return absolute ? std::abs(v) : v;
  };
}

void TransportOperator::build_part(Part& p) {
  const int d = layout_->dim();
  const int m = p.component;
  const auto& term = field_.components[m][p.term];
  const auto& table = tables_[0];
  const bool upwind = flux_.type == FluxType::upwind;
  p.fold = term.coeff;
  p.abs_fold = std::abs(term.coeff);
  p.mass.assign(d, HierMatrix());
  p.abs_mass.assign(d, HierMatrix());
  p.weighted.assign(d, 0);
  const Factor1d& fm = term.factors[m];
  if (fm.is_constant()) {
    p.fold *= fm.constant_value();
    p.abs_fold *= std::abs(fm.constant_value());
    p.adv = assemble_advection(table, {}, bc_[m]);
    if (upwind) p.jump = assemble_jump(table, {}, bc_[m]);
  } else {
    p.adv = assemble_advection(table, weight_of(fm, m, false), bc_[m]);
    if (upwind) p.jump = assemble_jump(table, weight_of(fm, m, true), bc_[m]);
  }
  bool others_constant = true;
  for (int n = 0; n < d; ++n) {
    if (n == m) continue;
    const Factor1d& fn = term.factors[n];
    if (fn.is_constant()) {
      p.fold *= fn.constant_value();
      p.abs_fold *= std::abs(fn.constant_value());
      continue;
    }
    others_constant = false;
    p.weighted[n] = 1;
    p.mass[n] = assemble_mass(table, weight_of(fn, n, false));
    if (upwind) p.abs_mass[n] = assemble_mass(table, weight_of(fn, n, true));
  }
  const bool time_independent = field_.time_factor.empty() || !field_.time_factor[m];
  p.use_combined = upwind && others_constant && time_independent;
  if (p.use_combined) build_combined(p);
}

void TransportOperator::build_combined(Part& p) {
  p.combined = HierMatrix::combine(p.fold, p.adv, -0.5 * p.abs_fold, p.jump);
}

void TransportOperator::set_factor(int m, int term, int n, Factor1d factor) {
  field_.components.at(m).at(term).factors.at(n) = std::move(factor);
  field_.exact_max.reset();
  alpha_static_.clear();
  for (auto& p : parts_) {
    if (p.component == m && p.term == term) build_part(p);
  }
}

void TransportOperator::apply(double t, std::span<const double> in, std::span<double> out) {
  const int d = layout_->dim();
  std::fill(out.begin(), out.end(), 0.0);
  TensorTerm term;
  term.factors.assign(d, nullptr);
  for (const auto& p : parts_) {
    const int m = p.component;
    const double inv_w = 1.0 / domain_[m].width();
    std::fill(term.factors.begin(), term.factors.end(), nullptr);
    if (p.use_combined) {
      term.factors[m] = &p.combined;
      term.coeff = inv_w;
      applier_.apply(term, in, out);
      continue;
    }
    const double g = field_.time_scale(m, t);
    if (g == 0.0) continue;
    term.factors[m] = &p.adv;
    for (int n = 0; n < d; ++n) {
      if (n != m && p.weighted[n]) term.factors[n] = &p.mass[n];
    }
    term.coeff = g * p.fold * inv_w;
    if (term.coeff != 0.0) applier_.apply(term, in, out);
    if (flux_.type == FluxType::upwind) {
      term.factors[m] = &p.jump;
      for (int n = 0; n < d; ++n) {
        if (n != m) term.factors[n] = term.factors[n] ? &p.abs_mass[n] : nullptr;
      }
      term.coeff = -0.5 * std::abs(g) * p.abs_fold * inv_w;
      if (term.coeff != 0.0) applier_.apply(term, in, out);
    }
  }
  if (flux_.type == FluxType::lax_friedrichs) {
    std::vector<double> alpha;
    if (alpha_override_) {
      alpha = *alpha_override_;
    } else if (!alpha_static_.empty()) {
      alpha = alpha_static_;
    } else {
      alpha = compute_alpha(field_, t, domain_, layout_->max_level(), basis_->degree(), flux_.alpha);
      if (field_.time_factor.empty()) alpha_static_ = alpha;
    }
    for (int m = 0; m < d; ++m) {
      if (alpha[m] == 0.0) continue;
      std::fill(term.factors.begin(), term.factors.end(), nullptr);
      term.factors[m] = &plain_jump_[m];
      term.coeff = -0.5 * alpha[m] / domain_[m].width();
      applier_.apply(term, in, out);
    }
  }
}

SparseGridFunction apply_rhs(const SparseGridFunction& u, const VelocityField& field, const FluxSpec& spec,
                             const BoundarySpec& bc, double t) {
  TransportOperator op(u.layout_ptr(), u.basis_ptr(), u.domain(), field, spec, bc);
  auto r = u.zeros_like();
  op.apply(t, u.coeffs(), r.coeffs());
  return r;
}

}  // namespace sgdg
